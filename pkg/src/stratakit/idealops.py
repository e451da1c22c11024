"""Ideal-level operations: saturation, elimination, intersection, dimension,
independent variable subsets, radical membership, containment and
equidimensional decomposition.

Everything reduces to Groebner bases with block orders.  Saturation uses a
single fresh tag variable (one basis computation per saturating element);
ideal intersection uses the t*I + (1-t)*J trick.  Decomposition into
equidimensional parts splits off the part dominating a maximal independent
variable subset and recurses on the remainder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .groebner import (
    GroebnerBasis,
    MonomialIdeal,
    buchberger,
    hilbert,
    is_member,
    leading_coefficient_over,
    minimalize_over_fraction_field,
    normal_form,
)
from .polyring import (
    GrevLex,
    MonomialOrder,
    PolyError,
    PolyRing,
    Polynomial,
    block_order,
    grevlex,
    lcm_set,
    squarefree_part,
)


class DomainError(PolyError):
    """Operation applied outside its mathematical domain."""


class Ideal:
    """An ideal of Q[x] given by normalized generators, with a basis cache."""

    __slots__ = ("ring", "generators", "_gb_cache")

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial]):
        gens = []
        seen = set()
        for g in generators:
            if g.ring != ring:
                raise PolyError("generator from a different ring")
            if g.is_zero():
                continue
            g = g.normalized()
            if g.terms not in seen:
                seen.add(g.terms)
                gens.append(g)
        gens.sort(key=lambda g: (GrevLex(ring.arity).key(g.terms[0][0]),
                                 len(g.terms), g.terms))
        self.ring = ring
        self.generators = tuple(gens)
        self._gb_cache: dict = {}

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.ring, self.generators))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal({gens})"

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def groebner(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        if order is None:
            order = grevlex(self.ring)
        sig = order.signature()
        gb = self._gb_cache.get(sig)
        if gb is None:
            if not self.generators:
                gb = GroebnerBasis(self.ring, order, ())
            else:
                gb = buchberger(self.generators, order)
            self._gb_cache[sig] = gb
        return gb

    def is_unit(self) -> bool:
        if any(g.is_constant() for g in self.generators):
            return True
        return self.groebner().is_unit()

    def key(self) -> tuple:
        """Canonical identity based on the reduced grevlex basis."""
        return self.groebner().key()

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        if self.is_zero_ideal():
            return False
        return is_member(f, self.groebner())


def ideal(ring: PolyRing, gens: Iterable[Polynomial]) -> Ideal:
    return Ideal(ring, gens)


@dataclass(frozen=True)
class VariableSubset:
    """A subset of the ring's variables, by index."""

    ring: PolyRing
    members: frozenset

    def __post_init__(self):
        if any(not 0 <= i < self.ring.arity for i in self.members):
            raise PolyError("variable index out of range")

    def names(self) -> list[str]:
        return [self.ring.names[i] for i in sorted(self.members)]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class EquidimPiece:
    """An ideal all of whose minimal primes share the stated dimension."""

    ideal: Ideal
    dimension: int

    def key(self) -> tuple:
        return self.ideal.key()


# ---------------------------------------------------------------------------
# Ring plumbing: tag variables and subring restriction


def _with_tag(ring: PolyRing) -> tuple[PolyRing, int]:
    name = ring.fresh_names(1, "tag_")[0]
    return ring.extended([name]), ring.arity


def _lift(f: Polynomial, big: PolyRing) -> Polynomial:
    return f.map_ring(big, list(range(f.ring.arity)))


def _drop_tag_basis(G: GroebnerBasis, ring: PolyRing, tag: int) -> list[Polynomial]:
    out = []
    for g in G.basis:
        if g.degree_in(tag) == 0:
            out.append(g.restrict_ring(ring, list(range(ring.arity))))
    return out


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    """I : f^infinity via one tag-variable elimination."""
    if f.is_zero():
        raise DomainError("saturation by zero")
    if f.ring != I.ring:
        raise PolyError("mixed rings")
    if f.is_constant():
        return I
    if I.is_zero_ideal():
        return I
    big, tag = _with_tag(I.ring)
    gens = [_lift(g, big) for g in I.generators]
    gens.append(big.one() - big.var(tag) * _lift(f, big))
    G = buchberger(gens, block_order(big, [tag]))
    if G.is_unit():
        return Ideal(I.ring, [I.ring.one()])
    return Ideal(I.ring, _drop_tag_basis(G, I.ring, tag))


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via the t*I + (1-t)*J elimination trick."""
    if I.ring != J.ring:
        raise PolyError("mixed rings")
    if I.is_zero_ideal() or J.is_zero_ideal():
        return Ideal(I.ring, [])
    big, tag = _with_tag(I.ring)
    t = big.var(tag)
    gens = [t * _lift(g, big) for g in I.generators]
    gens += [(big.one() - t) * _lift(g, big) for g in J.generators]
    G = buchberger(gens, block_order(big, [tag]))
    return Ideal(I.ring, _drop_tag_basis(G, I.ring, tag))


def saturate_ideal(I: Ideal, J: Ideal) -> Ideal:
    """I : J^infinity, as the intersection of single-element saturations.

    A unit partial saturation contributes nothing to the intersection and
    is skipped; the result is the unit ideal only when every single-element
    saturation is.
    """
    if J.is_zero_ideal():
        raise DomainError("saturation by the zero ideal")
    if J.is_unit():
        return I
    out: Ideal | None = None
    for g in J.generators:
        s = saturate(I, g)
        if s.is_unit():
            continue
        out = s if out is None else intersect(out, s)
    if out is None:
        return Ideal(I.ring, [I.ring.one()])
    return out


def eliminate(I: Ideal, drop: Iterable[int]) -> Ideal:
    """I cap Q[remaining variables], returned in the restricted ring."""
    drop = sorted(set(drop))
    keep = [i for i in range(I.ring.arity) if i not in drop]
    small = I.ring.restricted(keep)
    if not drop:
        return Ideal(small, [g.restrict_ring(small, keep) for g in I.generators])
    if I.is_zero_ideal():
        return Ideal(small, [])
    G = I.groebner(block_order(I.ring, drop))
    out = []
    for g in G.basis:
        if all(g.degree_in(i) == 0 for i in drop):
            out.append(g.restrict_ring(small, keep))
    return Ideal(small, out)


# ---------------------------------------------------------------------------
# Dimension and maximally independent subsets


def _lm_supports(I: Ideal) -> list[frozenset]:
    G = I.groebner()
    supports = []
    for m in G.leading_monomials():
        supports.append(frozenset(i for i, e in enumerate(m) if e))
    return supports


def _max_indep_size(supports: list[frozenset], universe: frozenset,
                    cache: dict) -> int:
    """Max size of u in universe with no support entirely inside u.

    Equivalent to |universe| minus a minimum hitting set of the supports;
    solved by branch and bound on an uncovered support.
    """
    active = frozenset(s for s in supports if s <= universe)
    key = (active, universe)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not active:
        cache[key] = len(universe)
        return len(universe)
    pivot = min(active, key=lambda s: (len(s), sorted(s)))
    best = -1
    for v in sorted(pivot):
        sub = _max_indep_size(supports, universe - {v}, cache)
        if sub > best:
            best = sub
    cache[key] = best
    return best


def dimension(I: Ideal) -> int:
    """Krull dimension of ring/I; -1 for the unit ideal, arity for (0)."""
    if I.is_zero_ideal():
        return I.ring.arity
    if I.is_unit():
        return -1
    supports = _lm_supports(I)
    if any(not s for s in supports):
        return -1
    universe = frozenset(range(I.ring.arity))
    return _max_indep_size(supports, universe, {})


def max_independent_subset(I: Ideal) -> VariableSubset:
    """Lexicographically-least maximal independent variable subset of I.

    A subset u qualifies when no grevlex leading monomial of I lies in the
    monomials of u, and |u| equals dim(ring/I); the tie-break picks the
    subset whose sorted index tuple is lexicographically smallest.
    """
    if I.is_unit():
        raise DomainError("unit ideal has no independent subset")
    ring = I.ring
    if I.is_zero_ideal():
        return VariableSubset(ring, frozenset(range(ring.arity)))
    supports = _lm_supports(I)
    universe = frozenset(range(ring.arity))
    cache: dict = {}
    target = _max_indep_size(supports, universe, cache)
    chosen: list[int] = []
    available = set(range(ring.arity))

    def feasible(cur: frozenset, pool: frozenset) -> bool:
        # Can cur extend inside pool to an independent set of size target?
        if any(s <= cur for s in supports):
            return False
        reduced = []
        for s in supports:
            rem = s - cur
            if rem <= pool:
                reduced.append(frozenset(rem))
        extra = _max_indep_size(reduced, pool, cache)
        return len(cur) + extra >= target

    pool = frozenset(available)
    while len(chosen) < target:
        for v in sorted(pool):
            cur = frozenset(chosen) | {v}
            rest = frozenset(w for w in pool if w > v)
            if feasible(cur, rest):
                chosen.append(v)
                pool = rest
                break
        else:
            raise PolyError("independent subset search failed")
    return VariableSubset(ring, frozenset(chosen))


# ---------------------------------------------------------------------------
# Radical membership, containment


def radical_member(f: Polynomial, I: Ideal) -> bool:
    """True iff f vanishes on V(I): decided by 1 in I + <1 - t*f>."""
    if f.ring != I.ring:
        raise PolyError("mixed rings")
    if f.is_zero():
        return True
    if f.is_constant():
        return I.is_unit()
    big, tag = _with_tag(I.ring)
    gens = [_lift(g, big) for g in I.generators]
    gens.append(big.one() - big.var(tag) * _lift(f, big))
    G = buchberger(gens, grevlex(big))
    return G.is_unit()


def variety_contained(I: Ideal, J: Ideal) -> bool:
    """True iff V(I) is a subset of V(J)."""
    return all(radical_member(g, I) for g in J.generators)


def variety_equal(I: Ideal, J: Ideal) -> bool:
    return variety_contained(I, J) and variety_contained(J, I)


def minimal_generating_subset(I: Ideal) -> Ideal:
    """Ideal presented by an irredundant subset of its generators.

    Greedy by ascending complexity: a generator already in the ideal of
    the kept ones is dropped.  Worth the basis computations only for
    ideals that feed many downstream constructions.
    """
    if len(I.generators) <= 1:
        return I
    order = grevlex(I.ring)
    gens = sorted(I.generators,
                  key=lambda g: (g.total_degree(), len(g.terms), g.terms))
    kept: list[Polynomial] = []
    gb = None
    for g in gens:
        if gb is not None and is_member(g, gb):
            continue
        kept.append(g)
        gb = buchberger(kept, order)
        if gb.is_unit():
            return Ideal(I.ring, [I.ring.one()])
    return Ideal(I.ring, kept)


def zero_dim_radical(I: Ideal) -> Ideal:
    """Radical of a zero-dimensional ideal via per-variable eliminants.

    Adds the squarefree part of each variable's univariate eliminant and
    takes the reduced basis; exact for dimension zero (Seidenberg).
    """
    ring = I.ring
    extra = []
    for v in range(ring.arity):
        keep_drop = [i for i in range(ring.arity) if i != v]
        E = eliminate(I, keep_drop)
        if E.is_zero_ideal():
            raise DomainError("ideal is not zero-dimensional")
        g = E.generators[0]
        back = g.map_ring(ring, [v])
        extra.append(squarefree_part(back))
    out = Ideal(ring, list(I.generators) + extra)
    return Ideal(ring, out.groebner(grevlex(ring)).basis)


def squarefree_generators(I: Ideal) -> Ideal:
    """Generator-wise squarefree cleanup (same variety, often closer to
    the radical; exact for principal ideals)."""
    return Ideal(I.ring, [squarefree_part(g) for g in I.generators])


def cleanup_piece_ideal(I: Ideal, dim: int) -> Ideal:
    """Best-effort reduced model of a piece's ideal: the exact radical in
    dimension zero, squarefree generators otherwise."""
    if I.is_unit() or I.is_zero_ideal():
        return I
    if dim == 0:
        try:
            return zero_dim_radical(I)
        except DomainError:
            pass
    return squarefree_generators(I)


# ---------------------------------------------------------------------------
# Equidimensional decomposition


def fraction_field_unit_multiple(I: Ideal, u: VariableSubset) -> Polynomial:
    """h in Q[u] with I Q(u)[rest] cap Q[x] = I : h^infinity.

    h is the lcm of the leading coefficients of the minimal Groebner basis
    of I over the fraction field Q(u).
    """
    ring = I.ring
    front = [i for i in range(ring.arity) if i not in u.members]
    order = block_order(ring, front)
    G = I.groebner(order)
    H = minimalize_over_fraction_field(G, u.members)
    lcs = [leading_coefficient_over(g, u.members, order) for g in H]
    return lcm_set(lcs, ring).normalized()


def equidim_decompose(I: Ideal) -> list[EquidimPiece]:
    """Equidimensional pieces of V(I), one per occurring dimension.

    Recursively splits off the part dominating a maximal independent
    subset (saturating by the fraction-field unit multiple h) and recurses
    on I + <h>.  Pieces of equal dimension are merged by intersection;
    pieces contained in an earlier piece are dropped.
    """
    if I.is_unit():
        return []
    collected: list[tuple[int, Ideal]] = []
    work = [I]
    guard = 0
    while work:
        guard += 1
        if guard > 200:
            raise PolyError("equidimensional decomposition did not terminate")
        J = work.pop()
        if J.is_unit():
            continue
        if J.is_zero_ideal():
            collected.append((J.ring.arity, J))
            continue
        u = max_independent_subset(J)
        d = len(u)
        h = fraction_field_unit_multiple(J, u)
        if h.is_constant():
            collected.append((d, J))
            continue
        top = saturate(J, h)
        if not top.is_unit():
            collected.append((d, top))
        work.append(Ideal(J.ring, list(J.generators) + [h]))

    # Merge equal dimensions, then prune components lying inside
    # higher-dimensional pieces (saturation leaves the rest untouched).
    by_dim: dict[int, Ideal] = {}
    for d, piece in sorted(collected, key=lambda t: -t[0]):
        if d in by_dim:
            if not variety_contained(piece, by_dim[d]):
                by_dim[d] = intersect(by_dim[d], piece)
        else:
            by_dim[d] = piece
    out: list[EquidimPiece] = []
    for d in sorted(by_dim, reverse=True):
        piece = by_dim[d]
        for kept in out:
            if variety_contained(piece, kept.ideal):
                piece = Ideal(piece.ring, [piece.ring.one()])
                break
            piece = saturate_ideal(piece, kept.ideal)
            if piece.is_unit():
                break
        if not piece.is_unit():
            out.append(EquidimPiece(piece, d))
    return out
