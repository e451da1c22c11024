"""Jacobian machinery: singular loci, conormal spaces, images of varieties
under point-normalizing maps, and generic linear slices for polar varieties.

The conormal space of an equidimensional X = V(F) of codimension c lives in
the x-variables together with projective dual coordinates y0..y_{n-1}; it is
cut out by F, the (c+1)x(c+1) minors of the Jacobian of F augmented with the
row (y0..y_{n-1}), saturated by the ideal of cxc minors of the plain
Jacobian.  Polar varieties arise by adding generic linear forms in the dual
coordinates, re-saturating, and eliminating the dual block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .idealops import (
    DomainError,
    EquidimPiece,
    Ideal,
    dimension,
    eliminate,
    intersect,
    minimal_generating_subset,
    saturate,
    saturate_ideal,
    variety_contained,
)
from .polyring import PolyError, PolyRing, Polynomial, squarefree_part


class GenericityError(Exception):
    """A random draw failed its genericity checks repeatedly."""


RANDOM_COEFF_BOUND = 1000
MAX_REDRAWS = 5


def jacobian(gens: Sequence[Polynomial], ring: PolyRing) -> list[list[Polynomial]]:
    return [[g.derivative(j) for j in range(ring.arity)] for g in gens]


@dataclass(frozen=True)
class JacobianData:
    """Generators, their Jacobian, and the dual-row augmented Jacobian."""

    gens: tuple
    jac: tuple
    augmented: tuple


def _minor_engine(matrix: list, ring: PolyRing):
    """Memoized cofactor recursion over global row/column index tuples."""
    cache: dict = {}

    def minor(rows: tuple, cols: tuple) -> Polynomial:
        if len(rows) == 1:
            return matrix[rows[0]][cols[0]]
        key = (rows, cols)
        hit = cache.get(key)
        if hit is not None:
            return hit
        best = min(range(len(rows)),
                   key=lambda ri: sum(1 for c in cols
                                      if not matrix[rows[ri]][c].is_zero()))
        r = rows[best]
        rest = rows[:best] + rows[best + 1:]
        acc = ring.zero()
        for pos, c in enumerate(cols):
            entry = matrix[r][c]
            if entry.is_zero():
                continue
            sub = minor(rest, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            if (best + pos) % 2:
                term = -term
            acc = acc + term
        cache[key] = acc
        return acc

    return minor


def _det(matrix: list[list[Polynomial]], ring: PolyRing) -> Polynomial:
    """Determinant of a square polynomial matrix."""
    n = len(matrix)
    if n == 0:
        return ring.one()
    return _minor_engine(matrix, ring)(tuple(range(n)), tuple(range(n)))


def minors(matrix: list[list[Polynomial]], size: int, ring: PolyRing) -> list[Polynomial]:
    """All size x size minors, deduplicated, zeros dropped, normalized."""
    if size == 0:
        return [ring.one()]
    if not matrix or size > len(matrix) or size > len(matrix[0]):
        return []
    rows = range(len(matrix))
    cols = range(len(matrix[0]))
    out = []
    seen = set()
    minor = _minor_engine(matrix, ring)
    for rr in combinations(rows, size):
        for cc in combinations(cols, size):
            m = minor(rr, cc)
            if m.is_zero():
                continue
            m = m.normalized()
            if m.terms not in seen:
                seen.add(m.terms)
                out.append(m)
    return out


def singular_locus(piece: EquidimPiece) -> Ideal:
    """Ideal whose variety contains Sing(V) for the equidimensional piece.

    Jacobian criterion on the given generators: the locus where all
    codimension-sized minors vanish.  Principal ideals are replaced by
    their squarefree part first so the criterion is exact there; for other
    non-radical inputs the result may be larger than the true singular
    locus, which only refines downstream stratifications.
    """
    I = piece.ideal
    ring = I.ring
    if I.is_unit():
        raise DomainError("singular locus of the empty variety")
    if piece.dimension == 0:
        return Ideal(ring, [ring.one()])
    gens = list(I.generators)
    if len(gens) == 1:
        gens = [squarefree_part(gens[0])]
    c = ring.arity - piece.dimension
    if c == 0:
        return Ideal(ring, [ring.one()])
    if len(gens) < c:
        return I  # cannot certify smoothness anywhere
    jac = jacobian(gens, ring)
    mins = minors(jac, c, ring)
    return Ideal(ring, gens + mins)


@dataclass(frozen=True)
class ConormalSpace:
    """Conormal space of a piece, in the extended ring x + dual y block.

    The stored ideal cuts out exactly the conormal variety (junk over the
    singular locus is already saturated away).
    """

    ideal: Ideal
    base_dim: int
    base: Ideal               # the piece's ideal in the original ring
    x_indices: tuple
    y_indices: tuple

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring


_conormal_cache: dict = {}


def conormal_cached(piece: EquidimPiece) -> "ConormalSpace":
    """Memoized conormal; safe because conormal() is deterministic."""
    key = piece.key()
    hit = _conormal_cache.get(key)
    if hit is None:
        hit = conormal(piece)
        _conormal_cache[key] = hit
    return hit


def conormal(piece: EquidimPiece) -> ConormalSpace:
    """Closure of (point, hyperplane containing the tangent space) pairs."""
    I = piece.ideal
    ring = I.ring
    n = ring.arity
    c = n - piece.dimension
    if c == 0:
        raise DomainError("conormal space of the ambient space")
    gens = list(I.generators)
    if len(gens) == 1:
        gens = [squarefree_part(gens[0])]
    if len(gens) < c:
        raise DomainError("too few generators for the stated codimension")
    y_names = ring.fresh_names(n, "y")
    big = ring.extended(y_names)
    lift = list(range(n))
    bgens = [g.map_ring(big, lift) for g in gens]
    jac = [[g.derivative(j) for j in range(n)] for g in bgens]
    dual_row = [big.var(n + j) for j in range(n)]
    aug = [dual_row] + jac
    m_small = minors(jac, c, big)
    m_big = minors(aug, c + 1, big)
    if not m_small:
        raise DomainError("Jacobian has no nonzero minors of the right size")
    raw = Ideal(big, bgens + m_big)
    sat = saturate_ideal(raw, Ideal(big, m_small))
    sat = minimal_generating_subset(sat)
    return ConormalSpace(
        ideal=sat,
        base_dim=piece.dimension,
        base=I,
        x_indices=tuple(range(n)),
        y_indices=tuple(range(n, 2 * n)),
    )


@dataclass(frozen=True)
class PointNormalizingMap:
    """Polynomial self-map of affine space sending a chosen point to 0.

    The first c components cut the subvariety, the remaining n-c are
    affine-linear.
    """

    components: tuple
    source: PolyRing
    target: PolyRing

    def __post_init__(self):
        if len(self.components) != self.target.arity:
            raise PolyError("map needs one component per target variable")

    def is_affine_linear(self) -> bool:
        return all(c.total_degree() <= 1 for c in self.components)

    def linear_parts(self):
        """(A, b) with component i equal to sum_j A[i][j]*x_j + b[i]."""
        from fractions import Fraction
        n = self.source.arity
        A = []
        b = []
        for comp in self.components:
            row = [Fraction(0)] * n
            const = Fraction(0)
            for m, c in comp.terms:
                deg = sum(m)
                if deg == 0:
                    const = c
                elif deg == 1:
                    row[m.index(1)] = c
                else:
                    raise PolyError("component is not affine-linear")
            A.append(row)
            b.append(const)
        return A, b


def invert_matrix_q(A):
    """Inverse of a square matrix of Fractions; None when singular."""
    from fractions import Fraction
    n = len(A)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def image_closure(I: Ideal, phi: PointNormalizingMap) -> Ideal:
    """Ideal of the Zariski closure of phi(V(I)), in the target ring.

    Graph construction followed by elimination of the source block.  Graph
    generators that are affine-linear in a source variable with constant
    coefficient are substituted away first (exact Gaussian steps), so maps
    with affine-linear components cost no basis computation at all.
    """
    src = phi.source
    if I.ring != src:
        raise PolyError("ideal not in the map's source ring")
    n_src = src.arity
    n_tgt = phi.target.arity
    names = list(src.names) + list(src.fresh_names(n_tgt, "img"))
    big = PolyRing(names)
    lift = list(range(n_src))
    gens = [g.map_ring(big, lift) for g in I.generators]
    for j, comp in enumerate(phi.components):
        gens.append(big.var(n_src + j) - comp.map_ring(big, lift))
    remaining = set(range(n_src))

    # Exact substitution passes: a generator c*x_v + r with constant c and
    # x_v absent from r defines x_v and drops out.
    changed = True
    while changed:
        changed = False
        for gi, g in enumerate(gens):
            if g.is_zero():
                continue
            for v in sorted(remaining):
                if g.degree_in(v) != 1:
                    continue
                dv = g.derivative(v)
                if not (dv.is_constant() and not dv.is_zero()):
                    continue
                c = dv.constant_term()
                shift = [0] * big.arity
                shift[v] = 1
                rest = g - big.var(v).scale(c)
                repl = rest.scale(-1 / c)
                gens = [
                    gg.substitute({v: repl}) if not gg.is_zero() else gg
                    for gg in gens
                ]
                gens[gi] = big.zero()
                remaining.discard(v)
                changed = True
                break
            if changed:
                break

    live = [g for g in gens if not g.is_zero()]
    if remaining:
        elim = eliminate(Ideal(big, live), list(range(n_src)))
        # the eliminated ring keeps exactly the image coordinates, in order
        out = [g.map_ring(phi.target, list(range(n_tgt)))
               for g in elim.generators]
        return Ideal(phi.target, out)
    # no source variables left: project directly
    keep = list(range(n_src, big.arity))
    small = big.restricted(keep)
    out = [g.restrict_ring(small, keep).map_ring(phi.target, list(range(n_tgt)))
           for g in live]
    return Ideal(phi.target, out)


@dataclass(frozen=True)
class GenericLinearSlice:
    """Independent linear forms in the dual block, with their seed."""

    forms: tuple
    seed: int


def _random_dual_forms(con: ConormalSpace, count: int,
                       rng: random.Random) -> list[Polynomial]:
    big = con.ring
    forms = []
    rows = []
    for _ in range(count):
        coeffs = [rng.randint(-RANDOM_COEFF_BOUND, RANDOM_COEFF_BOUND)
                  for _ in con.y_indices]
        rows.append(coeffs)
        f = big.zero()
        for c, j in zip(coeffs, con.y_indices):
            f = f + c * big.var(j)
        forms.append(f)
    if _int_rank(rows) != count:
        return []
    return forms


def _int_rank(rows: list[list[int]]) -> int:
    from fractions import Fraction
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = None
        for r in range(rank, len(m)):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col] / pv
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def polar_slice(con: ConormalSpace, i: int, rng_seed: int) -> Ideal:
    """Ideal in x of the i-th polar variety of the conormal's base.

    i = 0 returns the base ideal.  For i >= 1 the conormal is cut by
    n - d + i - 1 random dual-linear forms and projected to x.  The
    conormal ideal is stored fully saturated, and a generic slice meets no
    fibers over the singular locus, so no re-saturation by the Jacobian
    minors is needed; the dual block is projective, though, so the
    zero-section y = 0 (whose projection is all of the base) is removed by
    saturating with one generic dual form before eliminating.  Degenerate
    draws (slice dimension above d - i) are redrawn a bounded number of
    times.
    """
    d = con.base_dim
    n = len(con.x_indices)
    if not 0 <= i <= d - 1:
        raise DomainError(f"polar index {i} out of range 0..{d - 1}")
    if i == 0:
        return con.base
    count = n - d + i - 1
    rng = random.Random(rng_seed)
    for _ in range(MAX_REDRAWS):
        forms = _random_dual_forms(con, count, rng)
        if count and not forms:
            continue
        strip = _random_dual_forms(con, 1, rng)
        if not strip:
            continue
        big = con.ring
        cut = Ideal(big, list(con.ideal.generators) + forms)
        cut = saturate(cut, strip[0])
        result = _project_to_x(cut, con)
        if result.is_unit():
            return result
        dim = dimension(result)
        if dim <= d - i:
            return result
    raise GenericityError(
        f"polar slice stayed degenerate after {MAX_REDRAWS} draws")


def _project_to_x(I: Ideal, con: ConormalSpace) -> Ideal:
    base_ring = con.base.ring
    elim = eliminate(I, list(con.y_indices))
    out = [g.map_ring(base_ring, list(range(base_ring.arity)))
           for g in elim.generators]
    return Ideal(base_ring, out)
