"""Hilbert-Samuel multiplicities at the origin via tangent cones, and
multiplicity sequences of polar varieties at random points of a subvariety.

The multiplicity of V(I) at 0 is the Hilbert-series degree of the tangent
cone, computed by homogenizing a graded basis of I, re-basing with the
homogenizing variable compared first, and extracting lowest-degree forms.

``mult_sequence(X, Y, seed)`` pins down generic points of Y with a random
affine section (deg(Y) conjugate points at once, so no rational point is
ever needed) and evaluates the multiplicity of each polar variety of X at
those points as a Samuel multiplicity along the section's radical ideal,
divided by the point count.  The polar varieties themselves are sliced
once per seed on X's cached conormal space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import hashlib

from .geometry import (
    GenericityError,
    MAX_REDRAWS,
    RANDOM_COEFF_BOUND,
    conormal_cached,
    polar_slice,
)
from .groebner import MonomialIdeal, buchberger, hilbert
from .idealops import (
    DomainError,
    EquidimPiece,
    Ideal,
    dimension,
    eliminate,
    radical_member,
    variety_contained,
    zero_dim_radical,
)
from .polyring import (
    PolyError,
    PolyRing,
    Polynomial,
    block_order,
    grevlex,
    squarefree_part,
)


class MissesOriginError(DomainError):
    """The variety does not pass through the origin."""


@dataclass(frozen=True)
class MultiplicitySequence:
    """Multiplicities of the polar varieties at a point, index 0 = the
    variety itself; entry i is 0 exactly when the point misses the i-th
    polar variety."""

    values: tuple

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def tangent_cone(I: Ideal) -> Ideal:
    """Ideal of lowest-degree forms of I at the origin.

    Computed from a graded (grevlex) basis of I: homogenize with a fresh
    variable t, take a basis for the block order comparing t first, set
    t = 1 and keep each element's lowest-degree homogeneous part.
    """
    ring = I.ring
    for g in I.generators:
        if g.constant_term():
            raise MissesOriginError("origin is not on the variety")
    if I.is_zero_ideal():
        return I
    G = I.groebner(grevlex(ring))
    t_name = ring.fresh_names(1, "hom_")[0]
    big = ring.extended([t_name])
    t_idx = ring.arity
    lift = list(range(ring.arity))
    homogenized = []
    for g in G.basis:
        d = g.total_degree()
        acc: dict = {}
        for m, c in g.terms:
            mm = list(m) + [d - sum(m)]
            acc[tuple(mm)] = c
        homogenized.append(Polynomial(big, acc))
    Gh = buchberger(homogenized, block_order(big, [t_idx]))
    lowest = []
    for g in Gh.basis:
        acc: dict = {}
        for m, c in g.terms:
            acc[m[:-1]] = acc.get(m[:-1], 0) + c
        deh = Polynomial(ring, acc)
        if deh.is_zero():
            continue
        low = deh.min_degree()
        forms = {m: c for m, c in deh.terms if sum(m) == low}
        lowest.append(Polynomial(ring, forms))
    return Ideal(ring, lowest)


def mult_at_origin(I: Ideal) -> int:
    """Hilbert-Samuel multiplicity of V(I) at the origin (0 if not on it)."""
    if I.is_unit():
        return 0
    for g in I.generators:
        if g.constant_term():
            return 0
    tc = tangent_cone(I)
    if tc.is_zero_ideal():
        return 1
    G = tc.groebner(grevlex(tc.ring))
    lm = MonomialIdeal(G.leading_monomials())
    return hilbert(lm, tc.ring.arity).degree


def _random_affine(ring, rng):
    f = ring.const(rng.randint(-RANDOM_COEFF_BOUND, RANDOM_COEFF_BOUND))
    for i in range(ring.arity):
        f = f + rng.randint(-RANDOM_COEFF_BOUND, RANDOM_COEFF_BOUND) * ring.var(i)
    return f


def _univar_eliminant(I: Ideal, v: int) -> Polynomial | None:
    """Generator of I cap Q[x_v], or None when the intersection is zero."""
    other = [i for i in range(I.ring.arity) if i != v]
    E = eliminate(I, other)
    if E.is_zero_ideal():
        return None
    return E.generators[0]


def _point_count(section: Ideal) -> int | None:
    """Number of distinct points of a zero-dimensional variety.

    Works on the radical: each variable's eliminant is replaced by its
    squarefree part before counting standard monomials.  Returns None when
    the section is not zero-dimensional.
    """
    if section.is_unit():
        return 0
    if dimension(section) != 0:
        return None
    ring = section.ring
    extra = []
    for v in range(ring.arity):
        g = _univar_eliminant(section, v)
        if g is None:
            return None
        back = g.map_ring(ring, _embedding_of(g.ring, ring))
        extra.append(squarefree_part(back))
    reduced = Ideal(ring, list(section.generators) + extra)
    G = reduced.groebner(grevlex(ring))
    lm = MonomialIdeal(G.leading_monomials())
    data = hilbert(lm, ring.arity)
    if data.dimension != 0:
        return None
    return data.degree


def _embedding_of(small: PolyRing, big: PolyRing) -> list[int]:
    return [big.index(name) for name in small.names]


_polar_cache: dict = {}


def _stable_seed(key) -> int:
    """Process-independent seed derived from a repr (hash() is randomized)."""
    digest = hashlib.blake2b(repr(key).encode(), digest_size=4).digest()
    return int.from_bytes(digest, "big")


def _polar_variety(X: EquidimPiece, i: int, rng_seed: int) -> Ideal:
    """Cached i-th polar variety of X, in X's own coordinates.

    The slices live on X's conormal space and do not depend on the probe
    point, so they are shared by every multiplicity query against X for a
    fixed seed.
    """
    key = (X.key(), i, rng_seed)
    sl = _polar_cache.get(key)
    if sl is None:
        con = conormal_cached(X)
        sl = polar_slice(con, i, _stable_seed(key))
        _polar_cache[key] = sl
    return sl


def _vecdim(I: Ideal) -> int | None:
    """dim_Q of ring/I for zero-dimensional I (None when positive-dim)."""
    G = I.groebner(grevlex(I.ring))
    if G.is_unit():
        return 0
    lm = MonomialIdeal(G.leading_monomials())
    data = hilbert(lm, I.ring.arity)
    if data.dimension > 0:
        return None
    return data.degree


def _power_gens(gens: list, s: int) -> list:
    from itertools import combinations_with_replacement
    out = []
    for combo in combinations_with_replacement(gens, s):
        p = combo[0]
        for q in combo[1:]:
            p = p * q
        out.append(p)
    return out


def samuel_along(IV: Ideal, J: Ideal, d: int) -> int:
    """Sum of the local multiplicities of V(IV) at the points of V(J).

    J must be a radical zero-dimensional ideal; then locally at each point
    it is the maximal ideal, and the Samuel multiplicity e(J; O_V) is the
    sum of the Hilbert-Samuel multiplicities of V at the points it shares
    with V(J).  Read off the length function s -> dim(ring/(IV + J^s)):
    its d-th finite difference stabilizes to the multiplicity.
    """
    ring = IV.ring
    probe = Ideal(ring, list(IV.generators) + list(J.generators))
    first = _vecdim(probe)
    if first is None:
        raise DomainError("section ideal is not zero-dimensional on V")
    if first == 0:
        return 0
    if d == 0:
        return first
    values: dict = {1: first}

    def H(s: int) -> int:
        v = values.get(s)
        if v is None:
            gens = list(IV.generators) + _power_gens(list(J.generators), s)
            v = _vecdim(Ideal(ring, gens))
            if v is None:
                raise DomainError("section ideal is not zero-dimensional on V")
            values[s] = v
        return v

    prev = None
    for base in range(1, 16):
        vals = [H(base + i) for i in range(d + 1)]
        for _ in range(d):
            vals = [b - a for a, b in zip(vals, vals[1:])]
        cur = vals[0]
        if prev is not None and cur == prev:
            return cur
        prev = cur
    raise GenericityError("Hilbert-Samuel function did not stabilize")


def mult_sequence(X: EquidimPiece, Y: Ideal, rng_seed: int) -> MultiplicitySequence:
    """Polar multiplicities of X at a random point of Y.

    Requires V(Y) inside V(X); Y's generators should cut Y out as a
    reduced variety.  A random affine section pins down deg(Y) generic
    points of Y at once; entry i is the multiplicity of X's i-th polar
    variety at those points (all conjugate, hence equal), computed as a
    Samuel multiplicity along the section and divided by the point count.
    Draws are seeded; detected degeneracies redraw a bounded number of
    times before raising GenericityError.
    """
    ring = X.ideal.ring
    if Y.ring != ring:
        raise PolyError("mixed rings")
    if not variety_contained(Y, X.ideal):
        raise DomainError("the sample variety must lie inside X")
    n = ring.arity
    dim_y = dimension(Y)
    rng = random.Random(rng_seed)
    last_error = "no draws attempted"
    for _ in range(MAX_REDRAWS):
        ells = [_random_affine(ring, rng) for _ in range(dim_y)]
        section = Ideal(ring, list(Y.generators) + ells)
        k = _point_count(section)
        if not k:
            last_error = "affine section of the sample variety is degenerate"
            continue
        try:
            J = zero_dim_radical(section)
        except DomainError:
            last_error = "section did not reduce to points"
            continue
        try:
            raw = []
            for i in range(X.dimension):
                sl = _polar_variety(X, i, rng_seed)
                raw.append(samuel_along(sl, J, X.dimension - i))
        except (GenericityError, DomainError) as exc:
            last_error = str(exc)
            continue
        if any(v % k for v in raw):
            last_error = f"multiplicities {raw} not divisible by section count {k}"
            continue
        return MultiplicitySequence(tuple(v // k for v in raw))
    raise GenericityError(f"mult_sequence failed after {MAX_REDRAWS} draws: "
                          f"{last_error}")
