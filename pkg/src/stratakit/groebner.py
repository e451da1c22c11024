"""Buchberger engine with block orders, reduced bases and Hilbert series.

The engine works fraction-free: polynomials are cleared to primitive
integer-coefficient term lists (descending packed-key order) and reduction
steps are integer cross-multiplications with periodic content stripping.
Pair management uses Gebauer-Moeller elimination with the normal selection
strategy (smallest lcm in the active order first).  All choices are
deterministic, so equal inputs give identical bases.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Sequence

from . import _kernel as kernel
from .polyring import (
    Block,
    GrevLex,
    Monomial,
    MonomialOrder,
    PolyError,
    PolyRing,
    Polynomial,
    monomial_divides,
    monomial_lcm,
)

# Terms: list[(key:int, exps:tuple, coeff:int)], key strictly descending.
Terms = list


class UnitIdealSignal(Exception):
    """Internal: a constant appeared during basis construction."""


def _exps_mask(exps: Monomial) -> int:
    m = 0
    for i, e in enumerate(exps):
        if e:
            m |= 1 << i
    return m


def _to_terms(f: Polynomial, order: MonomialOrder) -> Terms:
    """Primitive integer term list of f under `order` (content dropped)."""
    den = 1
    for _, c in f.terms:
        den = den * c.denominator // int_gcd(den, c.denominator)
    items = [(order.key(m), m, int(c * den)) for m, c in f.terms]
    items.sort(key=lambda t: t[0], reverse=True)
    g = 0
    for _, _, c in items:
        g = int_gcd(g, c)
        if g == 1:
            break
    if g > 1:
        items = [(k, m, c // g) for k, m, c in items]
    if items and items[0][2] < 0:
        items = [(k, m, -c) for k, m, c in items]
    return items


def _to_poly(ring: PolyRing, terms: Terms) -> Polynomial:
    return Polynomial(ring, {e: Fraction(c) for _, e, c in terms}).normalized()


class _Reducers:
    """Reducer set with leading-term tables for divisor search."""

    __slots__ = ("terms", "lm_keys", "lm_exps", "lm_coeffs", "lm_masks", "alive")

    def __init__(self):
        self.terms: list[Terms] = []
        self.lm_keys: list[int] = []
        self.lm_exps: list[Monomial] = []
        self.lm_coeffs: list[int] = []
        self.lm_masks: list[int] = []
        self.alive: list[bool] = []

    def add(self, t: Terms):
        k, e, c = t[0]
        self.terms.append(t)
        self.lm_keys.append(k)
        self.lm_exps.append(e)
        self.lm_coeffs.append(c)
        self.lm_masks.append(_exps_mask(e))
        self.alive.append(True)

    def replace(self, idx: int, t: Terms):
        """Swap in a tail-reduced version; the leading monomial must match."""
        self.terms[idx] = t
        self.lm_coeffs[idx] = t[0][2]

    def __len__(self):
        return len(self.terms)


def _reduce_primitive(p: Terms, red: _Reducers, skip: int = -1,
                      top_only: bool = False) -> Terms:
    """Normal form of p modulo the alive reducers, primitive output.

    The scalar trail is dropped (callers use the result up to a nonzero
    rational factor only).  `skip` temporarily excludes one reducer;
    `top_only` stops once the leading term is irreducible.
    """
    saved = None
    if 0 <= skip < len(red.terms):
        saved = red.alive[skip]
        red.alive[skip] = False
    try:
        return kernel.reduce_full(p, red.lm_keys, red.lm_exps, red.lm_coeffs,
                                  red.lm_masks, red.alive, red.terms, top_only)
    finally:
        if saved is not None:
            red.alive[skip] = saved


def _reduce_exact(f: Polynomial, red: _Reducers, order: MonomialOrder) -> Polynomial:
    """Exact normal form over Q: returns r with f - r in the reducer ideal."""
    den = 1
    for _, c in f.terms:
        den = den * c.denominator // int_gcd(den, c.denominator)
    p = [(order.key(m), m, int(c * den)) for m, c in f.terms]
    p.sort(key=lambda t: t[0], reverse=True)
    mult = den
    out: Terms = []
    pos = 0
    while pos < len(p):
        lk, le, lc = p[pos]
        idx = kernel.find_divisor(le, _exps_mask(le), red.lm_masks,
                                  red.lm_exps, red.alive)
        if idx < 0:
            out.append(p[pos])
            pos += 1
            continue
        gk = red.lm_keys[idx]
        gc = red.lm_coeffs[idx]
        g = int_gcd(lc, gc)
        a = gc // g
        b = -(lc // g)
        if a < 0:
            a, b = -a, -b
        mk = lk - gk
        me = tuple(x - y for x, y in zip(le, red.lm_exps[idx]))
        p = kernel.combine(a, 0, None, p, pos + 1, b, mk, me, red.terms[idx], 1)
        pos = 0
        if a != 1:
            mult *= a
            if out:
                out = kernel.scale_terms(a, out)
        g0 = int_gcd(int_gcd(kernel.content(p, pos), kernel.content(out)), mult)
        if g0 > 1:
            p = [(k, e, c // g0) for k, e, c in p]
            out = [(k, e, c // g0) for k, e, c in out]
            mult //= g0
    return Polynomial(f.ring, {e: Fraction(c, mult) for _, e, c in out})


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis together with its order."""

    ring: PolyRing
    order: MonomialOrder
    basis: tuple
    is_reduced: bool = True

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() \
            and bool(self.basis[0])

    def is_zero(self) -> bool:
        return not self.basis

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.basis]

    def reducers(self) -> _Reducers:
        red = _Reducers()
        for g in self.basis:
            red.add(_to_terms(g, self.order))
        return red

    def key(self) -> tuple:
        """Canonical hashable identity (reduced bases are unique per order)."""
        return (self.ring.names, self.order.signature(),
                tuple(g.terms for g in self.basis))


def _spoly(red: _Reducers, i: int, j: int, lcm_exps: Monomial,
           order: MonomialOrder) -> Terms:
    ci, cj = red.lm_coeffs[i], red.lm_coeffs[j]
    g = int_gcd(ci, cj)
    a = cj // g
    b = -(ci // g)
    me_i = tuple(x - y for x, y in zip(lcm_exps, red.lm_exps[i]))
    me_j = tuple(x - y for x, y in zip(lcm_exps, red.lm_exps[j]))
    return kernel.combine(a, order.key(me_i), me_i, red.terms[i], 1,
                          b, order.key(me_j), me_j, red.terms[j], 1)


class _PairQueue:
    """Gebauer-Moeller managed critical pairs, smallest lcm first.

    Pair entries are (lcm_key, lcm_mask, i, j, lcm_exps).
    """

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.weights = tuple(order.weights)
        self.heap: list[tuple] = []

    def push_for(self, red: _Reducers, new_idx: int):
        te = red.lm_exps[new_idx]
        te_mask = red.lm_masks[new_idx]
        kept_old = kernel.chain_filter(self.heap, te, te_mask, red.lm_exps)
        cand = kernel.pair_candidates(te, red.lm_exps, self.weights, new_idx)
        cand.sort()
        # Divisor criterion: drop candidates whose lcm another lcm divides.
        kept_new: list[tuple] = []
        for (lk, lmask, le, i) in cand:
            dominated = False
            for (lk2, lmask2, le2, _) in kept_new:
                if lmask2 & ~lmask:
                    continue
                if le2 != le and monomial_divides(le2, le):
                    dominated = True
                    break
            if not dominated:
                kept_new.append((lk, lmask, le, i))
        by_lcm: dict[Monomial, list[tuple]] = {}
        for entry in kept_new:
            by_lcm.setdefault(entry[2], []).append(entry)
        for le, group in by_lcm.items():
            coprime = any(
                all(x == 0 or y == 0 for x, y in zip(red.lm_exps[i], te))
                for _, _, _, i in group
            )
            if coprime:
                continue
            lk, lmask, le0, i = group[0]
            kept_old.append((lk, lmask, i, new_idx, le0))
        heapq.heapify(kept_old)
        self.heap = kept_old

    def pop(self):
        return heapq.heappop(self.heap)

    def __bool__(self):
        return bool(self.heap)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder,
               ring: PolyRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of <gens> under `order`.

    The zero ideal yields an empty basis, the unit ideal the basis (1,).
    """
    if ring is None:
        if not gens:
            raise PolyError("cannot infer the ring from an empty generator list")
        ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise PolyError("mixed rings")
    if order.arity != ring.arity:
        raise PolyError("order arity does not match ring")

    seen: dict[tuple, Terms] = {}
    for g in gens:
        if g.is_zero():
            continue
        t = _to_terms(g, order)
        seen[tuple((k, e, c) for k, e, c in t)] = t
    seed = sorted(seen.values(),
                  key=lambda t: (t[0][0], len(t), [x[0] for x in t]))
    if not seed:
        return GroebnerBasis(ring, order, ())

    red = _Reducers()
    queue = _PairQueue(order)
    const_key = order.key((0,) * ring.arity)

    def insert(t: Terms):
        if t[0][0] == const_key:
            raise UnitIdealSignal
        red.add(t)
        queue.push_for(red, len(red) - 1)

    try:
        for t in seed:
            t = _reduce_primitive(t, red)
            if t:
                insert(t)
        while queue:
            _, _, i, j, le = queue.pop()
            s = _spoly(red, i, j, le, order)
            s = _reduce_primitive(s, red)
            if s:
                insert(s)
    except UnitIdealSignal:
        return GroebnerBasis(ring, order, (ring.one(),))

    # Minimalize: drop elements whose lm another lm divides.
    order_idx = sorted(range(len(red)), key=lambda i: red.lm_keys[i])
    minimal: list[int] = []
    for i in order_idx:
        if not any(monomial_divides(red.lm_exps[j], red.lm_exps[i])
                   for j in minimal):
            minimal.append(i)
    final = _Reducers()
    for i in minimal:
        final.add(red.terms[i])
    # Interreduce tails; leading monomials are pairwise non-dividing, so the
    # lm of each element is stable under reduction by the others.
    for pos in range(len(final)):
        t = _reduce_primitive(final.terms[pos], final, skip=pos)
        final.replace(pos, t)
    basis = tuple(_to_poly(ring, t) for t in final.terms)
    return GroebnerBasis(ring, order, basis)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of f on division by G; f - normal_form(f, G) lies in <G>."""
    if f.ring != G.ring:
        raise PolyError("mixed rings")
    if G.is_zero():
        return f
    if G.is_unit():
        return f.ring.zero()
    return _reduce_exact(f, G.reducers(), G.order)


def is_member(f: Polynomial, G: GroebnerBasis) -> bool:
    return normal_form(f, G).is_zero()


def minimalize_over_fraction_field(G: GroebnerBasis,
                                   fraction_vars: Iterable[int]) -> list[Polynomial]:
    """Minimal Groebner basis of <G> viewed over the fraction field in u.

    G must come from a block order whose front block is the complement of
    ``fraction_vars`` (the u variables moving into the coefficient field).
    Elements whose front-block leading monomial is divisible by another's
    are dropped; among equal front leading monomials the first survives.
    """
    u = frozenset(fraction_vars)
    order = G.order
    if isinstance(order, Block):
        if set(order.front) != set(range(G.ring.arity)) - u:
            raise PolyError("front block does not match fraction-field variables")
    elif u and len(u) != G.ring.arity:
        raise PolyError("basis order is not a block order eliminating the complement")
    data = []
    for g in G.basis:
        lm = g.leading_monomial(order)
        front_lm = tuple(0 if i in u else e for i, e in enumerate(lm))
        data.append((front_lm, g))
    kept: list[tuple[Monomial, Polynomial]] = []
    for front_lm, g in data:
        if any(flm2 != front_lm and monomial_divides(flm2, front_lm)
               for flm2, _ in data):
            continue
        if any(flm2 == front_lm for flm2, _ in kept):
            continue
        kept.append((front_lm, g))
    return [g for _, g in kept]


def leading_coefficient_over(g: Polynomial, fraction_vars: Iterable[int],
                             order: MonomialOrder) -> Polynomial:
    """Leading coefficient of g over Q(u): a polynomial supported on u."""
    u = frozenset(fraction_vars)
    lm = g.leading_monomial(order)
    front_lm = tuple(0 if i in u else e for i, e in enumerate(lm))
    acc: dict = {}
    for m, c in g.terms:
        if tuple(0 if i in u else e for i, e in enumerate(m)) == front_lm:
            um = tuple(e if i in u else 0 for i, e in enumerate(m))
            acc[um] = acc.get(um, 0) + c
    return Polynomial(g.ring, acc)


# ---------------------------------------------------------------------------
# Monomial ideals and Hilbert series


class MonomialIdeal:
    """Monomial ideal given by its minimal (antichain) generators."""

    __slots__ = ("gens",)

    def __init__(self, gens: Iterable[Monomial]):
        gens = sorted(set(tuple(g) for g in gens))
        minimal = []
        for g in gens:
            if not any(h != g and monomial_divides(h, g) for h in gens):
                minimal.append(g)
        self.gens = tuple(minimal)

    def __repr__(self):
        return f"MonomialIdeal({list(self.gens)})"

    def is_unit(self) -> bool:
        return any(sum(g) == 0 for g in self.gens)


@dataclass(frozen=True)
class HilbertData:
    """Hilbert series numerator over (1-t)^arity, plus dimension and degree."""

    numerator: tuple
    dimension: int
    degree: int


def _poly1_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _hilbert_numerator(gens: tuple, cache: dict) -> list[int]:
    """Hilbert series numerator of R/<gens> over (1-t)^n.

    Recursion on a pivot variable p via the exact sequence
    0 -> R/(I:p) (shifted by deg p) -> R/I -> R/(I+p) -> 0, i.e.
    N(I) = N(I+p) + t^deg(p) * N(I:p).
    """
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return []
    hit = cache.get(gens)
    if hit is not None:
        return hit
    simple = [g for g in gens if sum(1 for e in g if e) == 1]
    if len(simple) == len(gens):
        out = [1]
        for g in gens:
            d = sum(g)
            out = _poly1_mul(out, [1] + [0] * (d - 1) + [-1])
        cache[gens] = out
        return out
    counts: dict[int, int] = {}
    for g in gens:
        for v, e in enumerate(g):
            if e:
                counts[v] = counts.get(v, 0) + 1
    target = max(g for g in gens if sum(1 for e in g if e) > 1)
    n = len(target)
    pivot_var = max((v for v in range(n) if target[v]),
                    key=lambda v: (counts[v], -v))
    pivot = tuple(1 if v == pivot_var else 0 for v in range(n))
    plus = MonomialIdeal(list(gens) + [pivot]).gens
    colon = MonomialIdeal(
        tuple(tuple(max(e - p, 0) for e, p in zip(g, pivot)) for g in gens)
    ).gens
    n_plus = _hilbert_numerator(plus, cache)
    n_colon = _hilbert_numerator(colon, cache)
    shifted = [0] * sum(pivot) + list(n_colon)
    out = list(n_plus) + [0] * max(0, len(shifted) - len(n_plus))
    for i, y in enumerate(shifted):
        out[i] += y
    while out and out[-1] == 0:
        out.pop()
    cache[gens] = out
    return out


def hilbert(M: MonomialIdeal, arity: int) -> HilbertData:
    """Dimension and degree of R/M from the Hilbert series numerator."""
    num = _hilbert_numerator(M.gens, {})
    if not num:
        return HilbertData((0,), -1, 0)
    q = list(num)
    strips = 0
    while sum(q) == 0:
        acc = 0
        out = []
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out if out else [0]
        while len(q) > 1 and q[-1] == 0:
            q.pop()
        strips += 1
    degree = sum(q)
    if degree <= 0:
        raise PolyError("nonpositive Hilbert degree")
    return HilbertData(tuple(num), arity - strips, degree)
