"""Exact multivariate polynomial arithmetic over the rationals.

Polynomials are immutable sparse term maps with ``fractions.Fraction``
coefficients, stored in descending graded-reverse-lex order so that
iteration, printing and hashing are deterministic.  Monomials are plain
exponent tuples.  Monomial orders (grevlex, lex and block/elimination
compositions) compile to integer weight vectors so that comparing two
monomials is a single integer comparison; the Groebner engine reuses the
same packed keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # exponent vector, length == ring arity

# Base for packed order keys.  Exponents and total degrees must stay below
# this bound for key comparisons to agree with the order; 2**32 is far
# beyond anything a terminating computation here can produce.
_KEY_BASE = 1 << 32


class PolyError(Exception):
    """Structural or domain error in polynomial-level operations."""


@dataclass(frozen=True)
class Variable:
    index: int
    name: str

    def __repr__(self):
        return f"Variable({self.index}, {self.name!r})"


class PolyRing:
    """An ordered list of variable names; the ambient ring Q[x0..x_{n-1}]."""

    __slots__ = ("names", "arity", "_name_to_index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names: {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise PolyError(f"invalid variable name: {name!r}")
        self.names = names
        self.arity = len(names)
        self._name_to_index = {name: i for i, name in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def variables(self) -> list[Variable]:
        return [Variable(i, n) for i, n in enumerate(self.names)]

    def index(self, name: str) -> int:
        try:
            return self._name_to_index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r} in {self!r}") from None

    def var(self, which: int | str) -> "Polynomial":
        i = which if isinstance(which, int) else self.index(which)
        if not 0 <= i < self.arity:
            raise PolyError(f"variable index {i} out of range")
        exps = [0] * self.arity
        exps[i] = 1
        return Polynomial(self, {tuple(exps): Fraction(1)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.arity: c})

    def fresh_names(self, count: int, stem: str) -> list[str]:
        """`count` names built from `stem` that do not collide with ours."""
        out: list[str] = []
        k = 0
        while len(out) < count:
            cand = f"{stem}{k}"
            if cand not in self._name_to_index and cand not in out:
                out.append(cand)
            k += 1
        return out

    def extended(self, extra: Sequence[str]) -> "PolyRing":
        return PolyRing(self.names + tuple(extra))

    def restricted(self, keep: Sequence[int]) -> "PolyRing":
        return PolyRing([self.names[i] for i in keep])


# ---------------------------------------------------------------------------
# Monomial orders


class MonomialOrder:
    """Total order on monomials of a fixed arity, packed as integer weights.

    ``key(m)`` is order-preserving and additive: key(a*b) == key(a)+key(b),
    so the Groebner engine can track leading monomials with plain integer
    arithmetic.
    """

    kind = "abstract"

    def __init__(self, arity: int):
        self.arity = arity
        self.weights = self._build_weights()

    def _build_weights(self) -> tuple:
        raise NotImplementedError

    def key(self, exps: Monomial) -> int:
        w = self.weights
        return sum(e * w[i] for i, e in enumerate(exps) if e)

    def compare(self, a: Monomial, b: Monomial) -> int:
        """-1, 0 or 1 as a <, ==, > b in this order."""
        if len(a) != self.arity or len(b) != self.arity:
            raise PolyError("monomial arity does not match order")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __eq__(self, other):
        return type(self) is type(other) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def signature(self) -> tuple:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}{self.signature()}"


def _grevlex_weights(positions: Sequence[int], arity: int) -> list[int]:
    """Packed weights realizing grevlex on the given variable positions."""
    n = len(positions)
    weights = [0] * arity
    top = _KEY_BASE ** n
    for rank, pos in enumerate(positions):
        weights[pos] = top - _KEY_BASE ** rank
    return weights


def _lex_weights(positions: Sequence[int], arity: int) -> list[int]:
    n = len(positions)
    weights = [0] * arity
    for rank, pos in enumerate(positions):
        weights[pos] = _KEY_BASE ** (n - 1 - rank)
    return weights


class GrevLex(MonomialOrder):
    kind = "grevlex"

    def _build_weights(self):
        return tuple(_grevlex_weights(range(self.arity), self.arity))

    def signature(self):
        return ("grevlex", self.arity)


class Lex(MonomialOrder):
    kind = "lex"

    def _build_weights(self):
        return tuple(_lex_weights(range(self.arity), self.arity))

    def signature(self):
        return ("lex", self.arity)


class Block(MonomialOrder):
    """Block order: compare the front block first, then the back block.

    Basis elements free of front variables generate the elimination ideal,
    so this is the elimination order with the front block eliminated.
    Both blocks are compared by grevlex unless sub-orders are given.
    """

    kind = "block"

    def __init__(self, arity: int, front: Iterable[int],
                 front_kind: str = "grevlex", back_kind: str = "grevlex"):
        front = tuple(sorted(set(front)))
        if any(not 0 <= i < arity for i in front):
            raise PolyError("front block variable out of range")
        self.front = front
        self.back = tuple(i for i in range(arity) if i not in front)
        self.front_kind = front_kind
        self.back_kind = back_kind
        super().__init__(arity)

    def _build_weights(self):
        make = {"grevlex": _grevlex_weights, "lex": _lex_weights}
        back_w = make[self.back_kind](self.back, self.arity)
        front_w = make[self.front_kind](self.front, self.arity)
        # The whole back-key range must stay below one front-weight step.
        shift = _KEY_BASE ** (len(self.back) + 1)
        return tuple(f * shift + b for f, b in zip(front_w, back_w))

    def signature(self):
        return ("block", self.arity, self.front, self.front_kind, self.back_kind)

    def front_key(self, exps: Monomial) -> int:
        make = {"grevlex": _grevlex_weights, "lex": _lex_weights}
        w = make[self.front_kind](self.front, self.arity)
        return sum(exps[i] * w[i] for i in self.front)


def grevlex(ring: PolyRing) -> GrevLex:
    return GrevLex(ring.arity)


def lex(ring: PolyRing) -> Lex:
    return Lex(ring.arity)


def block_order(ring: PolyRing, front: Iterable[int]) -> MonomialOrder:
    """Elimination order with `front` compared first (grevlex in both blocks).

    An empty or full front block degenerates to plain grevlex.
    """
    front = tuple(sorted(set(front)))
    if not front or len(front) == ring.arity:
        return GrevLex(ring.arity)
    return Block(ring.arity, front)


def compare(a: Monomial, b: Monomial, order: MonomialOrder) -> int:
    return order.compare(a, b)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))

def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))

def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))

def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))

def monomial_degree(a: Monomial) -> int:
    return sum(a)


# ---------------------------------------------------------------------------
# Polynomials


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, coeffs: Mapping[Monomial, Fraction]):
        self.ring = ring
        order = GrevLex(ring.arity)
        items = [(m, c) for m, c in coeffs.items() if c]
        items.sort(key=lambda mc: order.key(mc[0]), reverse=True)
        self.terms = tuple(items)
        self._hash = None

    # -- basic protocol

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return poly_to_str(self)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms)

    # -- queries

    def total_degree(self) -> int:
        """Max total degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(m) for m, _ in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(m[i] for m, _ in self.terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m, _ in self.terms)

    def constant_term(self) -> Fraction:
        zero = (0,) * self.ring.arity
        for m, c in self.terms:
            if m == zero:
                return c
        return Fraction(0)

    def support_vars(self) -> frozenset:
        out = set()
        for m, _ in self.terms:
            for i, e in enumerate(m):
                if e:
                    out.add(i)
        return frozenset(out)

    def coeff(self, m: Monomial) -> Fraction:
        for mm, c in self.terms:
            if mm == m:
                return c
        return Fraction(0)

    # -- arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise PolyError("mixed rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        for m, c in other.terms:
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return Polynomial(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        acc: dict = {}
        for mb, cb in b:
            for ma, ca in a:
                m = tuple(x + y for x, y in zip(ma, mb))
                s = acc.get(m, 0) + ca * cb
                if s:
                    acc[m] = s
                else:
                    del acc[m]
        return Polynomial(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise PolyError("negative power")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: cc * c for m, cc in self.terms})

    def mul_term(self, m: Monomial, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(mm, m)): cc * c for mm, cc in self.terms},
        )

    def derivative(self, i: int) -> "Polynomial":
        acc: dict = {}
        for m, c in self.terms:
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                acc[tuple(mm)] = c * e
        return Polynomial(self.ring, acc)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            v = c
            for i, e in enumerate(m):
                if e:
                    v *= Fraction(point[i]) ** e
            total += v
        return total

    def substitute(self, repl: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials (same ring) for the given variable indices."""
        out = self.ring.zero()
        for m, c in self.terms:
            piece = self.ring.const(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                if i in repl:
                    piece = piece * repl[i] ** e
                else:
                    mm = [0] * self.ring.arity
                    mm[i] = e
                    piece = piece.mul_term(tuple(mm), 1)
            out = out + piece
        return out

    def map_ring(self, new_ring: PolyRing, var_map: Sequence[int]) -> "Polynomial":
        """Reinterpret in `new_ring`, variable i going to position var_map[i]."""
        acc: dict = {}
        for m, c in self.terms:
            mm = [0] * new_ring.arity
            for i, e in enumerate(m):
                if e:
                    mm[var_map[i]] = e
            acc[tuple(mm)] = c
        return Polynomial(new_ring, acc)

    def restrict_ring(self, new_ring: PolyRing, keep: Sequence[int]) -> "Polynomial":
        """Project onto a subring; all dropped variables must be absent."""
        pos = {old: new for new, old in enumerate(keep)}
        acc: dict = {}
        for m, c in self.terms:
            mm = [0] * new_ring.arity
            for i, e in enumerate(m):
                if e:
                    if i not in pos:
                        raise PolyError("polynomial involves a dropped variable")
                    mm[pos[i]] = e
            acc[tuple(mm)] = c
        return Polynomial(new_ring, acc)

    # -- normalization

    def content(self) -> Fraction:
        """Positive rational c with self/c integral, primitive; 0 for zero."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for _, c in self.terms:
            num = int_gcd(num, c.numerator)
            den = den * c.denominator // int_gcd(den, c.denominator)
        return Fraction(num, den)

    def normalized(self) -> "Polynomial":
        """Content-free form with positive leading (grevlex) coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.terms[0][1] < 0:
            c = -c
        if c == 1:
            return self
        return Polynomial(self.ring, {m: cc / c for m, cc in self.terms})

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_term(order or GrevLex(self.ring.arity))[1]
        return self.scale(Fraction(1) / lc)

    # -- leading data

    def leading_term(self, order: MonomialOrder) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        best_m, best_c = self.terms[0]
        if order.kind != "grevlex" or order.arity != self.ring.arity:
            best_k = order.key(best_m)
            for m, c in self.terms[1:]:
                k = order.key(m)
                if k > best_k:
                    best_k, best_m, best_c = k, m, c
        return best_m, best_c

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return self.leading_term(order)[0]


def leading_term(f: Polynomial, order: MonomialOrder) -> tuple[Monomial, Fraction]:
    return f.leading_term(order)


# ---------------------------------------------------------------------------
# GCD via primitive-part recursion with subresultant remainder sequences


def _exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact quotient f/g; raises PolyError when g does not divide f."""
    if g.is_zero():
        raise PolyError("division by zero polynomial")
    ring = f.ring
    order = GrevLex(ring.arity)
    gm, gc = g.leading_term(order)
    out: dict = {}
    rem = f
    while rem.terms:
        rm, rc = rem.terms[0]
        if not monomial_divides(gm, rm):
            raise PolyError("inexact polynomial division")
        qm = monomial_div(rm, gm)
        qc = rc / gc
        out[qm] = out.get(qm, 0) + qc
        rem = rem - g.mul_term(qm, qc)
    return Polynomial(ring, out)


def _degree_in(f: Polynomial, v: int) -> int:
    return f.degree_in(v)


def _univar_coeffs(f: Polynomial, v: int) -> dict[int, Polynomial]:
    """View f in (ring)[v]: map v-degree -> coefficient polynomial (v-free)."""
    ring = f.ring
    buckets: dict[int, dict] = {}
    for m, c in f.terms:
        e = m[v]
        mm = list(m)
        mm[v] = 0
        buckets.setdefault(e, {})[tuple(mm)] = c
    return {e: Polynomial(ring, d) for e, d in buckets.items()}


def _from_univar(coeffs: dict[int, Polynomial], v: int, ring: PolyRing) -> Polynomial:
    acc: dict = {}
    for e, p in coeffs.items():
        for m, c in p.terms:
            mm = list(m)
            mm[v] = mm[v] + e
            acc[tuple(mm)] = acc.get(tuple(mm), 0) + c
    return Polynomial(ring, acc)


def _lc_in(f: Polynomial, v: int) -> Polynomial:
    d = f.degree_in(v)
    return _univar_coeffs(f, v).get(d, f.ring.zero())


def _content_in(f: Polynomial, v: int) -> Polynomial:
    cont = f.ring.zero()
    for p in _univar_coeffs(f, v).values():
        cont = gcd(cont, p)
        if cont.is_constant() and not cont.is_zero():
            break
    return cont


def _pseudo_rem(f: Polynomial, g: Polynomial, v: int) -> Polynomial:
    """prem(f, g) in v: lc_v(g)^(df-dg+1) * f reduced by g, no fractions."""
    df, dg = f.degree_in(v), g.degree_in(v)
    if df < dg:
        return f
    lg = _lc_in(g, v)
    rem = f
    ring = f.ring
    for _ in range(df - dg + 1):
        dr = rem.degree_in(v)
        if rem.is_zero() or dr < dg:
            rem = rem * lg
            continue
        lr = _lc_in(rem, v)
        shift = [0] * ring.arity
        shift[v] = dr - dg
        rem = rem * lg - g.mul_term(tuple(shift), 1) * lr
    return rem


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Greatest common divisor, content-free with positive leading coefficient.

    Primitive-part recursion on the variable occurring most often, with a
    subresultant remainder sequence keeping intermediate growth polynomial.
    """
    if f.ring != g.ring:
        raise PolyError("mixed rings")
    ring = f.ring
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    if f.is_constant() or g.is_constant():
        return ring.one()
    common = f.support_vars() & g.support_vars()
    if not common:
        return ring.one()
    counts = {
        v: sum(1 for m, _ in f.terms if m[v]) + sum(1 for m, _ in g.terms if m[v])
        for v in common
    }
    v = max(sorted(common), key=lambda i: counts[i])

    cont_f = _content_in(f, v)
    cont_g = _content_in(g, v)
    a = _exact_div(f, cont_f) if not cont_f.is_constant() else f
    b = _exact_div(g, cont_g) if not cont_g.is_constant() else g
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a

    # Subresultant PRS on the primitive parts.
    one = ring.one()
    h = one
    gg = one
    while True:
        delta = a.degree_in(v) - b.degree_in(v)
        rem = _pseudo_rem(a, b, v)
        if rem.is_zero():
            break
        if rem.degree_in(v) == 0:
            b = one
            break
        denom = gg * h ** delta
        a, b = b, _exact_div(rem, denom) if not denom.is_constant() else rem.scale(
            1 / denom.constant_term()
        )
        gg = _lc_in(a, v)
        if delta == 0:
            h = h
        elif delta == 1:
            h = gg
        else:
            h = _exact_div(gg ** delta, h ** (delta - 1))
    result = b if b.degree_in(v) > 0 else one
    if result.degree_in(v) > 0:
        cont = _content_in(result, v)
        if not cont.is_constant():
            result = _exact_div(result, cont)
    return (gcd(cont_f, cont_g) * result).normalized()


def gcd_many(fs: Iterable[Polynomial]) -> Polynomial:
    fs = list(fs)
    if not fs:
        raise PolyError("gcd of empty list")
    acc = fs[0].ring.zero()
    for f in fs:
        acc = gcd(acc, f)
        if acc.is_constant() and not acc.is_zero():
            break
    return acc


def lcm(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.is_zero() or g.is_zero():
        return f.ring.zero()
    return _exact_div(f * g, gcd(f, g)).normalized()


def lcm_set(fs: Sequence[Polynomial], ring: PolyRing | None = None) -> Polynomial:
    """Least common multiple of a list; 1 for the empty list (ring required)."""
    fs = list(fs)
    if not fs:
        if ring is None:
            raise PolyError("lcm_set of an empty list needs an explicit ring")
        return ring.one()
    if any(f.is_zero() for f in fs):
        raise PolyError("lcm_set of a zero polynomial")
    acc = fs[0].ring.one()
    for f in fs:
        acc = lcm(acc, f)
    return acc


def squarefree_part(f: Polynomial) -> Polynomial:
    """The product of f's distinct irreducible factors (same vanishing locus)."""
    if f.is_zero():
        raise PolyError("squarefree part of zero")
    if f.is_constant():
        return f.ring.one()
    d = f.ring.zero()
    for i in sorted(f.support_vars()):
        d = gcd(d, f.derivative(i))
        if d.is_constant() and not d.is_zero():
            break
    g = gcd(f, d)
    if g.is_constant():
        return f.normalized()
    return _exact_div(f.normalized(), g).normalized()


def divides(f: Polynomial, g: Polynomial) -> bool:
    """True when f divides g exactly."""
    if f.is_zero():
        return g.is_zero()
    try:
        _exact_div(g, f)
        return True
    except PolyError:
        return False


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact quotient f/g (raises when the division is inexact)."""
    return _exact_div(f, g)


def gcd_free_basis(fs: Sequence[Polynomial]) -> list[Polynomial]:
    """Pairwise-coprime squarefree polynomials generating the same
    multiplicative set: every input is a product of powers of the output.

    Computed with gcds and exact divisions only; no irreducible
    factorization is attempted, so factors shared by no pair of inputs
    stay joined.
    """
    work = []
    for f in fs:
        if f.is_zero() or f.is_constant():
            continue
        work.append(squarefree_part(f))
    basis: list[Polynomial] = []
    while work:
        f = work.pop()
        if f.is_constant():
            continue
        refined = f
        i = 0
        while i < len(basis):
            b = basis[i]
            g = gcd(refined, b)
            if g.is_constant():
                i += 1
                continue
            # split b into g and b/g, strip g from the working factor
            basis.pop(i)
            rem_b = _exact_div(b, g)
            if not rem_b.is_constant():
                basis.insert(i, rem_b.normalized())
                i += 1
            work.append(g)
            refined = _exact_div(refined, g)
            if refined.is_constant():
                break
        if not refined.is_constant():
            basis.append(refined.normalized())
    # dedup (coprimality makes duplicates impossible except unit drift)
    seen = set()
    out = []
    for b in basis:
        if b.terms not in seen:
            seen.add(b.terms)
            out.append(b)
    return out


# ---------------------------------------------------------------------------
# Text grammar: identifiers, ^, optional *, integer or p/q literals, parens.


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()/]))"
)


class ParseError(PolyError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class _Parser:
    def __init__(self, ring: PolyRing, text: str, line: int = 1):
        self.ring = ring
        self.text = text
        self.line = line
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                stripped = text[pos:].strip()
                if not stripped:
                    break
                raise ParseError(f"unexpected character {stripped[0]!r}", line, pos + 1)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text) + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg, col):
        raise ParseError(msg, self.line, col)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, col = self.peek()
        if kind is not None:
            self.fail(f"unexpected token {val!r}", col)
        return p

    def expr(self) -> Polynomial:
        kind, val, _ = self.peek()
        sign = 1
        while kind == "op" and val in "+-":
            self.take()
            if val == "-":
                sign = -sign
            kind, val, _ = self.peek()
        acc = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                acc = acc + nxt if val == "+" else acc - nxt
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                acc = acc * self.factor()  # juxtaposition
            else:
                return acc

    def factor(self) -> Polynomial:
        kind, val, col = self.peek()
        sign = 1
        while kind == "op" and val == "-":
            self.take()
            sign = -sign
            kind, val, col = self.peek()
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2, c2 = self.take()
            if k2 != "num":
                self.fail("exponent must be a nonnegative integer", c2)
            base = base ** int(v2)
        return base.scale(sign)

    def atom(self) -> Polynomial:
        kind, val, col = self.take()
        if kind == "num":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, c3 = self.take()
                if k3 != "num" or int(v3) == 0:
                    self.fail("malformed rational literal", c3)
                return self.ring.const(Fraction(int(val), int(v3)))
            return self.ring.const(int(val))
        if kind == "name":
            if val not in self.ring._name_to_index:
                self.fail(f"unknown variable {val!r}", col)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            p = self.expr()
            k2, v2, c2 = self.take()
            if k2 != "op" or v2 != ")":
                self.fail("missing closing parenthesis", c2)
            return p
        self.fail(f"unexpected token {val!r}", col)


def parse_polynomial(ring: PolyRing, text: str, line: int = 1) -> Polynomial:
    return _Parser(ring, text, line).parse()


def _monomial_str(ring: PolyRing, m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(ring.names[i])
        elif e > 1:
            parts.append(f"{ring.names[i]}^{e}")
    return "*".join(parts)


def poly_to_str(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    pieces = []
    for idx, (m, c) in enumerate(f.terms):
        mono = _monomial_str(f.ring, m)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if idx == 0:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)
