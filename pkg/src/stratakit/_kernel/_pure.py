"""Pure-Python implementation of the hot reduction kernels.

A term list is a Python list of ``(key, exps, coeff)`` tuples sorted by
strictly descending ``key``, where ``key`` is the packed monomial order key
(additive under monomial multiplication), ``exps`` the exponent tuple and
``coeff`` a nonzero Python int.  The compiled sibling ``_core`` implements
the same functions with identical semantics.
"""

from math import gcd as _gcd

BACKEND = "pure"


def combine(a, mk1, me1, t1, s1, b, mk2, me2, t2, s2):
    """a*(m1*t1[s1:]) + b*(m2*t2[s2:]) merged by descending key.

    m1, m2 are monomials given as (key, exps); exps may be None for the
    identity monomial.  Zero coefficients from cancellation are dropped.
    """
    out = []
    append = out.append
    i = s1
    j = s2
    n1 = len(t1)
    n2 = len(t2)
    shift1 = me1 is not None
    shift2 = me2 is not None
    while i < n1 and j < n2:
        k1 = t1[i][0] + mk1
        k2 = t2[j][0] + mk2
        if k1 > k2:
            term = t1[i]
            if shift1:
                append((k1, tuple(map(int.__add__, term[1], me1)), a * term[2]))
            else:
                append((k1, term[1], a * term[2]))
            i += 1
        elif k2 > k1:
            term = t2[j]
            if shift2:
                append((k2, tuple(map(int.__add__, term[1], me2)), b * term[2]))
            else:
                append((k2, term[1], b * term[2]))
            j += 1
        else:
            c = a * t1[i][2] + b * t2[j][2]
            if c:
                term = t1[i]
                if shift1:
                    append((k1, tuple(map(int.__add__, term[1], me1)), c))
                else:
                    append((k1, term[1], c))
            i += 1
            j += 1
    while i < n1:
        term = t1[i]
        k1 = term[0] + mk1
        if shift1:
            append((k1, tuple(map(int.__add__, term[1], me1)), a * term[2]))
        else:
            append((k1, term[1], a * term[2]))
        i += 1
    while j < n2:
        term = t2[j]
        k2 = term[0] + mk2
        if shift2:
            append((k2, tuple(map(int.__add__, term[1], me2)), b * term[2]))
        else:
            append((k2, term[1], b * term[2]))
        j += 1
    return out


def scale_terms(a, terms):
    """a * terms for a nonzero integer a."""
    if a == 1:
        return list(terms)
    return [(k, e, a * c) for (k, e, c) in terms]


def content(terms, start=0):
    """Nonnegative gcd of the coefficients of terms[start:]."""
    g = 0
    for idx in range(start, len(terms)):
        g = _gcd(g, terms[idx][2])
        if g == 1:
            return 1
    return g


def strip_content(terms):
    """Content-free copy of the list (identity when content is 0 or 1)."""
    g = content(terms)
    if g in (0, 1):
        return terms
    return [(k, e, c // g) for (k, e, c) in terms]


def find_divisor(lead_exps, lead_mask, lm_masks, lm_exps, alive):
    """Index of the first alive reducer whose lm divides lead_exps, else -1."""
    for idx in range(len(lm_exps)):
        if not alive[idx]:
            continue
        if lm_masks[idx] & ~lead_mask:
            continue
        ge = lm_exps[idx]
        ok = True
        for v in range(len(ge)):
            if ge[v] > lead_exps[v]:
                ok = False
                break
        if ok:
            return idx
    return -1


def pair_candidates(te, lm_exps, weights, upto):
    """For a new leading monomial te: [(lcm_key, lcm_mask, lcm_exps, i)].

    One entry per existing reducer index i < upto; lcm keys use the packed
    order weights.
    """
    n = len(te)
    out = []
    for i in range(upto):
        ge = lm_exps[i]
        le = tuple(x if x >= y else y for x, y in zip(te, ge))
        key = 0
        mask = 0
        for v in range(n):
            e = le[v]
            if e:
                key += e * weights[v]
                mask |= 1 << v
        out.append((key, mask, le, i))
    return out


def chain_filter(pairs, te, te_mask, lm_exps):
    """Drop queued pairs eliminated by the new element (chain criterion).

    A pair (i, j) dies when te divides its lcm strictly finer than both
    mixed lcms: lcm(te,lm_i) != lcm(i,j) != lcm(te,lm_j).
    """
    n = len(te)
    out = []
    for pair in pairs:
        lk, lmask, i, j, le = pair
        if te_mask & ~lmask:
            out.append(pair)
            continue
        divides = True
        for v in range(n):
            if te[v] > le[v]:
                divides = False
                break
        if not divides:
            out.append(pair)
            continue
        gi = lm_exps[i]
        gj = lm_exps[j]
        same_i = True
        same_j = True
        for v in range(n):
            e = le[v]
            a = te[v]
            b = gi[v]
            if (a if a >= b else b) != e:
                same_i = False
                break
        for v in range(n):
            e = le[v]
            a = te[v]
            b = gj[v]
            if (a if a >= b else b) != e:
                same_j = False
                break
        if same_i or same_j:
            out.append(pair)
    return out


def reduce_full(p, lm_keys, lm_exps, lm_coeffs, lm_masks, alive, terms,
                top_only=False):
    """Normal form of p modulo the reducer tables, primitive output.

    With ``top_only`` the loop stops as soon as the leading term is
    irreducible (the tail is returned untouched); otherwise every term of
    the result is irreducible.  The scalar trail is dropped: the result is
    correct up to a positive rational factor, content-free with a positive
    leading coefficient.
    """
    out = []
    pos = 0
    steps = 0
    while pos < len(p):
        lk, le, lc = p[pos]
        mask = 0
        for i, e in enumerate(le):
            if e:
                mask |= 1 << i
        idx = find_divisor(le, mask, lm_masks, lm_exps, alive)
        if idx < 0:
            if top_only:
                out.extend(p[pos:])
                break
            out.append(p[pos])
            pos += 1
            continue
        gc = lm_coeffs[idx]
        g = _gcd(lc, gc)
        a = gc // g
        b = -(lc // g)
        if a < 0:
            a, b = -a, -b
        mk = lk - lm_keys[idx]
        ge = lm_exps[idx]
        me = tuple(map(int.__sub__, le, ge))
        p = combine(a, 0, None, p, pos + 1, b, mk, me, terms[idx], 1)
        pos = 0
        if a != 1 and out:
            out = scale_terms(a, out)
        steps += 1
        if steps & 7 == 0 and p:
            g0 = _gcd(content(p), content(out))
            if g0 > 1:
                p = [(k, e, c // g0) for k, e, c in p]
                out = [(k, e, c // g0) for k, e, c in out]
    out = strip_content(out)
    if out and out[0][2] < 0:
        out = [(k, e, -c) for k, e, c in out]
    return out
