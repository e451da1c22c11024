# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled implementation of the hot reduction kernels.

Semantics match ``stratakit._kernel._pure`` exactly; coefficients and keys
stay arbitrary-precision Python ints, the win is the merge loop itself.
"""

from math import gcd as _gcd

BACKEND = "compiled"


cdef inline tuple _shift_exps(tuple exps, tuple m):
    cdef Py_ssize_t n = len(exps)
    cdef Py_ssize_t v
    out = [0] * n
    for v in range(n):
        out[v] = (<object>exps[v]) + (<object>m[v])
    return tuple(out)


def combine(a, mk1, me1, list t1, Py_ssize_t s1, b, mk2, me2, list t2, Py_ssize_t s2):
    """a*(m1*t1[s1:]) + b*(m2*t2[s2:]) merged by descending key."""
    cdef list out = []
    cdef Py_ssize_t i = s1, j = s2
    cdef Py_ssize_t n1 = len(t1), n2 = len(t2)
    cdef bint shift1 = me1 is not None
    cdef bint shift2 = me2 is not None
    cdef tuple term
    while i < n1 and j < n2:
        term = <tuple>t1[i]
        k1 = (<object>term[0]) + mk1
        term = <tuple>t2[j]
        k2 = (<object>term[0]) + mk2
        if k1 > k2:
            term = <tuple>t1[i]
            if shift1:
                out.append((k1, _shift_exps(<tuple>term[1], <tuple>me1), a * (<object>term[2])))
            else:
                out.append((k1, term[1], a * (<object>term[2])))
            i += 1
        elif k2 > k1:
            term = <tuple>t2[j]
            if shift2:
                out.append((k2, _shift_exps(<tuple>term[1], <tuple>me2), b * (<object>term[2])))
            else:
                out.append((k2, term[1], b * (<object>term[2])))
            j += 1
        else:
            c = a * (<object>(<tuple>t1[i])[2]) + b * (<object>(<tuple>t2[j])[2])
            if c:
                term = <tuple>t1[i]
                if shift1:
                    out.append((k1, _shift_exps(<tuple>term[1], <tuple>me1), c))
                else:
                    out.append((k1, term[1], c))
            i += 1
            j += 1
    while i < n1:
        term = <tuple>t1[i]
        k1 = (<object>term[0]) + mk1
        if shift1:
            out.append((k1, _shift_exps(<tuple>term[1], <tuple>me1), a * (<object>term[2])))
        else:
            out.append((k1, term[1], a * (<object>term[2])))
        i += 1
    while j < n2:
        term = <tuple>t2[j]
        k2 = (<object>term[0]) + mk2
        if shift2:
            out.append((k2, _shift_exps(<tuple>term[1], <tuple>me2), b * (<object>term[2])))
        else:
            out.append((k2, term[1], b * (<object>term[2])))
        j += 1
    return out


def scale_terms(a, list terms):
    cdef list out
    cdef tuple t
    if a == 1:
        return list(terms)
    out = []
    for t in terms:
        out.append((t[0], t[1], a * (<object>t[2])))
    return out


def content(list terms, Py_ssize_t start=0):
    cdef Py_ssize_t idx
    cdef Py_ssize_t n = len(terms)
    g = 0
    for idx in range(start, n):
        g = _gcd(g, <object>(<tuple>terms[idx])[2])
        if g == 1:
            return 1
    return g


def strip_content(list terms):
    cdef list out
    cdef tuple t
    g = content(terms)
    if g == 0 or g == 1:
        return terms
    out = []
    for t in terms:
        out.append((t[0], t[1], (<object>t[2]) // g))
    return out


def find_divisor(tuple lead_exps, lead_mask, list lm_masks, list lm_exps, list alive):
    cdef Py_ssize_t idx, v, n
    cdef tuple ge
    cdef bint ok
    cdef Py_ssize_t count = len(lm_exps)
    for idx in range(count):
        if not <bint>alive[idx]:
            continue
        if (<object>lm_masks[idx]) & ~lead_mask:
            continue
        ge = <tuple>lm_exps[idx]
        n = len(ge)
        ok = True
        for v in range(n):
            if (<object>ge[v]) > (<object>lead_exps[v]):
                ok = False
                break
        if ok:
            return idx
    return -1


def pair_candidates(tuple te, list lm_exps, tuple weights, Py_ssize_t upto):
    """For a new leading monomial te: [(lcm_key, lcm_mask, lcm_exps, i)]."""
    cdef Py_ssize_t n = len(te)
    cdef Py_ssize_t i, v
    cdef tuple ge
    cdef list out = []
    cdef list lel
    for i in range(upto):
        ge = <tuple>lm_exps[i]
        lel = [0] * n
        key = 0
        mask = 0
        for v in range(n):
            x = <object>te[v]
            y = <object>ge[v]
            e = x if x >= y else y
            lel[v] = e
            if e:
                key = key + e * (<object>weights[v])
                mask = mask | (1 << v)
        out.append((key, mask, tuple(lel), i))
    return out


def chain_filter(list pairs, tuple te, te_mask, list lm_exps):
    """Drop queued pairs eliminated by the new element (chain criterion)."""
    cdef Py_ssize_t n = len(te)
    cdef Py_ssize_t v
    cdef tuple pair, le, gi, gj
    cdef list out = []
    cdef bint divides, same_i, same_j
    for pair in pairs:
        if (<object>te_mask) & ~(<object>pair[1]):
            out.append(pair)
            continue
        le = <tuple>pair[4]
        divides = True
        for v in range(n):
            if (<object>te[v]) > (<object>le[v]):
                divides = False
                break
        if not divides:
            out.append(pair)
            continue
        gi = <tuple>lm_exps[<Py_ssize_t>pair[2]]
        gj = <tuple>lm_exps[<Py_ssize_t>pair[3]]
        same_i = True
        same_j = True
        for v in range(n):
            e = <object>le[v]
            a = <object>te[v]
            b = <object>gi[v]
            if (a if a >= b else b) != e:
                same_i = False
                break
        for v in range(n):
            e = <object>le[v]
            a = <object>te[v]
            b = <object>gj[v]
            if (a if a >= b else b) != e:
                same_j = False
                break
        if same_i or same_j:
            out.append(pair)
    return out


def reduce_full(list p, list lm_keys, list lm_exps, list lm_coeffs,
                list lm_masks, list alive, list terms, bint top_only=False):
    """Normal form of p modulo the reducer tables, primitive output.

    With ``top_only`` the loop stops once the lead is irreducible and the
    tail passes through untouched.
    """
    cdef list out = []
    cdef Py_ssize_t pos = 0
    cdef long steps = 0
    cdef Py_ssize_t idx, v, n, i
    cdef tuple lead, ge, le, me
    cdef bint ok
    cdef Py_ssize_t n_red = len(lm_exps)
    while pos < len(p):
        lead = <tuple>p[pos]
        le = <tuple>lead[1]
        mask = 0
        n = len(le)
        for v in range(n):
            if <object>le[v]:
                mask = mask | (1 << v)
        idx = -1
        for i in range(n_red):
            if not <bint>alive[i]:
                continue
            if (<object>lm_masks[i]) & ~mask:
                continue
            ge = <tuple>lm_exps[i]
            ok = True
            for v in range(n):
                if (<object>ge[v]) > (<object>le[v]):
                    ok = False
                    break
            if ok:
                idx = i
                break
        if idx < 0:
            if top_only:
                out.extend(p[pos:])
                break
            out.append(lead)
            pos += 1
            continue
        lc = <object>lead[2]
        gc = <object>lm_coeffs[idx]
        g = _gcd(lc, gc)
        a = gc // g
        b = -(lc // g)
        if a < 0:
            a = -a
            b = -b
        mk = (<object>lead[0]) - (<object>lm_keys[idx])
        ge = <tuple>lm_exps[idx]
        melist = [0] * n
        for v in range(n):
            melist[v] = (<object>le[v]) - (<object>ge[v])
        me = tuple(melist)
        p = combine(a, 0, None, p, pos + 1, b, mk, me, <list>terms[idx], 1)
        pos = 0
        if a != 1 and len(out) > 0:
            out = scale_terms(a, out)
        steps += 1
        if (steps & 7) == 0 and len(p) > 0:
            g0 = _gcd(content(p), content(out))
            if g0 > 1:
                p = [(k, e, c // g0) for k, e, c in p]
                out = [(k, e, c // g0) for k, e, c in out]
    out = strip_content(out)
    if len(out) > 0 and (<object>(<tuple>out[0])[2]) < 0:
        out = [(k, e, -c) for k, e, c in out]
    return out
