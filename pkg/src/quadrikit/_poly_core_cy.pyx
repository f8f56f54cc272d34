# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernel; semantics identical to quadrikit._poly_core_py."""

BACKEND = "cython"


cpdef dict add_terms(dict a, dict b):
    cdef dict out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


cpdef dict sub_terms(dict a, dict b):
    cdef dict out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = -c
        else:
            s = s - c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


cpdef dict neg_terms(dict a):
    cdef dict out = {}
    for m, c in a.items():
        out[m] = -c
    return out


cpdef dict scale_terms(dict a, k):
    cdef dict out = {}
    if not k:
        return out
    for m, c in a.items():
        out[m] = c * k
    return out


cpdef dict shift_terms(dict a, tuple mono, k):
    cdef dict out = {}
    cdef Py_ssize_t i, n
    if not k:
        return out
    n = len(mono)
    for m, c in a.items():
        key = tuple([(<tuple> m)[i] + mono[i] for i in range(n)])
        out[key] = c * k
    return out


cpdef dict mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef Py_ssize_t i, n
    if len(a) < len(b):
        a, b = b, a
    for m1, c1 in a.items():
        n = len(<tuple> m1)
        for m2, c2 in b.items():
            key = tuple([(<tuple> m1)[i] + (<tuple> m2)[i] for i in range(n)])
            p = c1 * c2
            s = out.get(key)
            if s is None:
                out[key] = p
            else:
                s = s + p
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


cdef bint _grevlex_gt(tuple m1, tuple m2):
    cdef long d1 = 0, d2 = 0
    cdef Py_ssize_t i, n = len(m1)
    for i in range(n):
        d1 += <long> m1[i]
        d2 += <long> m2[i]
    if d1 != d2:
        return d1 > d2
    for i in range(n - 1, -1, -1):
        if m1[i] != m2[i]:
            return m1[i] < m2[i]
    return False


cpdef tuple leading_monomial(dict terms, bint lex):
    """Largest monomial of a nonzero term map under grevlex (lex if `lex`)."""
    cdef tuple best = None
    for m in terms:
        if best is None:
            best = <tuple> m
        elif lex:
            if (<tuple> m) > best:
                best = <tuple> m
        elif _grevlex_gt(<tuple> m, best):
            best = <tuple> m
    return best
