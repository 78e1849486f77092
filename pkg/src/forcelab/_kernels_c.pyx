# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contracts as _kernels_py; truth values live in
flat unsigned-char tables indexed (x*m + y)*n + p throughout."""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy, memset


cdef struct Prep:
    unsigned char *belowT   # belowT[p*n+q] == 1  iff  q <= p
    unsigned char *compat   # compat[a*n+b] == 1  iff  a, b have a common extension


cdef int _prep(int n, const unsigned char[:] leq, Prep *out) except -1:
    cdef int p, q, a, b, c, hit
    out.belowT = <unsigned char *> calloc(n * n, 1)
    out.compat = <unsigned char *> calloc(n * n, 1)
    if out.belowT == NULL or out.compat == NULL:
        raise MemoryError()
    for p in range(n):
        for q in range(n):
            out.belowT[p * n + q] = leq[q * n + p]
    for a in range(n):
        for b in range(n):
            hit = 0
            for c in range(n):
                if out.belowT[a * n + c] and out.belowT[b * n + c]:
                    hit = 1
                    break
            out.compat[a * n + b] = <unsigned char> hit
    return 0


cdef void _free_prep(Prep *prep):
    free(prep.belowT)
    free(prep.compat)


cdef list _grouped_codes(int m, const int[:] ranks):
    cdef list codes = sorted(range(m * m),
                             key=lambda c: ranks[c // m] + ranks[c % m])
    cdef list groups = []
    cdef int i = 0, j, s
    while i < len(codes):
        j = i
        s = ranks[<int> codes[i] // m] + ranks[<int> codes[i] % m]
        while j < len(codes) and ranks[<int> codes[j] // m] + ranks[<int> codes[j] % m] == s:
            j += 1
        groups.append(codes[i:j])
        i = j
    return groups


cdef void _dense_close(int n, const unsigned char *belowT,
                       const unsigned char *hits, unsigned char *out) nogil:
    # out[p] = 1 iff every q <= p has some r <= q with hits[r]
    cdef int p, q, r, covered, ok
    for p in range(n):
        ok = 1
        for q in range(n):
            if belowT[p * n + q]:
                covered = 0
                for r in range(n):
                    if belowT[q * n + r] and hits[r]:
                        covered = 1
                        break
                if not covered:
                    ok = 0
                    break
        out[p] = <unsigned char> ok


cdef void _predense_close(int n, const unsigned char *belowT,
                          const unsigned char *compat,
                          const unsigned char *hits, unsigned char *out) nogil:
    # out[p] = 1 iff every q <= p is compatible with some hit
    cdef int p, q, r, covered, ok
    for p in range(n):
        ok = 1
        for q in range(n):
            if belowT[p * n + q]:
                covered = 0
                for r in range(n):
                    if compat[q * n + r] and hits[r]:
                        covered = 1
                        break
                if not covered:
                    ok = 0
                    break
        out[p] = <unsigned char> ok


def atomic_tables(int m, int n, leq_in, child_in, cond_in, off_in, ranks_in):
    """Truth tables of the three atomic relations over all name pairs.

    Returns (tin, tsub, teq) as flat byte tables indexed (x*m + y)*n + p.
    """
    cdef const unsigned char[:] leq = leq_in
    cdef const int[:] ent_child = child_in
    cdef const int[:] ent_cond = cond_in
    cdef const int[:] ent_off = off_in
    cdef const int[:] ranks = ranks_in
    cdef Prep prep
    _prep(n, leq, &prep)
    cdef unsigned char *tin = <unsigned char *> calloc(m * m * n, 1)
    cdef unsigned char *tsub = <unsigned char *> calloc(m * m * n, 1)
    cdef unsigned char *teq = <unsigned char *> calloc(m * m * n, 1)
    cdef unsigned char *hits = <unsigned char *> calloc(n, 1)
    cdef unsigned char *closed = <unsigned char *> calloc(n, 1)
    if tin == NULL or tsub == NULL or teq == NULL or hits == NULL or closed == NULL:
        _free_prep(&prep)
        free(tin); free(tsub); free(teq); free(hits); free(closed)
        raise MemoryError()
    cdef list groups = _grouped_codes(m, ranks)
    cdef list group
    cdef int code, x, y, e, z, r, p, q, dead
    try:
        for group in groups:
            for code in group:
                x = code // m
                y = code % m
                for p in range(n):
                    tsub[code * n + p] = 1
                for e in range(ent_off[x], ent_off[x + 1]):
                    z = ent_child[e]
                    r = ent_cond[e]
                    # entry (z, r) of x: z must be forced into y densely below p and r
                    memcpy(hits, tin + (z * m + y) * n, n)
                    _dense_close(n, prep.belowT, hits, closed)
                    dead = 1
                    for p in range(n):
                        if tsub[code * n + p]:
                            # z must land in y densely below every common
                            # extension of p and r
                            for q in range(n):
                                if prep.belowT[p * n + q] and prep.belowT[r * n + q] \
                                        and not closed[q]:
                                    tsub[code * n + p] = 0
                                    break
                        if tsub[code * n + p]:
                            dead = 0
                    if dead:
                        break
            for code in group:
                x = code // m
                y = code % m
                for p in range(n):
                    teq[code * n + p] = tsub[code * n + p] & tsub[(y * m + x) * n + p]
            for code in group:
                x = code // m
                y = code % m
                memset(hits, 0, n)
                for e in range(ent_off[y], ent_off[y + 1]):
                    z = ent_child[e]
                    r = ent_cond[e]
                    for q in range(n):
                        if prep.belowT[r * n + q] and teq[(x * m + z) * n + q]:
                            hits[q] = 1
                _dense_close(n, prep.belowT, hits, tin + code * n)
        out_in = PyBytes_FromStringAndSize(<char *> tin, m * m * n)
        out_sub = PyBytes_FromStringAndSize(<char *> tsub, m * m * n)
        out_eq = PyBytes_FromStringAndSize(<char *> teq, m * m * n)
    finally:
        _free_prep(&prep)
        free(tin); free(tsub); free(teq); free(hits); free(closed)
    return out_in, out_sub, out_eq


def witness_tables(int m, int n, leq_in, child_in, cond_in, off_in, ranks_in):
    """Greatest fixed point of the witness-tuple deletion operator.

    Returns (ein, esub, sweeps) with the same flat layout as atomic_tables.
    """
    cdef const unsigned char[:] leq = leq_in
    cdef const int[:] ent_child = child_in
    cdef const int[:] ent_cond = cond_in
    cdef const int[:] ent_off = off_in
    cdef const int[:] ranks = ranks_in
    cdef Prep prep
    _prep(n, leq, &prep)
    cdef unsigned char *ein = <unsigned char *> calloc(m * m * n, 1)
    cdef unsigned char *esub = <unsigned char *> calloc(m * m * n, 1)
    cdef unsigned char *hits = <unsigned char *> calloc(n, 1)
    cdef unsigned char *closed = <unsigned char *> calloc(n, 1)
    cdef unsigned char *fresh = <unsigned char *> calloc(n, 1)
    if ein == NULL or esub == NULL or hits == NULL or closed == NULL or fresh == NULL:
        _free_prep(&prep)
        free(ein); free(esub); free(hits); free(closed); free(fresh)
        raise MemoryError()
    memset(ein, 1, m * m * n)
    memset(esub, 1, m * m * n)
    cdef list groups = _grouped_codes(m, ranks)
    cdef list group
    cdef int code, x, y, e, w, s, p, q, sweeps = 0, changed = 1
    try:
        while changed:
            changed = 0
            sweeps += 1
            for group in groups:
                for code in group:
                    x = code // m
                    y = code % m
                    for p in range(n):
                        fresh[p] = 1
                    for e in range(ent_off[x], ent_off[x + 1]):
                        w = ent_child[e]
                        s = ent_cond[e]
                        memcpy(hits, ein + (w * m + y) * n, n)
                        for p in range(n):
                            if not fresh[p]:
                                continue
                            # every q below both p and s must be compatible
                            # with a surviving membership tuple
                            for q in range(n):
                                if prep.belowT[p * n + q] and prep.belowT[s * n + q]:
                                    if not _compat_hit(n, prep.compat, hits, q):
                                        fresh[p] = 0
                                        break
                    for p in range(n):
                        if esub[code * n + p] != fresh[p]:
                            esub[code * n + p] = fresh[p]
                            changed = 1
                    memset(hits, 0, n)
                    for e in range(ent_off[y], ent_off[y + 1]):
                        w = ent_child[e]
                        s = ent_cond[e]
                        for q in range(n):
                            if prep.belowT[s * n + q] and esub[(x * m + w) * n + q] \
                                    and esub[(w * m + x) * n + q]:
                                hits[q] = 1
                    _predense_close(n, prep.belowT, prep.compat, hits, closed)
                    for p in range(n):
                        if ein[code * n + p] != closed[p]:
                            ein[code * n + p] = closed[p]
                            changed = 1
        out_in = PyBytes_FromStringAndSize(<char *> ein, m * m * n)
        out_sub = PyBytes_FromStringAndSize(<char *> esub, m * m * n)
    finally:
        _free_prep(&prep)
        free(ein); free(esub); free(hits); free(closed); free(fresh)
    return out_in, out_sub, sweeps


cdef inline int _compat_hit(int n, const unsigned char *compat,
                            const unsigned char *hits, int q) nogil:
    cdef int r
    for r in range(n):
        if compat[q * n + r] and hits[r]:
            return 1
    return 0
