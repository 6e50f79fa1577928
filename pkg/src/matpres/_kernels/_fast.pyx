# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pure.py``.

Entries stay Python ints (coefficients outgrow 64 bits during closure), so the
win comes from typed loop indices and skipping interpreter dispatch on the
inner loops, not from machine arithmetic.
"""


def xgcd(a, b):
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


cdef dict _combine(dict d1, object c1, dict d2, object c2):
    cdef dict out = {}
    if c1:
        for k, v in d1.items():
            out[k] = v * c1
    if c2:
        for k, v in d2.items():
            w = out.get(k, 0) + v * c2
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


cdef void _sub_into(dict target, dict src, object q):
    for k, v in src.items():
        w = target.get(k, 0) - q * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)


cdef void _axpy(list v, list row, object q, Py_ssize_t start, Py_ssize_t m):
    # v[k] -= q * row[k] for k >= start
    cdef Py_ssize_t k
    for k in range(start, m):
        x = row[k]
        if x:
            v[k] = v[k] - q * x


cdef void _reduce_tail(list v, object vt, list rows, list pivots, object trans, Py_ssize_t start):
    cdef Py_ssize_t m = len(v)
    cdef Py_ssize_t s, pc
    cdef list row
    for s in range(start, len(pivots)):
        pc = pivots[s]
        x = v[pc]
        if x:
            row = rows[s]
            q = x // row[pc]
            if q:
                _axpy(v, row, q, pc, m)
                if vt is not None:
                    _sub_into(vt, trans[s], q)


def echelon_insert(list rows, list pivots, vec, trans=None, vtrans=None):
    cdef list v = list(vec)
    cdef Py_ssize_t m = len(v)
    cdef Py_ssize_t c = 0
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t k
    cdef list row, new, rest
    cdef bint changed = False
    vt = dict(vtrans) if trans is not None else None
    while c < m and not v[c]:
        c += 1
    while c < m:
        while r < len(pivots) and <Py_ssize_t>pivots[r] < c:
            r += 1
        if r == len(pivots) or <Py_ssize_t>pivots[r] != c:
            if v[c] < 0:
                v = [-a for a in v]
                if vt is not None:
                    vt = {kk: -a for kk, a in vt.items()}
            _reduce_tail(v, vt, rows, pivots, trans, r)
            rows.insert(r, v)
            pivots.insert(r, c)
            if trans is not None:
                trans.insert(r, vt)
            return True
        row = rows[r]
        a = row[c]
        b = v[c]
        if b % a == 0:
            q = b // a
            _axpy(v, row, q, c, m)
            if vt is not None:
                _sub_into(vt, trans[r], q)
        else:
            g, s, t = xgcd(a, b)
            ag = a // g
            bg = b // g
            new = [s * row[k] + t * v[k] for k in range(m)]
            rest = [bg * row[k] - ag * v[k] for k in range(m)]
            if vt is not None:
                nt = _combine(trans[r], s, vt, t)
                vt = _combine(trans[r], bg, vt, -ag)
            else:
                nt = None
            _reduce_tail(new, nt, rows, pivots, trans, r + 1)
            rows[r] = new
            if trans is not None:
                trans[r] = nt
            v = rest
            changed = True
        c += 1
        while c < m and not v[c]:
            c += 1
    return changed


def echelon_residual(list rows, list pivots, vec, trans=None):
    cdef list v = list(vec)
    cdef Py_ssize_t m = len(v)
    cdef Py_ssize_t s, pc
    cdef list row
    combo = {} if trans is not None else None
    for s in range(len(pivots)):
        pc = pivots[s]
        x = v[pc]
        if x:
            row = rows[s]
            q, rem = divmod(x, row[pc])
            if rem:
                break
            _axpy(v, row, q, pc, m)
            if combo is not None:
                _sub_into(combo, trans[s], -q)
    return v, combo


def hnf_reduce(list rows, list pivots, trans=None):
    cdef Py_ssize_t r
    for r in range(len(rows)):
        _reduce_tail(rows[r], trans[r] if trans is not None else None,
                     rows, pivots, trans, r + 1)


def find_subword(tuple word, tuple pat, Py_ssize_t start=0):
    cdef Py_ssize_t L = len(pat)
    cdef Py_ssize_t last = len(word) - L
    cdef Py_ssize_t p = start
    cdef Py_ssize_t j
    while p <= last:
        j = 0
        while j < L and word[p + j] == pat[j]:
            j += 1
        if j == L:
            return p
        p += 1
    return -1


def first_redex(tuple word, lhss):
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t p
    for pat in lhss:
        p = find_subword(word, pat, 0)
        if p >= 0:
            return i, p
        i += 1
    return None
