"""Pure-Python kernels.  ``_fast.pyx`` mirrors this file line for line.

Lattice state is a pair of parallel lists ``rows`` / ``pivots`` kept sorted by
pivot column, every row zero left of its pivot and with a positive pivot
entry.  Optional ``trans`` holds, per row, a sparse ``{input index: coeff}``
record of how the row was built from the inserted vectors.
"""


def xgcd(a, b):
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _combine(d1, c1, d2, c2):
    out = {}
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


def _reduce_tail(v, vt, rows, pivots, trans, start):
    m = len(v)
    for s in range(start, len(pivots)):
        pc = pivots[s]
        x = v[pc]
        if x:
            row = rows[s]
            q = x // row[pc]
            if q:
                for k in range(pc, m):
                    if row[k]:
                        v[k] -= q * row[k]
                if vt is not None:
                    _sub_into(vt, trans[s], q)


def _sub_into(target, src, q):
    for k, v in src.items():
        w = target.get(k, 0) - q * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)


def echelon_insert(rows, pivots, vec, trans=None, vtrans=None):
    """Add ``vec`` to the lattice; return True if the lattice grew."""
    v = list(vec)
    m = len(v)
    vt = dict(vtrans) if trans is not None else None
    c = 0
    while c < m and not v[c]:
        c += 1
    r = 0
    changed = False
    while c < m:
        while r < len(pivots) and pivots[r] < c:
            r += 1
        if r == len(pivots) or pivots[r] != c:
            if v[c] < 0:
                v = [-a for a in v]
                if vt is not None:
                    vt = {k: -a for k, a in vt.items()}
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
            for k in range(c, m):
                if row[k]:
                    v[k] -= q * row[k]
            if vt is not None:
                _sub_into(vt, trans[r], q)
        else:
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
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


def echelon_residual(rows, pivots, vec, trans=None):
    """Reduce ``vec``; return ``(residual, combo)``.

    ``vec`` is in the lattice iff the residual is all zero, in which case
    ``combo`` (when ``trans`` is given) expresses it in the inserted vectors.
    """
    v = list(vec)
    m = len(v)
    combo = {} if trans is not None else None
    for s in range(len(pivots)):
        pc = pivots[s]
        x = v[pc]
        if x:
            row = rows[s]
            q, rem = divmod(x, row[pc])
            if rem:
                break
            for k in range(pc, m):
                if row[k]:
                    v[k] -= q * row[k]
            if combo is not None:
                _sub_into(combo, trans[s], -q)
    return v, combo


def hnf_reduce(rows, pivots, trans=None):
    """Bring entries above every pivot into ``[0, pivot)`` (canonical HNF)."""
    for r in range(len(rows)):
        _reduce_tail(rows[r], trans[r] if trans is not None else None,
                     rows, pivots, trans, r + 1)


def find_subword(word, pat, start=0):
    L = len(pat)
    last = len(word) - L
    p = start
    while p <= last:
        j = 0
        while j < L and word[p + j] == pat[j]:
            j += 1
        if j == L:
            return p
        p += 1
    return -1


def first_redex(word, lhss):
    """First rule (in order) whose lhs occurs in ``word``, leftmost match."""
    for i, pat in enumerate(lhss):
        p = find_subword(word, pat, 0)
        if p >= 0:
            return i, p
    return None
