"""Pure-Python kernels.

Same contracts as the compiled twin in _kernels_c.pyx. Per-condition
truth values are carried as bitmask ints while computing and expanded to
flat byte tables on return.

Both kernels sweep name pairs in nondecreasing rank-sum order. Every
recursive dependency points at a strictly smaller rank sum, so the first
sweep already lands on the fixed point; the witness loop still re-sweeps
until nothing changes, which doubles as a verification pass.
"""


def _prep(n, leq):
    below = []
    for p in range(n):
        mask = 0
        for q in range(n):
            if leq[q * n + p]:
                mask |= 1 << q
        below.append(mask)
    compat = []
    for a in range(n):
        mask = 0
        for b in range(n):
            if below[a] & below[b]:
                mask |= 1 << b
        compat.append(mask)
    return below, compat


def _grouped_codes(m, ranks):
    codes = sorted(range(m * m), key=lambda c: ranks[c // m] + ranks[c % m])
    groups = []
    i = 0
    while i < len(codes):
        j = i
        s = ranks[codes[i] // m] + ranks[codes[i] % m]
        while j < len(codes) and ranks[codes[j] // m] + ranks[codes[j] % m] == s:
            j += 1
        groups.append(codes[i:j])
        i = j
    return groups


def _to_bytes(masks, n):
    out = bytearray(len(masks) * n)
    for code, mask in enumerate(masks):
        base = code * n
        while mask:
            p = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            out[base + p] = 1
    return out


def atomic_tables(m, n, leq, ent_child, ent_cond, ent_off, ranks):
    """Truth tables of the three atomic relations over all name pairs.

    Returns (tin, tsub, teq) as flat byte tables indexed (x*m + y)*n + p.
    """
    below, compat = _prep(n, leq)
    full = (1 << n) - 1
    tin = [0] * (m * m)
    tsub = [0] * (m * m)
    teq = [0] * (m * m)
    for group in _grouped_codes(m, ranks):
        for code in group:
            x, y = divmod(code, m)
            acc = full
            for e in range(ent_off[x], ent_off[x + 1]):
                z, r = ent_child[e], ent_cond[e]
                T = tin[z * m + y]
                cover = 0
                for s in range(n):
                    if below[s] & T:
                        cover |= 1 << s
                viol = below[r] & ~cover
                if viol:
                    ok = 0
                    for p in range(n):
                        if not below[p] & viol:
                            ok |= 1 << p
                    acc &= ok
                    if not acc:
                        break
            tsub[code] = acc
        for code in group:
            x, y = divmod(code, m)
            teq[code] = tsub[code] & tsub[y * m + x]
        for code in group:
            x, y = divmod(code, m)
            S = 0
            for e in range(ent_off[y], ent_off[y + 1]):
                z, r = ent_child[e], ent_cond[e]
                S |= below[r] & teq[x * m + z]
            cover = 0
            for q in range(n):
                if below[q] & S:
                    cover |= 1 << q
            acc = 0
            for p in range(n):
                if not below[p] & ~cover:
                    acc |= 1 << p
            tin[code] = acc
    return _to_bytes(tin, n), _to_bytes(tsub, n), _to_bytes(teq, n)


def witness_tables(m, n, leq, ent_child, ent_cond, ent_off, ranks):
    """Greatest fixed point of the witness-tuple deletion operator.

    Starts with every tuple alive and deletes tuples whose support
    requirement fails against the current survivor set, until stable.
    Returns (ein, esub, sweeps) with the same flat layout as atomic_tables.
    """
    below, compat = _prep(n, leq)
    full = (1 << n) - 1
    ein = [full] * (m * m)
    esub = [full] * (m * m)
    groups = _grouped_codes(m, ranks)
    sweeps = 0
    changed = True
    while changed:
        changed = False
        sweeps += 1
        for group in groups:
            for code in group:
                x, y = divmod(code, m)
                acc = full
                for e in range(ent_off[x], ent_off[x + 1]):
                    w, s = ent_child[e], ent_cond[e]
                    d = ein[w * m + y]
                    ccov = 0
                    for t in range(n):
                        if compat[t] & d:
                            ccov |= 1 << t
                    viol = below[s] & ~ccov
                    if viol:
                        ok = 0
                        for p in range(n):
                            if not below[p] & viol:
                                ok |= 1 << p
                        acc &= ok
                        if not acc:
                            break
                if acc != esub[code]:
                    esub[code] = acc
                    changed = True
                d = 0
                for e in range(ent_off[y], ent_off[y + 1]):
                    w, s = ent_child[e], ent_cond[e]
                    d |= below[s] & esub[x * m + w] & esub[w * m + x]
                ccov = 0
                for t in range(n):
                    if compat[t] & d:
                        ccov |= 1 << t
                acc = 0
                for p in range(n):
                    if not below[p] & ~ccov:
                        acc |= 1 << p
                if acc != ein[code]:
                    ein[code] = acc
                    changed = True
    return _to_bytes(ein, n), _to_bytes(esub, n), sweeps
