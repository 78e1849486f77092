"""Built-in system families.

SYS-A   three conditions, one swap, trivial filter; the classic pair of
        incomparable extensions.
SYS-A0  the same order with the identity group, so every name is symmetric.
SYS-B   finite sequences under end extension with valuewise permutations;
        carries the "length" dense family whose minimal predense covers
        grow with the value bound.
SYS-C   coherent 0/1 assignments on an A x B x C cell grid with per-alpha
        permutations of the last axis and the fix(e) filter base.
"""

from itertools import permutations, product
from math import factorial

from .errors import ForcelabError, ResourceLimitError
from .limits import active_cap
from .names import ClassName, NameStore
from .niceness import DenseFamily
from .order import Preorder
from .symmetry import Automorphism, AutomorphismGroup, SubgroupFilter, SymmetricSystem
from .sysfile import Workspace

FAMILIES = ("SYS-A", "SYS-A0", "SYS-B", "SYS-C")


def build(family, **params):
    if family == "SYS-A":
        return _build_a(trivial_group=False)
    if family == "SYS-A0":
        return _build_a(trivial_group=True)
    if family == "SYS-B":
        return _build_b(int(params.get("M", 2)), int(params.get("N", 2)),
                        params.get("cap"))
    if family == "SYS-C":
        return _build_c(int(params.get("A", 1)), int(params.get("B", 1)),
                        int(params.get("C", 2)), params.get("cap"))
    raise ForcelabError("unknown family %r (have %s)" % (family, ", ".join(FAMILIES)))


def _register_numerals(ws, upto=2):
    for k, label in enumerate(("zero", "one", "two", "three")[:upto + 1]):
        ws.names[label] = ws.store.check_name(k)


def _build_a(trivial_group):
    order = Preorder(("1", "p", "q"), [("p", "1"), ("q", "1")])
    tau = Automorphism("tau", (0, 2, 1))
    if trivial_group:
        group = AutomorphismGroup.generated(3, [])
    else:
        group = AutomorphismGroup.generated(3, [tau])
    system = SymmetricSystem("SYS-A0" if trivial_group else "SYS-A",
                             order, group, SubgroupFilter([frozenset(group.elements)]))
    system.assert_valid()
    store = NameStore(system)
    ws = Workspace(system, store)
    _register_numerals(ws)
    zero = ws.names["zero"]
    ws.names["y"] = store.intern_tokens([(zero, "p"), (zero, "q")])
    ws.names["xp"] = store.intern_tokens([(zero, "p")])
    ws.names["xq"] = store.intern_tokens([(zero, "q")])
    ws.names["ybul"] = store.bullet([ws.names["y"]])
    ws.classnames["C0"] = ClassName(store.bullet([zero]))
    ws.classnames["CP"] = ClassName(
        store.intern_tokens([(zero, c) for c in order.conditions]))
    ws.classnames["CE"] = ClassName(store.empty)
    ws.families["pq"] = DenseFamily(
        label="pq", index=(zero,), members=(frozenset({"p", "q"}),),
        sym=frozenset(group.elements))
    return ws


def _seq_token(seq):
    return "1" if not seq else "s" + "".join(str(v) for v in seq)


def _build_b(m_len, n_vals, cap=None):
    if not (1 <= m_len <= 4 and 1 <= n_vals <= 4):
        raise ForcelabError("SYS-B expects 1 <= M <= 4 and 1 <= N <= 4")
    cap = active_cap(cap)
    if factorial(n_vals) ** m_len > cap:
        raise ResourceLimitError("group order %d exceeds cap %d"
                                 % (factorial(n_vals) ** m_len, cap))
    seqs = [()]
    frontier = [()]
    for _ in range(m_len):
        frontier = [s + (v,) for s in frontier for v in range(n_vals)]
        seqs.extend(frontier)
    if len(seqs) > cap:
        raise ResourceLimitError("%d conditions exceed cap %d" % (len(seqs), cap))
    tokens = [_seq_token(s) for s in seqs]
    index = {s: i for i, s in enumerate(seqs)}
    pairs = [(_seq_token(s), _seq_token(s[:-1])) for s in seqs if s]
    order = Preorder(tokens, pairs)
    gens = []
    for pos in range(m_len):
        for a in range(n_vals - 1):
            perm = []
            for s in seqs:
                if len(s) > pos and s[pos] in (a, a + 1):
                    t = list(s)
                    t[pos] = a + 1 if s[pos] == a else a
                    perm.append(index[tuple(t)])
                else:
                    perm.append(index[s])
            gens.append(Automorphism("c%ds%d" % (pos, a), perm))
    group = AutomorphismGroup.generated(len(seqs), gens)
    system = SymmetricSystem("SYS-B(M=%d,N=%d)" % (m_len, n_vals), order, group,
                             SubgroupFilter([frozenset(group.elements)]))
    system.assert_valid()
    store = NameStore(system)
    ws = Workspace(system, store)
    _register_numerals(ws, upto=min(m_len, 3))
    zero = ws.names["zero"]
    for k in range(1, min(m_len, 2) + 1):
        ws.names["lev%d" % k] = store.intern_tokens(
            [(zero, _seq_token(s)) for s in seqs if len(s) == k])
    ws.names["levbul"] = store.bullet([ws.names["lev1"]])
    ws.classnames["CP"] = ClassName(
        store.intern_tokens([(zero, c) for c in tokens]))
    ws.families["length"] = DenseFamily(
        label="length",
        index=tuple(store.check_name(i) for i in range(1, m_len + 1)),
        members=tuple(frozenset(_seq_token(s) for s in seqs if len(s) >= i)
                      for i in range(1, m_len + 1)),
        sym=frozenset(group.elements))
    ws.meta["params"] = {"M": m_len, "N": n_vals}
    return ws


def _cell_token(cell):
    alpha, n, gamma, v = cell
    return "a%dn%dg%dv%d" % (alpha, n, gamma, v)


def _cond_token(cells):
    return "1" if not cells else "-".join(_cell_token(c) for c in sorted(cells))


def _build_c(a_coords, b_slots, c_vals, cap=None):
    if not (1 <= a_coords <= 2 and 1 <= b_slots <= 2 and 1 <= c_vals <= 4):
        raise ForcelabError("SYS-C expects A,B <= 2 and C <= 4")
    cap = active_cap(cap)
    if factorial(c_vals) ** a_coords > cap:
        raise ResourceLimitError("group order %d exceeds cap %d"
                                 % (factorial(c_vals) ** a_coords, cap))
    blocks = [(alpha, n) for alpha in range(a_coords) for n in range(b_slots)]
    block_options = [frozenset()] + sorted(
        {frozenset((g, v) for g in range(c_vals) if bits >> g & 1)
         for v in (0, 1) for bits in range(1, 1 << c_vals)},
        key=lambda fs: sorted(fs))
    if len(block_options) ** len(blocks) > cap:
        raise ResourceLimitError("%d conditions exceed cap %d"
                                 % (len(block_options) ** len(blocks), cap))
    conds = []
    for combo in product(block_options, repeat=len(blocks)):
        cells = frozenset((alpha, n, g, v)
                          for (alpha, n), opt in zip(blocks, combo)
                          for g, v in opt)
        conds.append(cells)
    conds = sorted(set(conds), key=lambda cs: (len(cs), sorted(cs)))
    tokens = [_cond_token(cs) for cs in conds]
    index = {cs: i for i, cs in enumerate(conds)}
    pairs = []
    for cs in conds:
        for cell in cs:
            smaller = cs - {cell}
            pairs.append((_cond_token(cs), _cond_token(smaller)))
    order = Preorder(tokens, pairs)

    def sigma_label(sigmas):
        moved = ["a%dp%s" % (alpha, "".join(map(str, sig)))
                 for alpha, sig in enumerate(sigmas) if sig != tuple(range(c_vals))]
        return "id" if not moved else "-".join(moved)

    elements = []
    fix_map = {frozenset(e): [] for e in _subsets(range(a_coords))}
    for sigmas in product(sorted(permutations(range(c_vals))), repeat=a_coords):
        perm = []
        for cs in conds:
            moved = frozenset((alpha, n, sigmas[alpha][g], v)
                              for alpha, n, g, v in cs)
            perm.append(index[moved])
        auto = Automorphism(sigma_label(sigmas), perm)
        elements.append(auto)
        for e in fix_map:
            if all(sigmas[alpha] == tuple(range(c_vals)) for alpha in e):
                fix_map[e].append(auto)
    group = AutomorphismGroup(elements)
    base = [frozenset(v) for _, v in sorted(fix_map.items(), key=lambda kv: sorted(kv[0]))]
    system = SymmetricSystem("SYS-C(A=%d,B=%d,C=%d)" % (a_coords, b_slots, c_vals),
                             order, group, SubgroupFilter(base))
    system.assert_valid()
    store = NameStore(system)
    ws = Workspace(system, store)
    _register_numerals(ws)
    ws.meta["params"] = {"A": a_coords, "B": b_slots, "C": c_vals}
    ws.meta["fix"] = {e: frozenset(v) for e, v in fix_map.items()}
    ws.meta["cells"] = {tok: cs for tok, cs in zip(tokens, conds)}
    for alpha in range(a_coords):
        ws.names["c%d" % alpha] = canonical_cohen_name(ws, alpha)
    ws.classnames["CP"] = ClassName(
        store.intern_tokens([(ws.names["zero"], c) for c in tokens]))
    return ws


def _subsets(items):
    items = list(items)
    out = []
    for bits in range(1 << len(items)):
        out.append(frozenset(items[i] for i in range(len(items)) if bits >> i & 1))
    return out


def canonical_cohen_name(ws, alpha):
    """Name whose entries attach each slot numeral to every condition that
    already sets a 1 somewhere in that slot of coordinate alpha."""
    params = ws.meta.get("params")
    cells = ws.meta.get("cells")
    if not params or "C" not in params or cells is None:
        raise ForcelabError("canonical cohen names exist only on SYS-C workspaces")
    entries = []
    for n in range(params["B"]):
        numeral = ws.store.check_name(n)
        for tok, cs in cells.items():
            if any(c[0] == alpha and c[1] == n and c[3] == 1 for c in cs):
                entries.append((numeral, tok))
    return ws.store.intern_tokens(entries)


def orbit_size(ws, q, e):
    """Size of the orbit of condition q under fix(e) on a SYS-C workspace."""
    fix_map = ws.meta.get("fix")
    if fix_map is None:
        raise ForcelabError("orbit sizes are defined on SYS-C workspaces only")
    key = frozenset(int(x) for x in e)
    if key not in fix_map:
        raise ForcelabError("unknown support %s" % sorted(key))
    q = ws.resolve_condition(q)
    return len({ws.system.apply_condition(auto, q) for auto in fix_map[key]})
