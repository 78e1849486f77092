"""Combinatorial niceness checks: pretameness witnesses over dense
families, stratified symmetric supersets, and the witness constructions
for separation and collection instances.

Predense-cover minimization is exact (branch and bound) for orders of up
to 64 conditions and falls back to greedy beyond that; reports say which
one produced the number.
"""

from dataclasses import dataclass

from .errors import ValidationError
from .limits import active_cap


@dataclass(frozen=True)
class DenseFamily:
    """Dense subsets of the order indexed by names.

    members runs parallel to index. sym, when given, is a subgroup under
    which the family is equivariant: pi maps members[i] onto members[pi(i)].
    """

    label: str
    index: tuple
    members: tuple
    sym: frozenset | None = None

    def position(self, name):
        for k, i_name in enumerate(self.index):
            if i_name is name:
                return k
        return None


def validate_family(system, store, fam):
    checks = []

    def add(check, ok, detail=""):
        checks.append({"check": check, "status": "pass" if ok else "fail",
                       "detail": detail})

    add("family-shapes", len(fam.index) == len(fam.members))
    add("family-index-distinct", len({i.nid for i in fam.index}) == len(fam.index))
    bad = next((k for k, D in enumerate(fam.members)
                if not system.order.dense_below(D, "1")), None)
    add("family-dense", bad is None,
        "" if bad is None else "member %d not dense" % bad)
    if fam.sym is not None:
        ok, detail = True, ""
        for auto in fam.sym:
            for k, i_name in enumerate(fam.index):
                image = fam.position(store.apply(auto, i_name))
                moved = frozenset(system.apply_condition(auto, c)
                                  for c in fam.members[k])
                if image is None or moved != fam.members[image]:
                    ok, detail = False, "member %d not equivariant under %s" % (
                        k, auto.label)
                    break
            if not ok:
                break
        add("family-equivariant", ok, detail)
        add("family-index-symmetric",
            store.is_hereditarily_symmetric(store.bullet(fam.index)))
    return checks


def minimal_cover(system, q, candidates):
    """Smallest subset of candidates predense below q.

    Returns (size, cover tuple, exact flag). Exact uses branch and bound
    keyed on the lowest uncovered condition; beyond 64 conditions a greedy
    cover is returned instead.
    """
    order = system.order
    target = order.below[order.index(q)]
    cands = []
    for tok in sorted(set(candidates)):
        mask = order.compat[order.index(tok)] & target
        if mask:
            cands.append((tok, mask))
    if not target:
        return 0, (), True
    union = 0
    for _, mask in cands:
        union |= mask
    if target & ~union:
        raise ValidationError("cover-infeasible",
                              "candidates cannot be predense below %s" % q)
    if order.n > 64:
        chosen, covered = [], 0
        while covered != target & union:
            tok, mask = max(cands, key=lambda c: ((c[1] & ~covered).bit_count(), c[0]))
            chosen.append(tok)
            covered |= mask
        return len(chosen), tuple(sorted(chosen)), False

    best = {"size": None, "cover": None}

    def descend(covered, chosen):
        if covered == target:
            if best["size"] is None or len(chosen) < best["size"]:
                best["size"] = len(chosen)
                best["cover"] = tuple(chosen)
            return
        remaining = target & ~covered
        if best["size"] is not None:
            widest = max((mask & remaining).bit_count() for _, mask in cands
                         if mask & remaining)
            need = -(-remaining.bit_count() // widest)
            if len(chosen) + need >= best["size"]:
                return
        lowest = remaining & -remaining
        for tok, mask in cands:
            if mask & lowest:
                descend(covered | mask, chosen + [tok])

    descend(0, [])
    return best["size"], tuple(sorted(best["cover"])), True


def pretameness_witness(system, store, fam, p, size_cap):
    """Search for q <= p with a small predense cover inside every family member.

    Returns a witness report for the first q (weakest first) whose minimal
    covers all fit under the cap, else a refusal report carrying the per-q
    minima.
    """
    order = system.order
    qs = [p] + [c for c in order.conditions if order.leq(c, p) and c != p]
    per_q = []
    exact_all = True
    for q in qs:
        sizes, covers = [], []
        for D in fam.members:
            size, cover, exact = minimal_cover(system, q, D)
            exact_all = exact_all and exact
            sizes.append(size)
            covers.append(cover)
        worst = max(sizes) if sizes else 0
        per_q.append({"q": q, "max_min_size": worst, "sizes": sizes})
        if worst <= size_cap:
            return {"status": "witness", "family": fam.label, "q": q,
                    "cap": size_cap, "max_size": worst, "exact": exact_all,
                    "covers": [sorted(c) for c in covers], "per_q": per_q}
    return {"status": "refusal", "family": fam.label, "cap": size_cap,
            "exact": exact_all,
            "best": min(row["max_min_size"] for row in per_q),
            "per_q": per_q}


def orbit_closure(system, tokens, subgroup):
    """Smallest superset of tokens closed under the subgroup action."""
    out = set(tokens)
    frontier = list(tokens)
    while frontier:
        c = frontier.pop()
        for auto in subgroup:
            image = system.apply_condition(auto, c)
            if image not in out:
                out.add(image)
                frontier.append(image)
    return frozenset(out)


def stratification_check(system, sample_cap=None):
    """Every scanned condition set must admit a symmetric superset; reports
    the smallest orbit closure found per set and the worst expansion."""
    cap = active_cap(sample_cap)
    order = system.order
    n = order.n
    exhaustive = (1 << n) <= cap
    if exhaustive:
        masks = range(1 << n)
    else:
        from itertools import combinations
        masks = []
        for size in range(n + 1):
            for combo in combinations(range(n), size):
                m = 0
                for i in combo:
                    m |= 1 << i
                masks.append(m)
                if len(masks) >= cap:
                    break
            if len(masks) >= cap:
                break
    base = sorted(system.filter.base,
                  key=lambda e: (len(e), sorted(a.perm for a in e)))
    checked = 0
    worst = None
    for mask in masks:
        a = order.unmask(mask)
        best_b = None
        for entry in base:
            b = orbit_closure(system, a, entry)
            if best_b is None or len(b) < len(best_b):
                best_b = b
        checked += 1
        if worst is None or len(best_b) - len(a) > worst["expansion"]:
            worst = {"a": sorted(a), "b": sorted(best_b),
                     "expansion": len(best_b) - len(a)}
    return {"status": "pass", "checked": checked, "exhaustive": exhaustive,
            "worst": worst}


def symmetric_witness(system, store, fam, p, size_cap):
    """Upgrade a pretameness witness to a symmetric one: close the union of
    the covers under a filter subgroup and intersect members with it."""
    plain = pretameness_witness(system, store, fam, p, size_cap)
    if plain["status"] != "witness":
        return {"status": "refusal", "family": fam.label, "plain": plain}
    union = {plain["q"]}
    for cover in plain["covers"]:
        union.update(cover)
    base = sorted(system.filter.base,
                  key=lambda e: (len(e), sorted(a.perm for a in e)))
    b = None
    for entry in base:
        closed = orbit_closure(system, union, entry)
        if b is None or len(closed) < len(b):
            b = closed
    sym_members = [frozenset(D) & b for D in fam.members]
    q = plain["q"]
    predense_ok = all(system.order.predense_below(d, q) for d in sym_members)
    group_used = (fam.sym if fam.sym is not None
                  else frozenset(system.group.elements))
    stab = system.sym_of_condition_set(b)
    h = frozenset(group_used) & stab
    equivariant = True
    detail = ""
    for auto in h:
        for k, i_name in enumerate(fam.index):
            image = fam.position(store.apply(auto, i_name))
            moved = frozenset(system.apply_condition(auto, c) for c in sym_members[k])
            if image is None or moved != sym_members[image]:
                equivariant = False
                detail = "member %d under %s" % (k, auto.label)
                break
        if not equivariant:
            break
    status = "witness" if (predense_ok and equivariant) else "fail"
    return {"status": status, "family": fam.label, "q": q,
            "b": sorted(b), "in_filter": system.in_filter(stab),
            "members": [sorted(d) for d in sym_members],
            "predense": predense_ok, "equivariant": equivariant,
            "detail": detail, "plain": plain}


def separation_witness(system, store, z, gamma, p, qb=None, b=None):
    """Build the name u with entries (y, s) for s below an entry condition of
    z such that s forces y into gamma, then verify u is forced to be the
    separated subset."""
    from . import extension, logic
    from .atomic import AtomicEngine

    order = system.order
    engine = AtomicEngine(system, store, strict=True)
    b_tokens = tuple(b) if b is not None else order.conditions
    u_entries = []
    member_masks = {}
    for w, _ in z.entries:
        if w.nid not in member_masks:
            member_masks[w.nid] = logic.class_membership_mask(system, engine, w, gamma)
    for w, r in z.entries:
        for s_tok in b_tokens:
            s = order.index(s_tok)
            if order.below[r] >> s & 1 and member_masks[w.nid] >> s & 1:
                u_entries.append((w, s))
    u = store.intern(u_entries)
    qb = qb or logic.QuantifierBound(2)
    formula = logic.parse(
        "(! (ex y in z . ! ((y in u) <-> (y in G)))) & (! (ex y in u . ! (y in z)))")
    binding = {"z": z, "u": u, "G": gamma}
    forced, exact = logic.forces(system, store, p, formula, binding, qb)
    truth = extension.truth_lemma_check(system, store, formula, binding, qb)
    semantic_ok = True
    for G in extension.enumerate_generics(system):
        if p not in G:
            continue
        zval = extension.evaluate(store, z, G)
        extent = extension.evaluate(store, gamma, G)
        if extension.evaluate(store, u, G) != zval & extent:
            semantic_ok = False
    hs = store.is_hereditarily_symmetric(u)
    status = "witness" if (forced and hs and semantic_ok
                           and truth["status"] == "ok") else "fail"
    return {"status": status, "u": store.serialize(u), "name": u,
            "hereditarily_symmetric": hs, "forced": forced, "exact": exact,
            "semantic": semantic_ok, "truth": truth}


def collection_witness(system, store, z, gamma, p, qb=None, alpha_max=5):
    """Find a bounded universe so that p forces every member of z to have a
    partner inside it under gamma; returns that universe as a bullet name."""
    from . import extension, logic
    from .errors import ResourceLimitError

    qb = qb or logic.QuantifierBound(2)
    premise = logic.Not(logic.ExistsIn(
        "x", "z", logic.Not(logic.ExistsSet("y", logic.PairInClass("x", "y", "G")))))
    forced, prem_exact = logic.forces(system, store, p, premise,
                                      {"z": z, "G": gamma}, qb)
    if not forced:
        return {"status": "refusal", "detail": "premise not forced",
                "premise_exact": prem_exact}
    statement = logic.Not(logic.ExistsIn(
        "x", "z", logic.Not(logic.ExistsIn(
            "y", "W", logic.PairInClass("x", "y", "G")))))
    for alpha in range(1, alpha_max + 1):
        try:
            universe = store.enumerate_hs(alpha)
        except ResourceLimitError as exc:
            return {"status": "refusal", "detail": str(exc), "alpha": alpha}
        w_bullet = store.bullet(universe)
        binding = {"z": z, "W": w_bullet, "G": gamma}
        ok, exact = logic.forces(system, store, p, statement, binding, qb)
        if ok:
            truth = extension.truth_lemma_check(system, store, statement,
                                                binding, qb)
            status = "witness" if truth["status"] == "ok" else "fail"
            return {"status": status, "alpha": alpha,
                    "bound": sorted(system.order.conditions),
                    "universe_size": len(universe),
                    "witness": store.serialize(w_bullet), "name": w_bullet,
                    "exact": exact, "truth": truth}
    return {"status": "refusal", "detail": "no universe up to alpha %d" % alpha_max}
