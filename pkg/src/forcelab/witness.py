"""Witness relation: the auxiliary relation whose dense-below closure
recovers the atomic forcing relation.

A witness table is the greatest set of tuples (q, x, REL, y) that is
self-supporting: every membership tuple carries a predense set of
conditions each backed by an entry of y and two inclusion tuples, and
every inclusion tuple carries, per entry of x, a predense-below-the-meet
set backed by membership tuples. The kernel computes the fixed point by
deleting unsupported tuples until stable; certificates are read off the
survivors and can be revalidated independently of the engine.
"""

from .atomic import RELS, AtomicEngine
from .errors import ModeError
from .kernel import Encoded, witness_tables

WIT_RELS = ("in", "sub")


class WitnessCertificate:
    """Self-contained support data for a set of witness tuples.

    tuples: frozenset of (q token, x Name, rel, y Name)
    in_supports: {tuple -> frozenset of condition tokens}
    sub_supports: {tuple -> {(child Name, cond token) -> frozenset of tokens}}
    """

    def __init__(self, roots, tuples, in_supports, sub_supports):
        self.roots = tuple(roots)
        self.tuples = frozenset(tuples)
        self.in_supports = in_supports
        self.sub_supports = sub_supports

    def merge(self, other):
        ins = dict(self.in_supports)
        for k, v in other.in_supports.items():
            ins[k] = ins.get(k, frozenset()) | v
        subs = {k: dict(v) for k, v in self.sub_supports.items()}
        for k, per_entry in other.sub_supports.items():
            mine = subs.setdefault(k, {})
            for e, v in per_entry.items():
                mine[e] = mine.get(e, frozenset()) | v
        return WitnessCertificate(self.roots + other.roots,
                                  self.tuples | other.tuples, ins, subs)

    def validate(self, system):
        """Re-check every support requirement directly against the order."""
        order = system.order
        for root in self.roots:
            if root not in self.tuples:
                return False, "root %s missing" % (root,)
        for tup in self.tuples:
            q, x, rel, y = tup
            if rel == "in":
                d = self.in_supports.get(tup)
                if d is None:
                    return False, "no support for %s" % (tup,)
                if not order.predense_below(d, q):
                    return False, "support not predense below %s" % q
                for r in d:
                    if not any(order.leq(r, order.conditions[s])
                               and (r, x, "sub", w) in self.tuples
                               and (r, w, "sub", x) in self.tuples
                               for w, s in y.entries):
                        return False, "condition %s lacks a backing entry" % r
            else:
                per_entry = self.sub_supports.get(tup, {})
                for w, s in x.entries:
                    stok = order.conditions[s]
                    d = per_entry.get((w, stok))
                    if d is None:
                        return False, "no support for entry of %s" % (tup,)
                    meet = order.below[order.index(q)] & order.below[s]
                    covered = 0
                    for r in d:
                        covered |= order.compat[order.index(r)]
                    if meet & ~covered:
                        return False, "entry support not predense below the meet"
                    if any((r, w, "in", y) not in self.tuples for r in d):
                        return False, "entry support not backed by membership tuples"
        return True, ""

    def to_report(self, store):
        ser = store.serialize

        def tkey(tup):
            return (tup[0], ser(tup[1]), tup[2], ser(tup[3]))

        rows = []
        for tup in sorted(self.tuples, key=tkey):
            q, x, rel, y = tup
            row = {"q": q, "x": ser(x), "rel": rel, "y": ser(y)}
            if rel == "in":
                row["support"] = sorted(self.in_supports[tup])
            else:
                row["supports"] = [
                    {"child": ser(w), "cond": stok, "support": sorted(d)}
                    for (w, stok), d in sorted(
                        self.sub_supports.get(tup, {}).items(),
                        key=lambda item: (ser(item[0][0]), item[0][1]))]
            rows.append(row)
        return {"roots": [list(tkey(r)) for r in sorted(self.roots, key=tkey)],
                "tuples": rows}


class WitnessEngine:
    def __init__(self, system, store, strict=True):
        self.system = system
        self.store = store
        self.strict = strict
        self._masks = {}

    def admit(self, name):
        if self.strict and not self.store.is_hereditarily_symmetric(name):
            raise ModeError("name %s is not hereditarily symmetric"
                            % self.store.serialize(name))
        return name

    def precompute(self, names):
        closure = self.store.transitive_closure([self.admit(x) for x in names])
        if all((a.nid, b.nid) in self._masks for a in closure for b in closure):
            return
        enc = Encoded(self.system.order, closure)
        tabs = witness_tables(enc)
        for a in closure:
            for b in closure:
                self._masks[(a.nid, b.nid)] = {
                    rel: tabs.mask(rel, a, b) for rel in WIT_RELS}

    def masks(self, x, y):
        key = (x.nid, y.nid)
        hit = self._masks.get(key)
        if hit is None:
            self.precompute([x, y])
            hit = self._masks[key]
        return hit

    def vector(self, x, rel, y):
        if rel == "eq":
            return self.masks(x, y)["sub"] & self.masks(y, x)["sub"]
        if rel not in WIT_RELS:
            raise ValueError("rel must be one of %s" % (RELS,))
        return self.masks(self.admit(x), self.admit(y))[rel]

    def wit_forces(self, p, x, rel, y):
        """p is itself a witness for x REL y."""
        return bool(self.vector(x, rel, y) >> self.system.order.index(p) & 1)

    def wit_atomic_forces(self, p, x, rel, y):
        """The witness set is dense below p (this is the forcing relation)."""
        order = self.system.order
        return bool(order.dense_mask(self.vector(x, rel, y)) >> order.index(p) & 1)

    def certificate(self, p, x, rel, y):
        """Support data for the surviving tuples reachable from (p, x, rel, y),
        or None when the tuple did not survive."""
        if rel == "eq":
            first = self.certificate(p, x, "sub", y)
            second = self.certificate(p, y, "sub", x)
            if first is None or second is None:
                return None
            return first.merge(second)
        if not self.wit_forces(p, x, rel, y):
            return None
        order = self.system.order
        conds = order.conditions
        root = (p, x, rel, y)
        tuples, in_supports, sub_supports = set(), {}, {}
        stack = [root]
        while stack:
            tup = stack.pop()
            if tup in tuples:
                continue
            tuples.add(tup)
            q, u, r, v = tup
            if r == "in":
                d = []
                for rc in conds:
                    rc_i = order.index(rc)
                    for w, s in v.entries:
                        if (order.below[s] >> rc_i & 1
                                and self.wit_forces(rc, u, "sub", w)
                                and self.wit_forces(rc, w, "sub", u)):
                            d.append(rc)
                            stack.append((rc, u, "sub", w))
                            stack.append((rc, w, "sub", u))
                            break
                in_supports[tup] = frozenset(d)
            else:
                per_entry = {}
                for w, s in u.entries:
                    d = [rc for rc in conds if self.wit_forces(rc, w, "in", v)]
                    per_entry[(w, conds[s])] = frozenset(d)
                    stack.extend((rc, w, "in", v) for rc in d)
                sub_supports[tup] = per_entry
        return WitnessCertificate([root], tuples, in_supports, sub_supports)


def check_equivalence(system, store, names, conditions=None, strict=True):
    """Compare the forcing relation against the witness route on a full grid."""
    atoms = AtomicEngine(system, store, strict=strict)
    wits = WitnessEngine(system, store, strict=strict)
    conditions = tuple(conditions) if conditions else system.order.conditions
    disagreements = []
    checked = 0
    for x in names:
        for y in names:
            for rel in RELS:
                direct = atoms.vector(x, rel, y)
                routed = system.order.dense_mask(wits.vector(x, rel, y))
                for p in conditions:
                    checked += 1
                    i = system.order.index(p)
                    if direct >> i & 1 != routed >> i & 1:
                        disagreements.append(
                            {"p": p, "x": store.serialize(x), "rel": rel,
                             "y": store.serialize(y),
                             "direct": bool(direct >> i & 1),
                             "witness": bool(routed >> i & 1)})
    return {"checked": checked, "disagreements": disagreements,
            "status": "pass" if not disagreements else "fail"}
