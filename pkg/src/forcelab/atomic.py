"""The atomic forcing relation p forces x REL y for REL in {in, sub, eq}.

The recursion bottoms out because each step moves to a pair of strictly
smaller combined rank; the kernel exploits that by filling whole truth
tables in rank order. An engine memoizes per-pair condition masks, so a
query pays for the transitive closure of its two names once and every
later query on those names is a lookup.

Strict engines only admit hereditarily symmetric names; plain engines
admit every name of the store (the relation itself is computed by the
same recursion either way, strictness is an admissibility gate).
"""

from dataclasses import dataclass

from .errors import ModeError
from .kernel import Encoded, atomic_tables

RELS = ("in", "sub", "eq")


@dataclass(frozen=True)
class AtomicQuery:
    p: str
    x: object
    rel: str
    y: object


class AtomicEngine:
    def __init__(self, system, store, strict=True):
        self.system = system
        self.store = store
        self.strict = strict
        self._masks = {}          # (x.nid, y.nid) -> {rel: condition mask}

    def admit(self, name):
        if self.strict and not self.store.is_hereditarily_symmetric(name):
            raise ModeError("name %s is not hereditarily symmetric"
                            % self.store.serialize(name))
        return name

    def precompute(self, names):
        """Fill the memo for every pair over the closure of the given names."""
        closure = self.store.transitive_closure([self.admit(x) for x in names])
        if all((a.nid, b.nid) in self._masks for a in closure for b in closure):
            return
        enc = Encoded(self.system.order, closure)
        tabs = atomic_tables(enc)
        for a in closure:
            for b in closure:
                self._masks[(a.nid, b.nid)] = {
                    rel: tabs.mask(rel, a, b) for rel in RELS}

    def masks(self, x, y):
        key = (x.nid, y.nid)
        hit = self._masks.get(key)
        if hit is None:
            self.precompute([x, y])
            hit = self._masks[key]
        return hit

    def vector(self, x, rel, y):
        """Bitmask over condition indices where the relation is forced."""
        if rel not in RELS:
            raise ValueError("rel must be one of %s" % (RELS,))
        return self.masks(self.admit(x), self.admit(y))[rel]

    def forces(self, p, x, rel, y):
        return bool(self.vector(x, rel, y) >> self.system.order.index(p) & 1)

    def run(self, query):
        return self.forces(query.p, query.x, query.rel, query.y)
