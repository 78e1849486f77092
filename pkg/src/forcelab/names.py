"""Hereditarily structured names over a symmetric system.

A name is a finite set of (child name, condition) pairs. Names are
hash-consed per store: structurally equal names share one object, so
identity doubles as equality and children always carry smaller ids than
their parents (the table is in topological order).
"""

from itertools import combinations

from .errors import ModeError, ResourceLimitError, ValidationError
from .limits import active_cap


class Name:
    __slots__ = ("nid", "entries", "rank")

    def __init__(self, nid, entries, rank):
        self.nid = nid
        self.entries = entries        # tuple of (Name, condition index)
        self.rank = rank

    def __repr__(self):
        return "Name(#%d, rank %d, %d entries)" % (self.nid, self.rank, len(self.entries))


class ClassName:
    """A name used as a class parameter; structurally identical to a set name."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, ClassName) and self.name is other.name

    def __hash__(self):
        return hash((ClassName, id(self.name)))

    def __repr__(self):
        return "ClassName(#%d)" % self.name.nid


def plain(name_or_class):
    return name_or_class.name if isinstance(name_or_class, ClassName) else name_or_class


class NameStore:
    def __init__(self, system):
        self.system = system
        self._names = []
        self._key_to_name = {}
        self._apply_memo = {}
        self._sym_memo = {}
        self._hs_memo = {}
        self._ser_memo = {}
        self.empty = self.intern(())

    def __len__(self):
        return len(self._names)

    def intern(self, entries):
        """entries: iterable of (Name, condition index); returns the canonical Name."""
        key = tuple(sorted({(child.nid, cond) for child, cond in entries}))
        hit = self._key_to_name.get(key)
        if hit is not None:
            return hit
        canon = tuple((self._names[cn], cond) for cn, cond in key)
        rank = 0 if not canon else 1 + max(child.rank for child, _ in canon)
        name = Name(len(self._names), canon, rank)
        self._names.append(name)
        self._key_to_name[key] = name
        return name

    def intern_tokens(self, pairs):
        """pairs: iterable of (Name, condition token)."""
        idx = self.system.order.index
        return self.intern((child, idx(tok)) for child, tok in pairs)

    def check_name(self, value, _depth=0):
        """Canonical name of a natural number or a hereditary finite set literal."""
        if _depth > 64:
            raise ResourceLimitError("check literal nests deeper than 64")
        top = self.system.order.index("1")
        if isinstance(value, int):
            if value < 0:
                raise ValidationError("check-name", "negative number %d" % value)
            if value > 4096:
                raise ResourceLimitError("check numeral %d too large" % value)
            name = self.empty
            below = []
            for _ in range(value):
                below.append(name)
                name = self.intern((b, top) for b in below)
            return name
        if isinstance(value, (set, frozenset)):
            return self.intern((self.check_name(v, _depth + 1), top) for v in value)
        raise ValidationError("check-name", "unsupported literal %r" % (value,))

    def bullet(self, names):
        """Name with every given name attached to the top condition."""
        top = self.system.order.index("1")
        return self.intern((plain(x), top) for x in names)

    def kpair(self, a, b):
        """Kuratowski pair {{a}, {a, b}} built with top-condition entries."""
        return self.bullet([self.bullet([a]), self.bullet([a, b])])

    def apply(self, auto, name):
        """Pointwise action of an automorphism, applied hereditarily."""
        name = plain(name)
        key = (auto.perm, name.nid)
        hit = self._apply_memo.get(key)
        if hit is not None:
            return hit
        out = self.intern((self.apply(auto, child), auto.perm[cond])
                          for child, cond in name.entries)
        self._apply_memo[key] = out
        return out

    def sym_of_name(self, name):
        """Stabilizer subgroup {pi : pi(name) = name}."""
        name = plain(name)
        hit = self._sym_memo.get(name.nid)
        if hit is not None:
            return hit
        out = frozenset(a for a in self.system.group if self.apply(a, name) is name)
        self._sym_memo[name.nid] = out
        return out

    def is_hereditarily_symmetric(self, name):
        name = plain(name)
        hit = self._hs_memo.get(name.nid)
        if hit is not None:
            return hit
        ok = (all(self.is_hereditarily_symmetric(child) for child, _ in name.entries)
              and self.system.in_filter(self.sym_of_name(name)))
        self._hs_memo[name.nid] = ok
        return ok

    def serialize(self, name):
        """Canonical text form; stable across sessions, used for sorting and reports."""
        name = plain(name)
        hit = self._ser_memo.get(name.nid)
        if hit is not None:
            return hit
        conds = self.system.order.conditions
        parts = sorted("(%s,%s)" % (self.serialize(child), conds[cond])
                       for child, cond in name.entries)
        out = "{" + " ".join(parts) + "}"
        self._ser_memo[name.nid] = out
        return out

    def sort_key(self, name):
        name = plain(name)
        return (name.rank, self.serialize(name))

    def appearing_conditions(self, name, acc=None):
        name = plain(name)
        out = acc if acc is not None else set()
        for child, cond in name.entries:
            out.add(cond)
            self.appearing_conditions(child, out)
        return out

    def transitive_closure(self, roots):
        """Every name hereditarily reachable from the roots, in topological order."""
        seen = set()
        for root in roots:
            stack = [plain(root)]
            while stack:
                x = stack.pop()
                if x.nid in seen:
                    continue
                seen.add(x.nid)
                stack.extend(child for child, _ in x.entries)
        return [self._names[nid] for nid in sorted(seen)]

    def enumerate_hs(self, alpha, b=None, cap=None):
        """All hereditarily symmetric names of rank < alpha whose conditions
        (hereditarily) lie in b, in canonical order.

        b must be stabilized by a filter subgroup; defaults to every condition.
        Raises ResourceLimitError before materializing past the cap.
        """
        return self._enumerate(alpha, b, cap, symmetric_only=True)

    def enumerate_all(self, alpha, b=None, cap=None):
        """Same bounds without the symmetry requirement (every plain name)."""
        return self._enumerate(alpha, b, cap, symmetric_only=False)

    def _enumerate(self, alpha, b, cap, symmetric_only):
        system = self.system
        order = system.order
        cap = active_cap(cap)
        if alpha < 1:
            return ()
        if b is None:
            b = order.conditions
        b_idx = sorted(order.index(t) for t in b)
        if symmetric_only and not system.in_filter(system.sym_of_condition_set(b)):
            raise ValidationError("bound-symmetric",
                                  "bound set %s has no filter subgroup stabilizing it"
                                  % (tuple(b),))
        base = sorted({entry for entry in system.filter.base},
                      key=lambda e: (len(e), sorted(a.perm for a in e)))
        level = [self.empty]
        for _ in range(alpha - 1):
            pairs = [(child, cond) for child in level for cond in b_idx]
            pair_set = {(child.nid, cond) for child, cond in pairs}
            if symmetric_only:
                found = {self.empty.nid: self.empty}
                for entry in base:
                    orbits = self._orbits_within(pairs, pair_set, entry)
                    if orbits is None:
                        continue
                    if len(orbits) >= 40 or (1 << len(orbits)) > cap:
                        raise ResourceLimitError(
                            "level universe needs 2^%d names (cap %d)"
                            % (len(orbits), cap))
                    for k in range(len(orbits) + 1):
                        for combo in combinations(orbits, k):
                            name = self.intern(p for orbit in combo for p in orbit)
                            found[name.nid] = name
                            if len(found) > cap:
                                raise ResourceLimitError(
                                    "name universe exceeds cap %d" % cap)
                level = sorted(found.values(), key=self.sort_key)
            else:
                if len(pairs) >= 40 or (1 << len(pairs)) > cap:
                    raise ResourceLimitError(
                        "plain universe needs 2^%d names (cap %d)" % (len(pairs), cap))
                found = {}
                for bits in range(1 << len(pairs)):
                    name = self.intern(pairs[i] for i in range(len(pairs))
                                       if bits >> i & 1)
                    found[name.nid] = name
                level = sorted(found.values(), key=self.sort_key)
        if symmetric_only:
            bad = next((x for x in level if not self.is_hereditarily_symmetric(x)), None)
            if bad is not None:
                raise ValidationError("enumerate-hs", "non-symmetric name %s leaked"
                                      % self.serialize(bad))
            stab = system.sym_of_condition_set(order.conditions[i] for i in b_idx)
            if not stab <= self.sym_of_name(self.bullet(level)):
                raise ValidationError("enumerate-hs",
                                      "universe bullet not stabilized by sym(b)")
        return tuple(level)

    def _orbits_within(self, pairs, pair_set, subgroup):
        """Orbits of the subgroup action on (child, cond) pairs, or None when
        the action leaves the pair set (no invariant subset can use those pairs)."""
        seen = set()
        orbits = []
        for child, cond in pairs:
            if (child.nid, cond) in seen:
                continue
            orbit = set()
            stack = [(child, cond)]
            ok = True
            while stack:
                c, r = stack.pop()
                if (c.nid, r) in orbit:
                    continue
                orbit.add((c.nid, r))
                for auto in subgroup:
                    img = (self.apply(auto, c), auto.perm[r])
                    if (img[0].nid, img[1]) not in pair_set:
                        ok = False
                        break
                    stack.append(img)
                if not ok:
                    break
            seen |= orbit
            if ok:
                orbits.append(tuple((self._names[cn], r) for cn, r in sorted(orbit)))
        return orbits or None
