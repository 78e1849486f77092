"""Automorphism groups of a preorder and normal filters of subgroups.

An automorphism is stored as a permutation of condition indices. Groups
are materialized in full (closure of the declared generators), which is
what keeps every later symmetry question a finite scan. A filter is given
by a base of subgroups; membership in the filter is the superset test
against the base.
"""

from .errors import ValidationError


class Automorphism:
    """Order automorphism; identity and hashing are by the permutation alone."""

    __slots__ = ("label", "perm")

    def __init__(self, label, perm):
        self.label = label
        self.perm = tuple(perm)

    def apply(self, i):
        return self.perm[i]

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return "Automorphism(%s)" % self.label


def compose_perms(outer, inner):
    """(outer after inner)(i) = outer[inner[i]]."""
    return tuple(outer[j] for j in inner)


def invert_perm(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


class AutomorphismGroup:
    def __init__(self, elements):
        elems = sorted(set(elements), key=lambda a: a.perm)
        self.elements = tuple(elems)
        self.by_perm = {a.perm: a for a in elems}
        n = len(elems[0].perm) if elems else 0
        ident = tuple(range(n))
        self.identity = self.by_perm.get(ident)

    @classmethod
    def generated(cls, n, generators):
        """Closure of the generators; products get dotted word labels."""
        ident = tuple(range(n))
        found = {ident: "id"}
        frontier = [ident]
        gens = [(g.label, g.perm) for g in generators]
        while frontier:
            nxt = []
            for perm in frontier:
                for glabel, gperm in gens:
                    prod = compose_perms(gperm, perm)
                    if prod not in found:
                        word = found[perm]
                        found[prod] = glabel if word == "id" else glabel + "." + word
                        nxt.append(prod)
            frontier = nxt
        return cls(Automorphism(w, p) for p, w in found.items())

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, auto):
        return auto.perm in self.by_perm

    def compose(self, a, b):
        return self.by_perm[compose_perms(a.perm, b.perm)]

    def inverse(self, a):
        return self.by_perm[invert_perm(a.perm)]

    def is_subgroup(self, subset):
        perms = {a.perm for a in subset}
        if not perms or not perms <= set(self.by_perm):
            return False
        for p in perms:
            for q in perms:
                if compose_perms(p, q) not in perms:
                    return False
        return True

    def conjugate(self, auto, subgroup):
        """auto . H . auto^-1 as a frozenset of elements."""
        inv = invert_perm(auto.perm)
        return frozenset(self.by_perm[compose_perms(compose_perms(auto.perm, h.perm), inv)]
                         for h in subgroup)


class SubgroupFilter:
    """Normal filter over the group, given by a finite base of subgroups."""

    def __init__(self, base):
        self.base = tuple(frozenset(entry) for entry in base)

    def contains(self, subgroup):
        perms = {a.perm for a in subgroup}
        return any({a.perm for a in entry} <= perms for entry in self.base)


class SymmetricSystem:
    """A preorder together with an automorphism group and a subgroup filter."""

    def __init__(self, label, order, group, filter):
        self.label = label
        self.order = order
        self.group = group
        self.filter = filter

    def apply_condition(self, auto, token):
        return self.order.conditions[auto.apply(self.order.index(token))]

    def sym_of_condition_set(self, tokens):
        """Setwise stabilizer of the given condition set."""
        mask = self.order.mask(tokens)
        out = []
        for auto in self.group:
            image = 0
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                m &= m - 1
                image |= 1 << auto.apply(i)
            if image == mask:
                out.append(auto)
        return frozenset(out)

    def in_filter(self, subgroup):
        return self.filter.contains(subgroup)

    def is_symmetrically_dense(self, tokens):
        """Dense below 1 and stabilized by a filter subgroup."""
        return (self.order.dense_below(tokens, "1")
                and self.in_filter(self.sym_of_condition_set(tokens)))

    def assert_valid(self):
        for check in validate_system(self):
            if check["status"] != "pass":
                raise ValidationError(check["check"], check["detail"])

    def __eq__(self, other):
        if not isinstance(other, SymmetricSystem):
            return NotImplemented
        if self.label != other.label or self.order != other.order:
            return False
        remap = [other.order.index(c) for c in self.order.conditions]

        def transport(auto):
            out = [0] * len(remap)
            for i, j in enumerate(auto.perm):
                out[remap[i]] = remap[j]
            return tuple(out)

        mine = {transport(a) for a in self.group}
        theirs = {a.perm for a in other.group}
        if mine != theirs:
            return False
        my_base = {frozenset(transport(a) for a in entry) for entry in self.filter.base}
        their_base = {frozenset(a.perm for a in entry) for entry in other.filter.base}
        return my_base == their_base


def validate_system(system):
    """Run every structural invariant; returns a list of check reports."""
    checks = []
    order, group, filt = system.order, system.group, system.filter
    n = order.n

    def add(check, ok, detail=""):
        checks.append({"check": check, "status": "pass" if ok else "fail",
                       "detail": detail})

    add("order-reflexive",
        all(order.leq(c, c) for c in order.conditions))
    trans_bad = next(((a, b, c)
                      for a in order.conditions for b in order.conditions
                      if order.leq(a, b)
                      for c in order.conditions
                      if order.leq(b, c) and not order.leq(a, c)), None)
    add("order-transitive", trans_bad is None, str(trans_bad or ""))
    top_bad = next((c for c in order.conditions if not order.leq(c, "1")), None)
    add("top-greatest", top_bad is None, top_bad or "")

    for auto in group:
        if sorted(auto.perm) != list(range(n)):
            add("auto-bijection", False, auto.label)
            break
    else:
        add("auto-bijection", True)
    bad = None
    for auto in group:
        for a in range(n):
            for b in range(n):
                if (order.below[b] >> a & 1) != (order.below[auto.perm[b]] >> auto.perm[a] & 1):
                    bad = (auto.label, order.conditions[a], order.conditions[b])
                    break
            if bad:
                break
        if bad:
            break
    add("auto-order-preserving", bad is None, str(bad or ""))
    top = order.index("1")
    bad = next((auto.label for auto in group
                if not (order.below[top] >> auto.perm[top] & 1
                        and order.below[auto.perm[top]] >> top & 1)), None)
    add("auto-fixes-top", bad is None, bad or "")

    add("group-has-identity", group.identity is not None)
    bad = None
    perms = set(group.by_perm)
    for a in group:
        if invert_perm(a.perm) not in perms:
            bad = "missing inverse of %s" % a.label
            break
        for b in group:
            if compose_perms(a.perm, b.perm) not in perms:
                bad = "missing %s.%s" % (a.label, b.label)
                break
        if bad:
            break
    add("group-closed", bad is None, bad or "")

    add("filterbase-nonempty", len(filt.base) > 0)
    bad = next((i for i, entry in enumerate(filt.base)
                if not group.is_subgroup(entry)), None)
    add("filterbase-subgroups", bad is None,
        "" if bad is None else "entry %d is not a subgroup" % bad)
    full = frozenset(group.elements)
    add("filterbase-has-full-group", any(entry == full for entry in filt.base))
    bad = None
    for h1 in filt.base:
        for h2 in filt.base:
            meet = h1 & h2
            if not any(entry <= meet for entry in filt.base):
                bad = "no base entry inside an intersection"
                break
        if bad:
            break
    add("filterbase-directed", bad is None, bad or "")
    bad = None
    for auto in group:
        for entry in filt.base:
            conj = group.conjugate(auto, entry)
            if not any(other <= conj for other in filt.base):
                bad = "conjugate of a base entry by %s traps no base entry" % auto.label
                break
        if bad:
            break
    add("filterbase-normal", bad is None, bad or "")
    return checks
