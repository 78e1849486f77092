"""Finite preorders of forcing conditions.

Conditions are string tokens; the token "1" always denotes the top
element. The order is stored as the reflexive-transitive closure of the
declared generating pairs, held as per-condition bitmasks so the density
queries are cheap bit arithmetic.
"""

from .errors import UnknownConditionError, ValidationError


class Preorder:
    def __init__(self, conditions, pairs):
        """conditions: iterable of tokens; pairs: iterable of (lo, hi) with lo <= hi."""
        self.conditions = tuple(conditions)
        if len(set(self.conditions)) != len(self.conditions):
            raise ValidationError("conditions-unique", "duplicate condition token")
        if "1" not in self.conditions:
            raise ValidationError("top-present", 'no condition named "1"')
        self._index = {c: i for i, c in enumerate(self.conditions)}
        n = len(self.conditions)
        self.n = n
        # below[p] is the bitmask of all q with q <= p
        below = [1 << i for i in range(n)]
        for lo, hi in pairs:
            below[self.index(hi)] |= 1 << self.index(lo)
        # transitive closure by iterating mask unions to a fixed point
        changed = True
        while changed:
            changed = False
            for p in range(n):
                acc = below[p]
                m = acc
                while m:
                    q = (m & -m).bit_length() - 1
                    m &= m - 1
                    acc |= below[q]
                if acc != below[p]:
                    below[p] = acc
                    changed = True
        self.below = below
        top = self.index("1")
        if below[top] != (1 << n) - 1:
            missing = next(c for i, c in enumerate(self.conditions)
                           if not below[top] >> i & 1)
            raise ValidationError("top-greatest", "%s is not below 1" % missing)
        # compat[p] is the bitmask of conditions sharing a lower bound with p
        self.compat = []
        for p in range(n):
            m = 0
            for q in range(n):
                if below[p] & below[q]:
                    m |= 1 << q
            self.compat.append(m)

    def index(self, token):
        try:
            return self._index[token]
        except KeyError:
            raise UnknownConditionError(token) from None

    def mask(self, tokens):
        m = 0
        for t in tokens:
            m |= 1 << self.index(t)
        return m

    def unmask(self, m):
        return tuple(c for i, c in enumerate(self.conditions) if m >> i & 1)

    def leq(self, a, b):
        """a <= b: a extends b."""
        return bool(self.below[self.index(b)] >> self.index(a) & 1)

    def compatible(self, a, b):
        """Some condition lies below both a and b."""
        return bool(self.below[self.index(a)] & self.below[self.index(b)])

    def dense_below(self, D, p):
        """Every q <= p has some r <= q with r in D."""
        return self.dense_mask(self.mask(D)) >> self.index(p) & 1 == 1

    def dense_mask(self, dmask):
        """Bitmask of all p such that dmask is dense below p."""
        n = self.n
        cover = 0
        for q in range(n):
            if self.below[q] & dmask:
                cover |= 1 << q
        out = 0
        for p in range(n):
            if not self.below[p] & ~cover:
                out |= 1 << p
        return out

    def predense_mask(self, dmask):
        """Bitmask of all p such that every r <= p is compatible with some member of dmask."""
        n = self.n
        cover = 0
        for r in range(n):
            if self.compat[r] & dmask:
                cover |= 1 << r
        out = 0
        for p in range(n):
            if not self.below[p] & ~cover:
                out |= 1 << p
        return out

    def predense_below(self, D, p):
        """Every r <= p is compatible with some member of D."""
        return self.predense_mask(self.mask(D)) >> self.index(p) & 1 == 1

    def dense_below_pair(self, D, p, r):
        """Every s below both p and r has some q <= s with q in D.

        Vacuously true when p and r are incompatible.
        """
        dmask = self.mask(D)
        cover = 0
        for q in range(self.n):
            if self.below[q] & dmask:
                cover |= 1 << q
        meet = self.below[self.index(p)] & self.below[self.index(r)]
        return not meet & ~cover

    def __eq__(self, other):
        if not isinstance(other, Preorder):
            return NotImplemented
        return (set(self.conditions) == set(other.conditions)
                and all(self.leq(a, b) == other.leq(a, b)
                        for a in self.conditions for b in self.conditions))

    def __repr__(self):
        return "Preorder(%d conditions)" % self.n
