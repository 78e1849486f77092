"""Generic filters, evaluation of names, and the finite symmetric extension.

Generic filters over a finite preorder are exactly the upward closures of
its minimal equivalence classes; enumerate_generics still re-verifies each
candidate against the filter axioms and (when the powerset is small enough
to scan) against every symmetrically dense subset.

Evaluation sends a name to a hereditarily finite set; satisfaction is plain
Tarskian truth over those values, with the same bounded-universe discipline
and exactness flag as the forcing evaluator, so the two sides of the truth
lemma stay comparable.
"""

from .atomic import AtomicEngine
from .errors import ResourceLimitError, ValidationError
from .limits import active_cap
from .logic import (And, Atomic, ExistsClass, ExistsIn, ExistsSet, InClass,
                    Not, PairInClass, QuantifierBound, class_membership_mask,
                    forces_vector, free_vars, has_class_quantifier, is_bounded,
                    parse, sugar_implies, sugar_or, to_text)
from .names import ClassName, plain


def enumerate_generics(system, cap=None):
    """All generic filters, as frozensets of condition tokens."""
    order = system.order
    n = order.n
    cap = active_cap(cap)
    above = [0] * n
    for p in range(n):
        for q in range(n):
            if order.below[q] >> p & 1:
                above[p] |= 1 << q
    classes = []
    seen = 0
    for p in range(n):
        if seen >> p & 1:
            continue
        eq_class = order.below[p] & above[p]
        seen |= eq_class
        if order.below[p] == eq_class:
            classes.append(eq_class)
    generics = []
    for eq_class in classes:
        g_mask = 0
        for x in range(n):
            if eq_class >> x & 1:
                g_mask |= above[x]
        generics.append(frozenset(order.unmask(g_mask)))
    generics.sort(key=lambda g: sorted(g))
    for g in generics:
        _assert_generic(system, g, cap)
    return tuple(generics)


def _assert_generic(system, g, cap):
    order = system.order
    g_mask = order.mask(g)
    if not g_mask >> order.index("1") & 1:
        raise ValidationError("generic", "top condition missing from %s" % sorted(g))
    for p in range(order.n):
        if not g_mask >> p & 1:
            continue
        up_p = [q for q in range(order.n) if order.below[q] >> p & 1]
        if any(not g_mask >> q & 1 for q in up_p):
            raise ValidationError("generic", "not upward closed")
        for q in range(order.n):
            if g_mask >> q & 1:
                meet = order.below[p] & order.below[q] & g_mask
                if not meet:
                    raise ValidationError("generic", "not directed inside the filter")
    if (1 << order.n) > cap:
        return
    for bits in range(1, 1 << order.n):
        tokens = [order.conditions[i] for i in range(order.n) if bits >> i & 1]
        if system.is_symmetrically_dense(tokens) and not bits & g_mask:
            raise ValidationError(
                "generic", "misses symmetrically dense set %s" % tokens)


def evaluate(store, name, generic):
    """The hereditarily finite value of a name under a generic filter."""
    name = plain(name)
    generic = frozenset(generic)
    memo = store.__dict__.setdefault("_eval_memo", {})
    key = (name.nid, generic)
    hit = memo.get(key)
    if hit is not None:
        return hit
    conditions = store.system.order.conditions
    value = frozenset(evaluate(store, child, generic)
                      for child, cond in name.entries
                      if conditions[cond] in generic)
    memo[key] = value
    return value


def value_repr(value):
    """Canonical ASCII rendering of a hereditarily finite set."""
    if not value:
        return "{}"
    return "{" + ",".join(sorted(value_repr(v) for v in value)) + "}"


def set_rank(value):
    return 0 if not value else 1 + max(set_rank(v) for v in value)


class Satisfier:
    """Tarskian evaluator over evaluated values for one generic filter."""

    def __init__(self, system, store, generic, qb, cap=None):
        self.system = system
        self.store = store
        self.generic = frozenset(generic)
        self.qb = qb
        self.cap = cap
        self.memo = {}
        self._universe = None

    def universe(self):
        if self._universe is None:
            names = self.store.enumerate_hs(self.qb.alpha, self.qb.b, cap=self.cap)
            values = {}
            for w in names:
                values.setdefault(evaluate(self.store, w, self.generic), None)
            self._universe = list(values)
        return self._universe

    def _fingerprint(self, node, env):
        return tuple((var, env.get(var)) for var in sorted(free_vars(node)))

    def eval(self, node, env):
        key = (to_text(node), self._fingerprint(node, env))
        hit = self.memo.get(key)
        if hit is None:
            hit = self._eval(node, env)
            self.memo[key] = hit
        return hit

    def _value(self, term, env):
        if term not in env:
            raise ValidationError("unbound-variable", "no value for term %r" % term)
        return env[term]

    def _eval(self, node, env):
        if isinstance(node, Atomic):
            x = self._value(node.left, env)
            y = self._value(node.right, env)
            if node.rel == "in":
                return x in y
            if node.rel == "sub":
                return x <= y
            return x == y
        if isinstance(node, InClass):
            return self._value(node.member, env) in self._value(node.cls, env)
        if isinstance(node, PairInClass):
            a = self._value(node.first, env)
            b = self._value(node.second, env)
            pair = frozenset({frozenset({a}), frozenset({a, b})})
            return pair in self._value(node.cls, env)
        if isinstance(node, Not):
            return not self.eval(node.body, env)
        if isinstance(node, And):
            return self.eval(node.left, env) and self.eval(node.right, env)
        if isinstance(node, ExistsIn):
            bound = self._value(node.bound, env)
            for member in bound:
                sub = dict(env)
                sub[node.var] = member
                if self.eval(node.body, sub):
                    return True
            return False
        if isinstance(node, (ExistsSet, ExistsClass)):
            for witness in self.universe():
                sub = dict(env)
                sub[node.var] = witness
                if self.eval(node.body, sub):
                    return True
            return False
        raise ValidationError("formula", "not a formula node: %r" % (node,))


def _value_env(store, assignment, generic):
    env = {}
    for var, bound in (assignment or {}).items():
        env[var] = evaluate(store, plain(bound), generic)
    return env


def satisfies(system, store, phi, assignment, generic, qb=None, cap=None):
    """Truth of phi in the extension determined by the generic filter."""
    qb = qb if qb is not None else QuantifierBound()
    env = _value_env(store, assignment, generic)
    sat = Satisfier(system, store, generic, qb, cap=cap)
    result = sat.eval(phi, env)
    if is_bounded(phi):
        return result, True
    exact = False
    if not has_class_quantifier(phi):
        try:
            again = Satisfier(system, store, generic, qb.bump(), cap=cap)
            again.eval(phi, env)
            shared = sat.memo.keys() & again.memo.keys()
            exact = all(sat.memo[k] == again.memo[k] for k in shared)
        except ResourceLimitError:
            exact = False
    return result, exact


def truth_lemma_check(system, store, phi, assignment, qb=None, cap=None):
    """Both directions of the truth lemma over every generic filter.

    Forward: truth in the extension is equivalent to some member of the
    filter forcing the formula.  Backward: a condition forces the formula
    exactly when every generic through it satisfies it.
    """
    qb = qb if qb is not None else QuantifierBound()
    order = system.order
    mask, exact_forcing = forces_vector(system, store, phi, assignment, qb, cap=cap)
    generics = enumerate_generics(system, cap=cap)
    truths = {}
    exact = exact_forcing
    violations = []
    for g in generics:
        sat, exact_sat = satisfies(system, store, phi, assignment, g, qb, cap=cap)
        truths[g] = sat
        exact = exact and exact_sat
        forced_inside = any(mask >> order.index(p) & 1 for p in g)
        if sat != forced_inside:
            violations.append({
                "direction": "truth-vs-filter",
                "generic": sorted(g),
                "satisfies": sat,
                "some_member_forces": forced_inside,
            })
    for i, p in enumerate(order.conditions):
        through = [g for g in generics if p in g]
        forced = bool(mask >> i & 1)
        all_true = all(truths[g] for g in through)
        if forced != all_true:
            violations.append({
                "direction": "forces-vs-all-generics",
                "p": p,
                "forces": forced,
                "all_generics_satisfy": all_true,
            })
    return {
        "formula": to_text(phi),
        "generics": len(generics),
        "exact": exact,
        "violations": violations,
        "status": "ok" if not violations else "fail",
    }


def _pairs(names):
    for a in names:
        for b in names:
            yield a, b


def axiom_preservation_check(system, store, names, qb=None, cap=None,
                             comprehension_formulas=None):
    """Concrete axiom instances checked through the truth lemma.

    names: mapping label -> Name; the corpus of parameters.
    Returns a list of rows {axiom, instance, status, detail}.
    """
    from . import niceness

    qb = qb if qb is not None else QuantifierBound()
    order = system.order
    rows = []
    names = {k: plain(v) for k, v in names.items()}
    top = order.index("1")

    def report(axiom, instance, ok, detail=""):
        rows.append({"axiom": axiom, "instance": instance,
                     "status": "pass" if ok else "fail", "detail": detail})

    for (la, a), (lb, b) in _pairs(sorted(names.items())):
        phi = sugar_implies(And(Atomic("a", "sub", "b"), Atomic("b", "sub", "a")),
                            Atomic("a", "eq", "b"))
        check = truth_lemma_check(system, store, phi, {"a": a, "b": b}, qb, cap=cap)
        mask, _ = forces_vector(system, store, phi, {"a": a, "b": b}, qb, cap=cap)
        ok = check["status"] == "ok" and bool(mask >> top & 1)
        report("extensionality", "(%s,%s)" % (la, lb), ok,
               "" if ok else "violations=%r" % check["violations"])

    for (la, a), (lb, b) in _pairs(sorted(names.items())):
        pair_name = store.bullet([a, b])
        if not store.is_hereditarily_symmetric(pair_name):
            report("pairing", "(%s,%s)" % (la, lb), False, "pair name not symmetric")
            continue
        both_in = And(Atomic("a", "in", "c"), Atomic("b", "in", "c"))
        only = Not(ExistsIn("w", "c", Not(sugar_or(Atomic("w", "eq", "a"),
                                                   Atomic("w", "eq", "b")))))
        phi = And(both_in, only)
        binding = {"a": a, "b": b, "c": pair_name}
        check = truth_lemma_check(system, store, phi, binding, qb, cap=cap)
        mask, _ = forces_vector(system, store, phi, binding, qb, cap=cap)
        ok = check["status"] == "ok" and bool(mask >> top & 1)
        report("pairing", "(%s,%s)" % (la, lb), ok,
               "" if ok else "violations=%r" % check["violations"])

    for label, x in sorted(names.items()):
        inner = {grandchild for child, _ in x.entries
                 for grandchild, _ in child.entries}
        u_bullet = store.bullet(sorted(inner, key=store.sort_key))
        if not store.is_hereditarily_symmetric(u_bullet):
            report("weak-union", label, False, "union name not symmetric")
            continue
        phi = Not(ExistsIn("z", "x", ExistsIn("w", "z", Not(Atomic("w", "in", "u")))))
        binding = {"x": x, "u": u_bullet}
        check = truth_lemma_check(system, store, phi, binding, qb, cap=cap)
        mask, _ = forces_vector(system, store, phi, binding, qb, cap=cap)
        ok = check["status"] == "ok" and bool(mask >> top & 1)
        report("weak-union", label, ok,
               "" if ok else "violations=%r" % check["violations"])

    formulas = comprehension_formulas
    if formulas is None:
        formulas = [("has-member", parse("ex w in x . w = w"))]
    try:
        universe = store.enumerate_hs(qb.alpha, qb.b, cap=cap)
    except ResourceLimitError as exc:
        universe = None
        for flabel, _ in formulas:
            report("comprehension-name", flabel, False, "universe: %s" % exc)
    if universe is not None:
        below = order.below
        for flabel, phi in formulas:
            if tuple(sorted(free_vars(phi))) != ("x",):
                report("comprehension-name", flabel, False,
                       "expected exactly one free variable x")
                continue
            entries = []
            member_masks = {}
            for w in universe:
                wmask, _ = forces_vector(system, store, phi, {"x": w}, qb, cap=cap)
                member_masks[w.nid] = wmask
                for p in range(order.n):
                    if wmask >> p & 1:
                        entries.append((w, p))
            pi_name = store.intern(entries)
            if not store.is_hereditarily_symmetric(pi_name):
                report("comprehension-name", flabel, False,
                       "collected name not symmetric")
                continue
            pi_class = ClassName(pi_name)
            engine = AtomicEngine(system, store)
            bad = None
            for w in universe:
                got = class_membership_mask(system, engine, w, pi_class)
                if got != member_masks[w.nid]:
                    bad = store.serialize(w)
                    break
            report("comprehension-name", flabel, bad is None,
                   "" if bad is None else "biconditional fails at %s" % bad)

    rows.append({"axiom": "infinity", "instance": "-", "status": "skipped",
                 "detail": "the check name for omega exceeds desk scale"})

    generics = enumerate_generics(system, cap=cap)
    ok = True
    detail = ""
    for g in generics:
        for label, x in names.items():
            value = evaluate(store, x, g)
            if set_rank(value) > x.rank:
                ok = False
                detail = "rank grows at %s under %s" % (label, sorted(g))
    report("regularity", "corpus evaluations", ok,
           detail or "well-founded by construction; rank never grows")
    return rows
