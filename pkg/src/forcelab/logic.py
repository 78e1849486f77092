"""Formula ASTs, the concrete-syntax parser, and the forcing evaluator.

Core connectives are negation, conjunction, and the existential quantifiers;
everything else (or, implication, iff, universal quantifiers, class equality)
is rewritten into that core at parse time, so algebraic laws about the sugar
are testable consequences rather than definitions.

Quantifier scope: unbounded set and class quantifiers range over a finite
universe controlled by a QuantifierBound (rank cutoff alpha, condition set b).
The answer carries an exactness flag: True when the formula only uses bounded
quantifiers, or when re-running with alpha+1 changes no sub-result.  Class
quantifiers are never exact.
"""

import re
from dataclasses import dataclass
from functools import lru_cache

from .atomic import AtomicEngine
from .errors import FormulaSyntaxError, ResourceLimitError, ValidationError
from .names import ClassName, Name, plain


@dataclass(frozen=True)
class Atomic:
    left: str
    rel: str
    right: str


@dataclass(frozen=True)
class InClass:
    member: str
    cls: str


@dataclass(frozen=True)
class PairInClass:
    """Kuratowski pair of two set terms tested for class membership.

    Built programmatically (no concrete syntax); keeps collection statements
    inside the bounded fragment.
    """

    first: str
    second: str
    cls: str


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class ExistsSet:
    var: str
    body: object


@dataclass(frozen=True)
class ExistsIn:
    var: str
    bound: str
    body: object


@dataclass(frozen=True)
class ExistsClass:
    var: str
    body: object


@dataclass(frozen=True)
class QuantifierBound:
    alpha: int = 2
    b: tuple = None

    def bump(self):
        return QuantifierBound(self.alpha + 1, self.b)


def is_class_term(term):
    return term[:1].isupper()


@lru_cache(maxsize=None)
def to_text(node):
    """Canonical fully parenthesized rendering; doubles as the AST identity."""
    if isinstance(node, Atomic):
        rel = {"in": "in", "sub": "sub", "eq": "="}[node.rel]
        return "(%s %s %s)" % (node.left, rel, node.right)
    if isinstance(node, InClass):
        return "(%s in %s)" % (node.member, node.cls)
    if isinstance(node, PairInClass):
        return "(pair(%s,%s) in %s)" % (node.first, node.second, node.cls)
    if isinstance(node, Not):
        return "(! %s)" % to_text(node.body)
    if isinstance(node, And):
        return "(%s & %s)" % (to_text(node.left), to_text(node.right))
    if isinstance(node, ExistsSet):
        return "(ex %s . %s)" % (node.var, to_text(node.body))
    if isinstance(node, ExistsIn):
        return "(ex %s in %s . %s)" % (node.var, node.bound, to_text(node.body))
    if isinstance(node, ExistsClass):
        return "(EX %s . %s)" % (node.var, to_text(node.body))
    raise ValidationError("formula", "not a formula node: %r" % (node,))


@lru_cache(maxsize=None)
def free_vars(node):
    if isinstance(node, Atomic):
        return frozenset((node.left, node.right))
    if isinstance(node, InClass):
        return frozenset((node.member, node.cls))
    if isinstance(node, PairInClass):
        return frozenset((node.first, node.second, node.cls))
    if isinstance(node, Not):
        return free_vars(node.body)
    if isinstance(node, And):
        return free_vars(node.left) | free_vars(node.right)
    if isinstance(node, ExistsSet) or isinstance(node, ExistsClass):
        return free_vars(node.body) - {node.var}
    if isinstance(node, ExistsIn):
        return (free_vars(node.body) - {node.var}) | {node.bound}
    raise ValidationError("formula", "not a formula node: %r" % (node,))


@lru_cache(maxsize=None)
def is_bounded(node):
    """True when no unbounded (set or class) quantifier occurs."""
    if isinstance(node, (Atomic, InClass, PairInClass)):
        return True
    if isinstance(node, Not):
        return is_bounded(node.body)
    if isinstance(node, And):
        return is_bounded(node.left) and is_bounded(node.right)
    if isinstance(node, ExistsIn):
        return is_bounded(node.body)
    return False


@lru_cache(maxsize=None)
def has_class_quantifier(node):
    if isinstance(node, ExistsClass):
        return True
    if isinstance(node, Not):
        return has_class_quantifier(node.body)
    if isinstance(node, And):
        return has_class_quantifier(node.left) or has_class_quantifier(node.right)
    if isinstance(node, (ExistsSet, ExistsIn)):
        return has_class_quantifier(node.body)
    return False


def sugar_or(a, b):
    return Not(And(Not(a), Not(b)))


def sugar_implies(a, b):
    return Not(And(a, Not(b)))


def sugar_iff(a, b):
    return And(sugar_implies(a, b), sugar_implies(b, a))


KEYWORDS = {"in", "sub", "ex", "all", "EX", "ALL"}

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|<->|->|[().!&|=]|\S")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        tok = m.group(0)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*|<->|->|[().!&|=]", tok):
            raise FormulaSyntaxError(pos, "unexpected character %r" % tok)
        out.append((tok, pos))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0
        used = {t for t, _ in tokens}
        self._fresh = (v for k in range(10000) for v in ("_q%d" % k,) if v not in used)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else \
            (self.tokens[-1][1] + len(self.tokens[-1][0]) if self.tokens else 0)

    def take(self, expected=None):
        if self.i >= len(self.tokens):
            raise FormulaSyntaxError(self.pos(), "unexpected end of formula"
                                     + ("" if expected is None else ", wanted %r" % expected))
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(pos, "expected %r, found %r" % (expected, tok))
        self.i += 1
        return tok, pos

    def identifier(self, role):
        tok, pos = self.take()
        if tok in KEYWORDS or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise FormulaSyntaxError(pos, "expected %s, found %r" % (role, tok))
        return tok, pos

    def formula(self):
        left = self.implies()
        while self.peek() == "<->":
            self.take()
            left = sugar_iff(left, self.implies())
        return left

    def implies(self):
        left = self.disjunct()
        if self.peek() == "->":
            self.take()
            return sugar_implies(left, self.implies())
        return left

    def disjunct(self):
        left = self.conjunct()
        while self.peek() == "|":
            self.take()
            left = sugar_or(left, self.conjunct())
        return left

    def conjunct(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            out = self.formula()
            self.take(")")
            return out
        if tok in ("ex", "all"):
            return self.set_quantifier(tok)
        if tok in ("EX", "ALL"):
            return self.class_quantifier(tok)
        return self.atom()

    def set_quantifier(self, kw):
        self.take()
        var, pos = self.identifier("a set variable")
        if is_class_term(var):
            raise FormulaSyntaxError(pos, "%r quantifies set variables; %r is a class variable" % (kw, var))
        bound = None
        if self.peek() == "in":
            self.take()
            bound, bpos = self.identifier("a set name")
            if is_class_term(bound):
                raise FormulaSyntaxError(bpos, "bounded quantifier needs a set name, not class %r" % bound)
        self.take(".")
        body = self.formula()
        if bound is None:
            node = ExistsSet(var, body if kw == "ex" else Not(body))
        else:
            node = ExistsIn(var, bound, body if kw == "ex" else Not(body))
        return node if kw == "ex" else Not(node)

    def class_quantifier(self, kw):
        self.take()
        var, pos = self.identifier("a class variable")
        if not is_class_term(var):
            raise FormulaSyntaxError(pos, "%r quantifies class variables; %r is a set variable" % (kw, var))
        self.take(".")
        body = self.formula()
        if kw == "EX":
            return ExistsClass(var, body)
        return Not(ExistsClass(var, Not(body)))

    def atom(self):
        left, lpos = self.identifier("a term")
        rel, rpos = self.take()
        if rel not in ("in", "sub", "="):
            raise FormulaSyntaxError(rpos, "expected 'in', 'sub' or '=', found %r" % rel)
        right, _ = self.identifier("a term")
        lc, rc = is_class_term(left), is_class_term(right)
        if rel == "in":
            if lc:
                raise FormulaSyntaxError(lpos, "a class cannot be a member")
            return InClass(left, right) if rc else Atomic(left, "in", right)
        if rel == "sub":
            if lc or rc:
                raise FormulaSyntaxError(lpos, "'sub' relates set terms")
            return Atomic(left, "sub", right)
        if lc != rc:
            raise FormulaSyntaxError(lpos, "'=' needs terms of the same sort")
        if not lc:
            return Atomic(left, "eq", right)
        # class equality unfolds to membership agreement over a fresh set variable
        u = next(self._fresh)
        return Not(ExistsSet(u, Not(sugar_iff(InClass(u, left), InClass(u, right)))))


def parse(text, params=None):
    """Parse concrete syntax into the core AST.

    params, when given, lists the identifiers allowed to occur free; anything
    else unbound raises.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError(0, "empty formula")
    parser = _Parser(tokens)
    node = parser.formula()
    if parser.i < len(parser.tokens):
        raise FormulaSyntaxError(parser.pos(), "trailing input %r" % parser.peek())
    if params is not None:
        stray = sorted(free_vars(node) - set(params))
        if stray:
            raise FormulaSyntaxError(0, "unbound variables: %s" % ", ".join(stray))
    return node


class Forcer:
    """Mask evaluator for one QuantifierBound.

    eval(node, env) returns the bitmask of conditions forcing the formula
    under env.  All masks are downward closed by construction.
    """

    def __init__(self, system, store, qb, plain=False, cap=None, engine=None):
        self.system = system
        self.store = store
        self.order = system.order
        self.qb = qb
        self.plain = plain
        self.cap = cap
        self.engine = engine if engine is not None else AtomicEngine(
            system, store, strict=not plain)
        self.memo = {}
        self.saw_class_quantifier = False
        self._universe = None

    def universe(self):
        if self._universe is None:
            if self.plain:
                names = self.store.enumerate_all(self.qb.alpha, self.qb.b, cap=self.cap)
            else:
                names = self.store.enumerate_hs(self.qb.alpha, self.qb.b, cap=self.cap)
            self._universe = list(names)
        return self._universe

    def _resolve_set(self, term, env):
        value = env.get(term)
        if value is None:
            raise ValidationError("unbound-variable", "no binding for set term %r" % term)
        if isinstance(value, ClassName):
            raise ValidationError("sort-mismatch", "%r is bound to a class name" % term)
        if not isinstance(value, Name):
            raise ValidationError("binding", "%r is bound to %r, not a name" % (term, value))
        return value

    def _resolve_class(self, term, env):
        value = env.get(term)
        if value is None:
            raise ValidationError("unbound-variable", "no binding for class term %r" % term)
        if not isinstance(value, ClassName):
            raise ValidationError("sort-mismatch", "%r must be bound to a class name" % term)
        return value

    def _fingerprint(self, node, env):
        parts = []
        for var in sorted(free_vars(node)):
            value = env.get(var)
            if isinstance(value, ClassName):
                parts.append((var, "c", value.name.nid))
            elif isinstance(value, Name):
                parts.append((var, "n", value.nid))
            else:
                parts.append((var, "?", None))
        return tuple(parts)

    def eval(self, node, env):
        key = (to_text(node), self._fingerprint(node, env))
        hit = self.memo.get(key)
        if hit is None:
            hit = self._eval(node, env)
            self.memo[key] = hit
        return hit

    def _member_mask(self, x, cls):
        """Conditions forcing x to be a member of the class name."""
        below = self.order.below
        gathered = 0
        for child, cond in cls.name.entries:
            gathered |= below[cond] & self.engine.vector(x, "eq", child)
        return self.order.dense_mask(gathered)

    def _eval(self, node, env):
        order = self.order
        if isinstance(node, Atomic):
            x = self._resolve_set(node.left, env)
            y = self._resolve_set(node.right, env)
            return self.engine.vector(x, node.rel, y)
        if isinstance(node, InClass):
            x = self._resolve_set(node.member, env)
            return self._member_mask(x, self._resolve_class(node.cls, env))
        if isinstance(node, PairInClass):
            a = self._resolve_set(node.first, env)
            b = self._resolve_set(node.second, env)
            pair = self.store.kpair(a, b)
            return self._member_mask(pair, self._resolve_class(node.cls, env))
        if isinstance(node, Not):
            inner = self.eval(node.body, env)
            full = (1 << order.n) - 1
            out = 0
            for p in range(order.n):
                if order.below[p] & inner == 0:
                    out |= 1 << p
            return out & full
        if isinstance(node, And):
            return self.eval(node.left, env) & self.eval(node.right, env)
        if isinstance(node, ExistsIn):
            bound = self._resolve_set(node.bound, env)
            gathered = 0
            for child, cond in bound.entries:
                sub = dict(env)
                sub[node.var] = child
                gathered |= order.below[cond] & self.eval(node.body, sub)
            return order.dense_mask(gathered)
        if isinstance(node, ExistsSet):
            gathered = 0
            for witness in self.universe():
                sub = dict(env)
                sub[node.var] = witness
                gathered |= self.eval(node.body, sub)
            return order.dense_mask(gathered)
        if isinstance(node, ExistsClass):
            self.saw_class_quantifier = True
            gathered = 0
            for witness in self.universe():
                sub = dict(env)
                sub[node.var] = ClassName(witness)
                gathered |= self.eval(node.body, sub)
            return order.dense_mask(gathered)
        raise ValidationError("formula", "not a formula node: %r" % (node,))


def _admit_assignment(store, assignment):
    for var, value in assignment.items():
        inner = plain(value)
        if not store.is_hereditarily_symmetric(inner):
            raise ValidationError(
                "assignment", "binding for %r is not hereditarily symmetric" % var)


def forces_vector(system, store, phi, assignment, qb=None, plain=False,
                  cap=None, engine=None):
    """Bitmask of conditions forcing phi, plus the exactness flag."""
    qb = qb if qb is not None else QuantifierBound()
    assignment = dict(assignment or {})
    if not plain:
        _admit_assignment(store, assignment)
    forcer = Forcer(system, store, qb, plain=plain, cap=cap, engine=engine)
    mask = forcer.eval(phi, assignment)
    if is_bounded(phi):
        return mask, True
    exact = False
    if not has_class_quantifier(phi):
        try:
            again = Forcer(system, store, qb.bump(), plain=plain, cap=cap,
                           engine=forcer.engine)
            again.eval(phi, assignment)
            shared = forcer.memo.keys() & again.memo.keys()
            exact = all(forcer.memo[k] == again.memo[k] for k in shared)
        except ResourceLimitError:
            exact = False
    return mask, exact


def forces(system, store, p, phi, assignment, qb=None, plain=False,
           cap=None, engine=None):
    mask, exact = forces_vector(system, store, phi, assignment, qb,
                                plain=plain, cap=cap, engine=engine)
    return bool(mask >> system.order.index(p) & 1), exact


def class_membership_mask(system, engine, x, cls):
    """Conditions forcing x in cls, straight off the class entries."""
    below = system.order.below
    gathered = 0
    for child, cond in plain(cls).entries:
        gathered |= below[cond] & engine.vector(x, "eq", child)
    return system.order.dense_mask(gathered)


def relativize(phi, hs_var="HSb"):
    """Restrict every set quantifier to the class bound to hs_var."""
    if isinstance(phi, (Atomic, InClass, PairInClass)):
        return phi
    if isinstance(phi, Not):
        return Not(relativize(phi.body, hs_var))
    if isinstance(phi, And):
        return And(relativize(phi.left, hs_var), relativize(phi.right, hs_var))
    if isinstance(phi, ExistsSet):
        return ExistsSet(phi.var, And(InClass(phi.var, hs_var),
                                      relativize(phi.body, hs_var)))
    if isinstance(phi, ExistsIn):
        return ExistsIn(phi.var, phi.bound, And(InClass(phi.var, hs_var),
                                                relativize(phi.body, hs_var)))
    raise ValidationError("relativize", "first-order formulas only")


def check_relativization(system, store, phi, assignment, qb=None, cap=None):
    """Compare strict forcing of phi against plain forcing of its
    relativization to the bounded symmetric universe, at every condition."""
    qb = qb if qb is not None else QuantifierBound()
    assignment = dict(assignment or {})
    hs_var = "HSb"
    taken = free_vars(phi) | set(assignment)
    while hs_var in taken:
        hs_var += "_"
    strict_mask, strict_exact = forces_vector(system, store, phi, assignment,
                                              qb, cap=cap)
    universe = store.enumerate_hs(qb.alpha, qb.b, cap=cap)
    rel_assignment = dict(assignment)
    rel_assignment[hs_var] = ClassName(store.bullet(universe))
    rel_mask, rel_exact = forces_vector(system, store, relativize(phi, hs_var),
                                        rel_assignment, qb, plain=True, cap=cap)
    disagreements = [c for i, c in enumerate(system.order.conditions)
                     if (strict_mask >> i & 1) != (rel_mask >> i & 1)]
    return {
        "formula": to_text(phi),
        "conditions": system.order.n,
        "universe": len(universe),
        "exact_strict": strict_exact,
        "exact_plain": rel_exact,
        "disagreements": disagreements,
        "status": "ok" if not disagreements else "fail",
    }
