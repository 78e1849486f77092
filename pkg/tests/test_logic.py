import pytest

import _corpus
from forcelab import logic
from forcelab.errors import FormulaSyntaxError, ValidationError


# ---------------------------------------------------------------- parsing


def test_atoms():
    assert logic.to_text(logic.parse("x in y")) == "(x in y)"
    assert logic.to_text(logic.parse("x sub y")) == "(x sub y)"
    assert logic.to_text(logic.parse("x = y")) == "(x = y)"


def test_class_atom_uses_membership_node():
    node = logic.parse("x in C")
    assert isinstance(node, logic.InClass)


def test_or_implies_iff_desugar_to_not_and():
    assert logic.to_text(logic.parse("x in y | y in z")) == (
        "(! ((! (x in y)) & (! (y in z))))")
    assert logic.to_text(logic.parse("x in y -> y in z")) == (
        "(! ((x in y) & (! (y in z))))")
    both = logic.parse("x in y <-> y in z")
    assert isinstance(both, logic.And)


def test_forall_desugars_to_not_exists_not():
    assert logic.to_text(logic.parse("all v . v in y")) == (
        "(! (ex v . (! (v in y))))")
    assert logic.to_text(logic.parse("all v in y . v = x")) == (
        "(! (ex v in y . (! (v = x))))")
    assert logic.to_text(logic.parse("ALL V . x in V")) == (
        "(! (EX V . (! (x in V))))")


def test_precedence():
    # & binds tighter than |, | tighter than ->, -> right-associative
    a = logic.parse("x in y & y in z | z in w")
    b = logic.parse("(x in y & y in z) | (z in w)")
    assert logic.to_text(a) == logic.to_text(b)
    c = logic.parse("x in y -> y in z -> z in w")
    d = logic.parse("x in y -> (y in z -> z in w)")
    assert logic.to_text(c) == logic.to_text(d)


def test_class_equality_desugars_with_fresh_variable():
    node = logic.parse("C = D")
    text = logic.to_text(node)
    assert "_q0" in text
    assert "ex _q0" in text


def test_quantifier_swallows_rest():
    node = logic.parse("ex v . v in y & v in z")
    assert isinstance(node, logic.ExistsSet)
    assert isinstance(node.body, logic.And)


def test_syntax_errors_carry_position():
    for bad in ("x in", "(x in y", "x inn y", "ex . x in y", "x in y &",
                "= y", "ex V . x in V", "EX v . v in y"):
        with pytest.raises(FormulaSyntaxError) as info:
            logic.parse(bad)
        assert info.value.pos >= 0


def test_free_vars():
    node = logic.parse("ex v . (v in y & x in C)")
    assert logic.free_vars(node) == frozenset({"x", "y", "C"})


def test_bounded_fragment_flags():
    assert logic.is_bounded(logic.parse("ex v in y . v = x"))
    assert not logic.is_bounded(logic.parse("ex v . v = x"))
    assert not logic.is_bounded(logic.parse("EX V . x in V"))
    assert logic.has_class_quantifier(logic.parse("EX V . x in V"))
    assert not logic.has_class_quantifier(logic.parse("ex v . x in C"))


def test_parse_params_limits_free_identifiers():
    node = logic.parse("x in y", params=("x", "y"))
    assert logic.to_text(node) == "(x in y)"
    with pytest.raises(FormulaSyntaxError):
        logic.parse("x in y", params=("x",))


# ---------------------------------------------------------------- forcing


def test_forces_pinned_examples(fixtures):
    fx = fixtures["SYS-A"]
    y = fx.ws.names["y"]
    ok, exact = logic.forces(fx.system, fx.store, "1",
                             logic.parse("ex z . z in y"), {"y": y}, fx.qb)
    assert ok and exact
    ok, exact = logic.forces(fx.system, fx.store, "p",
                             logic.parse("ex z in y . z = x"),
                             {"y": y, "x": fx.ws.names["zero"]}, fx.qb)
    assert ok and exact


def test_negation_is_strongest_refutation(fx):
    # p forces !phi exactly when no extension of p forces phi
    order = fx.system.order
    phi = fx.parse("x0 in y2")
    forcer = logic.Forcer(fx.system, fx.store, fx.qb)
    pos = forcer.eval(phi, fx.binding)
    neg = forcer.eval(logic.Not(phi), fx.binding)
    for p in range(order.n):
        assert bool(neg >> p & 1) == (order.below[p] & pos == 0)


def test_conjunction_is_intersection(fx):
    forcer = logic.Forcer(fx.system, fx.store, fx.qb)
    left = fx.parse("x0 in y2")
    right = fx.parse("x0 sub y2")
    both = forcer.eval(logic.And(left, right), fx.binding)
    assert both == forcer.eval(left, fx.binding) & forcer.eval(
        right, fx.binding)


def test_corpus_is_exact_everywhere(fx):
    for text in _corpus.FORMULAS:
        _, exact = logic.forces_vector(fx.system, fx.store, fx.parse(text),
                                       fx.binding, fx.qb)
        assert exact, (fx.label, text)


def test_memo_reuse_across_runs(fx):
    forcer = logic.Forcer(fx.system, fx.store, fx.qb)
    forcer.eval(fx.parse("x0 in y2"), fx.binding)
    before = len(forcer.memo)
    forcer.eval(fx.parse("x0 in y2"), fx.binding)
    assert len(forcer.memo) == before


def test_strict_assignment_check(fixtures):
    fx = fixtures["SYS-A"]
    xp = fx.ws.names["xp"]
    with pytest.raises(ValidationError):
        logic.forces(fx.system, fx.store, "1", logic.parse("x = x"),
                     {"x": xp}, fx.qb)
    mask, _ = logic.forces_vector(fx.system, fx.store, logic.parse("x = x"),
                                  {"x": xp}, fx.qb, plain=True)
    assert mask == (1 << fx.system.order.n) - 1


def test_unbounded_exists_approximate_when_budget_hit(fixtures):
    fx = fixtures["SYS-A0"]
    # full quantifier range on SYS-A0 cannot saturate within the cap;
    # the run must degrade to approximate instead of raising
    qb = logic.QuantifierBound(2)
    ok, exact = logic.forces(fx.system, fx.store, "1",
                             logic.parse("ex z . z in y"),
                             {"y": fx.ws.names["y"]}, qb)
    assert ok
    assert not exact


def test_class_membership_tracks_class_name(fixtures):
    fx = fixtures["SYS-A"]
    zero = fx.ws.names["zero"]
    ok, exact = logic.forces(fx.system, fx.store, "1", logic.parse("x in C"),
                             {"x": zero, "C": fx.ws.classnames["C0"]}, fx.qb)
    assert ok and exact
    ok, _ = logic.forces(fx.system, fx.store, "1", logic.parse("x in C"),
                         {"x": zero, "C": fx.ws.classnames["CE"]}, fx.qb)
    assert not ok


# ---------------------------------------------------------------- relativization


def test_relativize_shape():
    phi = logic.parse("ex v . v in y")
    rel = logic.relativize(phi)
    assert logic.to_text(rel) == "(ex v . ((v in HSb) & (v in y)))"


def test_relativize_rejects_class_quantifiers():
    with pytest.raises(ValidationError):
        logic.relativize(logic.parse("EX V . x in V"))


def test_relativization_check_on_corpus(fx):
    for text in _corpus.FORMULAS:
        report = logic.check_relativization(fx.system, fx.store,
                                            fx.parse(text), fx.binding, fx.qb)
        assert report["status"] == "ok", (fx.label, text, report)
        assert report["disagreements"] == []
