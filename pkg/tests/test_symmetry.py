import pytest

import oracles
from forcelab.errors import ValidationError
from forcelab.order import Preorder
from forcelab.symmetry import (Automorphism, AutomorphismGroup, SubgroupFilter,
                               SymmetricSystem, validate_system)


def _sys_a():
    order = Preorder(("1", "p", "q"), [("p", "1"), ("q", "1")])
    tau = Automorphism("tau", (0, 2, 1))
    group = AutomorphismGroup.generated(3, [tau])
    return SymmetricSystem("A", order, group,
                           SubgroupFilter([frozenset(group.elements)]))


def test_generated_group_is_closed():
    group = AutomorphismGroup.generated(3, [Automorphism("tau", (0, 2, 1))])
    assert len(group) == 2
    for a in group:
        for b in group:
            assert group.compose(a, b) in group
        assert group.inverse(a) in group


def test_identity_present():
    group = AutomorphismGroup.generated(4, [])
    assert len(group) == 1
    ident = next(iter(group))
    assert ident.perm == tuple(range(4))


def test_apply_condition():
    system = _sys_a()
    tau = next(a for a in system.group if a.perm != (0, 1, 2))
    assert system.apply_condition(tau, "p") == "q"
    assert system.apply_condition(tau, "1") == "1"


def test_sym_of_condition_set():
    system = _sys_a()
    whole = system.sym_of_condition_set(("p", "q"))
    assert len(whole) == 2
    only_p = system.sym_of_condition_set(("p",))
    assert len(only_p) == 1


def test_symmetrically_dense(fx):
    system = fx.system
    order = system.order
    oracle = set(oracles.symmetrically_dense_sets(system))
    # spot-check a spread of subsets rather than all 2^n on the larger systems
    step = max(1, (1 << order.n) // 4096)
    for bits in range(0, 1 << order.n, step):
        tokens = [t for i, t in enumerate(order.conditions) if bits >> i & 1]
        want = frozenset(order.index(t) for t in tokens) in oracle
        assert system.is_symmetrically_dense(tokens) == want


def test_validate_system_passes(fx):
    rows = validate_system(fx.system)
    assert rows
    assert all(row["status"] == "pass" for row in rows)


def test_validate_flags_broken_automorphism():
    # swapping p and q while fixing pp breaks order preservation: pp <= p
    # but pp is not below q
    order = Preorder(("1", "p", "q", "pp"),
                     [("p", "1"), ("q", "1"), ("pp", "p")])
    swap = Automorphism("swap", (0, 2, 1, 3))
    group = AutomorphismGroup([Automorphism("id", (0, 1, 2, 3)), swap])
    system = SymmetricSystem("broken", order, group,
                             SubgroupFilter([frozenset(group.elements)]))
    rows = validate_system(system)
    failed = [r for r in rows if r["status"] == "fail"]
    assert failed
    assert any("order" in r["check"] for r in failed)
    with pytest.raises(ValidationError):
        system.assert_valid()


def test_filter_contains_requires_base_subgroup():
    system = _sys_a()
    full = frozenset(system.group.elements)
    assert system.in_filter(full)
    ident = next(a for a in system.group if a.perm == (0, 1, 2))
    assert not system.in_filter(frozenset({ident}))


def test_filter_normality_on_fixtures(fx):
    system = fx.system
    for entry in system.filter.base:
        for auto in system.group:
            conj = system.group.conjugate(auto, entry)
            assert system.in_filter(frozenset(conj))
