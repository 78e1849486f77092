import os
import subprocess
import sys

import pytest

import oracles
from forcelab import kernel


def _encode(fx, limit=None):
    names = fx.universe()
    if limit is not None:
        names = names[: limit]
    closed = fx.store.transitive_closure(names)
    return kernel.Encoded(fx.system.order, closed)


def _has_c():
    try:
        kernel.backend_module("c")
    except Exception:
        return False
    return True


def test_backend_outputs_identical(fx):
    if not _has_c():
        pytest.skip("compiled kernels not built")
    enc = _encode(fx)
    py = kernel.backend_module("py")
    cc = kernel.backend_module("c")
    a_py = py.atomic_tables(enc.m, enc.n, enc.leq, enc.ent_child,
                            enc.ent_cond, enc.ent_off, enc.ranks)
    a_c = cc.atomic_tables(enc.m, enc.n, enc.leq, enc.ent_child,
                           enc.ent_cond, enc.ent_off, enc.ranks)
    for left, right in zip(a_py, a_c):
        assert bytes(left) == bytes(right)
    w_py = py.witness_tables(enc.m, enc.n, enc.leq, enc.ent_child,
                             enc.ent_cond, enc.ent_off, enc.ranks)
    w_c = cc.witness_tables(enc.m, enc.n, enc.leq, enc.ent_child,
                            enc.ent_cond, enc.ent_off, enc.ranks)
    assert bytes(w_py[0]) == bytes(w_c[0])
    assert bytes(w_py[1]) == bytes(w_c[1])


def test_atomic_tables_match_definitional_recursion(fx):
    # the oracle is slow, so sample the universe instead of running all of it
    enc = _encode(fx, limit=16)
    tabs = kernel.atomic_tables(enc)
    order = fx.system.order
    memo = {}
    for x in enc.names:
        for y in enc.names:
            for rel in ("in", "sub", "eq"):
                for p in range(order.n):
                    want = oracles.atomic_forces(order, p, x, rel, y, memo)
                    assert tabs.value(rel, x, y, p) == want, (
                        fx.label, rel, x.nid, y.nid, p)


def test_witness_route_agrees_with_atomic_route(fx):
    # sampled here; the acceptance suite runs the full universe
    enc = _encode(fx, limit=32)
    tabs = kernel.witness_tables(enc)
    atoms = kernel.atomic_tables(enc)
    order = fx.system.order
    for x in enc.names:
        for y in enc.names:
            for p in range(order.n):
                assert tabs.value("in", x, y, p) == atoms.value("in", x, y, p)
                assert tabs.value("sub", x, y, p) == atoms.value("sub", x, y, p)


def test_tables_mask_agrees_with_value(fx):
    enc = _encode(fx, limit=12)
    tabs = kernel.atomic_tables(enc)
    for x in enc.names[: 6]:
        for y in enc.names[: 6]:
            m = tabs.mask("eq", x, y)
            for p in range(enc.n):
                assert bool(m >> p & 1) == tabs.value("eq", x, y, p)


def test_witness_sweeps_terminate(fx):
    enc = _encode(fx, limit=32)
    tabs = kernel.witness_tables(enc)
    assert tabs.sweeps >= 1


def test_env_selects_python_backend():
    env = dict(os.environ, FORCELAB_KERNEL="py")
    out = subprocess.run(
        [sys.executable, "-c", "from forcelab import kernel; print(kernel.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "py"


def test_env_rejects_unknown_backend():
    env = dict(os.environ, FORCELAB_KERNEL="fortran")
    out = subprocess.run(
        [sys.executable, "-c", "import forcelab"],
        capture_output=True, text=True, env=env)
    assert out.returncode != 0


def test_python_backend_runs_whole_stack():
    """End to end with the pure-Python kernels, proving the fallback works."""
    env = dict(os.environ, FORCELAB_KERNEL="py")
    code = (
        "import forcelab\n"
        "from forcelab import logic\n"
        "ws = forcelab.build('SYS-A')\n"
        "ok, exact = logic.forces(ws.system, ws.store, '1',\n"
        "    logic.parse('ex z . z in y'), {'y': ws.names['y']},\n"
        "    logic.QuantifierBound(2))\n"
        "assert ok and exact\n"
        "print('ok')\n")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, check=True)
    assert out.stdout.strip() == "ok"
