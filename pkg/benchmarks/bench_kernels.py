"""Timing comparison of the compiled and pure-Python kernels.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py
"""

import time

from forcelab import build
from forcelab.kernel import Encoded, atomic_tables, backend_module, witness_tables


def _universe(ws, alpha, b=None):
    names = ws.store.enumerate_hs(alpha, b)
    closure = ws.store.transitive_closure(names)
    return Encoded(ws.system.order, closure)


def _time(fn, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None or dt < best else best
    return best, out


def main():
    cases = []
    ws = build("SYS-A")
    cases.append(("SYS-A rank<=2", _universe(ws, 3)))
    ws = build("SYS-B", M=2, N=2)
    cases.append(("SYS-B(2,2) rank<=2 over {1,s0,s1}",
                  _universe(ws, 3, ("1", "s0", "s1"))))
    ws = build("SYS-C", A=1, B=1, C=2)
    cases.append(("SYS-C(1,1,2) rank<=1", _universe(ws, 2)))

    backends = []
    for label in ("py", "c"):
        try:
            backends.append((label, backend_module(label)))
        except Exception as exc:
            print("backend %s unavailable: %s" % (label, exc))

    header = "%-36s %-8s %12s %12s" % ("case", "backend", "atomic", "witness")
    print(header)
    print("-" * len(header))
    for case_label, enc in cases:
        reference = {}
        for label, impl in backends:
            t_atomic, tabs_a = _time(lambda: atomic_tables(enc, impl))
            t_witness, tabs_w = _time(lambda: witness_tables(enc, impl))
            key_a = tuple(bytes(tabs_a.by_rel[r]) for r in ("in", "sub", "eq"))
            key_w = tuple(bytes(tabs_w.by_rel[r]) for r in ("in", "sub"))
            if "a" in reference and (reference["a"] != key_a or reference["w"] != key_w):
                raise SystemExit("backend outputs differ on %s" % case_label)
            reference["a"], reference["w"] = key_a, key_w
            print("%-36s %-8s %10.1fms %10.1fms"
                  % (case_label, label, t_atomic * 1e3, t_witness * 1e3))
        case_label = ""


if __name__ == "__main__":
    main()
