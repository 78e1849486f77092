"""Kernel backend selection and the flat encoding both backends share.

The two hot loops (the atomic-relation tables and the witness fixed
point) exist twice: a compiled extension and a pure-Python fallback with
identical signatures. Selection happens once at import; set
FORCELAB_KERNEL=py or =c to force a backend, anything else means auto.
"""

import os
from array import array

from .errors import ForcelabError


def _select():
    choice = (os.environ.get("FORCELAB_KERNEL") or "auto").strip().lower()
    if choice not in ("auto", "c", "py"):
        raise ForcelabError("FORCELAB_KERNEL must be auto, c or py (got %r)" % choice)
    if choice in ("auto", "c"):
        try:
            from . import _kernels_c as impl
            return impl, "c"
        except ImportError:
            if choice == "c":
                raise ForcelabError("compiled kernels requested but not built") from None
    from . import _kernels_py as impl
    return impl, "py"


_impl, BACKEND = _select()


def backend_module(name=None):
    """Return a kernel module by name ('c' or 'py'), default the active one."""
    if name is None:
        return _impl
    if name == "py":
        from . import _kernels_py
        return _kernels_py
    if name == "c":
        from . import _kernels_c
        return _kernels_c
    raise ForcelabError("unknown kernel backend %r" % name)


class Encoded:
    """Flat integer encoding of a preorder plus a topologically sorted name list."""

    __slots__ = ("order", "names", "local", "m", "n", "leq",
                 "ent_child", "ent_cond", "ent_off", "ranks")

    def __init__(self, order, names):
        self.order = order
        self.names = list(names)
        self.local = {x.nid: i for i, x in enumerate(self.names)}
        self.m = len(self.names)
        self.n = order.n
        n = order.n
        leq = bytearray(n * n)
        for p in range(n):
            row = order.below[p]
            for q in range(n):
                if row >> q & 1:
                    leq[q * n + p] = 1    # leq[q*n+p] <=> q <= p
        self.leq = bytes(leq)
        child, cond, off = array("i"), array("i"), array("i", [0])
        for x in self.names:
            for c, r in x.entries:
                child.append(self.local[c.nid])
                cond.append(r)
            off.append(len(child))
        self.ent_child, self.ent_cond, self.ent_off = child, cond, off
        self.ranks = array("i", (x.rank for x in self.names))


class Tables:
    """Per-condition truth tables of one relation family over an encoded universe.

    Layout: table[(x*m + y)*n + p] for local name indices x, y and
    condition index p.
    """

    def __init__(self, enc, by_rel):
        self.enc = enc
        self.by_rel = by_rel
        self._mask_cache = {}

    def value(self, rel, x, y, p):
        enc = self.enc
        xi, yi = enc.local[x.nid], enc.local[y.nid]
        return bool(self.by_rel[rel][(xi * enc.m + yi) * enc.n + p])

    def mask(self, rel, x, y):
        enc = self.enc
        key = (rel, x.nid, y.nid)
        hit = self._mask_cache.get(key)
        if hit is not None:
            return hit
        xi, yi = enc.local[x.nid], enc.local[y.nid]
        base = (xi * enc.m + yi) * enc.n
        tab = self.by_rel[rel]
        m = 0
        for p in range(enc.n):
            if tab[base + p]:
                m |= 1 << p
        self._mask_cache[key] = m
        return m


def atomic_tables(enc, impl=None):
    impl = impl or _impl
    tin, tsub, teq = impl.atomic_tables(
        enc.m, enc.n, enc.leq, enc.ent_child, enc.ent_cond, enc.ent_off, enc.ranks)
    return Tables(enc, {"in": tin, "sub": tsub, "eq": teq})


def witness_tables(enc, impl=None):
    impl = impl or _impl
    ein, esub, sweeps = impl.witness_tables(
        enc.m, enc.n, enc.leq, enc.ent_child, enc.ent_cond, enc.ent_off, enc.ranks)
    tabs = Tables(enc, {"in": ein, "sub": esub})
    tabs.sweeps = sweeps
    return tabs
