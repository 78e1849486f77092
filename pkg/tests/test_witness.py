import json

from forcelab.atomic import AtomicEngine
from forcelab.witness import WitnessEngine, check_equivalence


def test_equivalence_on_sample(fx):
    pool = fx.universe()[: 20]
    report = check_equivalence(fx.system, fx.store, pool)
    assert report["status"] == "pass"
    assert report["checked"] == 20 * 20 * 3 * fx.system.order.n
    assert report["disagreements"] == []


def test_wit_atomic_forces_is_dense_closure(fx):
    eng = WitnessEngine(fx.system, fx.store)
    order = fx.system.order
    pool = fx.universe()[: 12]
    for x in pool:
        for y in pool[: 6]:
            raw = eng.vector(x, "in", y)
            closed = order.dense_mask(raw)
            for p in order.conditions:
                i = order.index(p)
                assert eng.wit_atomic_forces(p, x, "in", y) == bool(
                    closed >> i & 1)
                assert eng.wit_forces(p, x, "in", y) == bool(raw >> i & 1)


def test_witness_implies_forcing(fx):
    # the raw witness relation is a subset of the closed forcing relation
    wits = WitnessEngine(fx.system, fx.store)
    atoms = AtomicEngine(fx.system, fx.store)
    pool = fx.universe()[: 16]
    for x in pool:
        for y in pool[: 8]:
            for rel in ("in", "sub"):
                assert wits.vector(x, rel, y) & ~atoms.vector(x, rel, y) == 0


def test_certificate_validates(fixtures):
    fx = fixtures["SYS-A"]
    eng = WitnessEngine(fx.system, fx.store)
    names = fx.ws.names
    cert = eng.certificate("p", names["zero"], "in", names["y"])
    ok, why = cert.validate(fx.system)
    assert ok, why
    assert cert.roots


def test_certificate_round_trips_through_json(fixtures):
    fx = fixtures["SYS-A"]
    eng = WitnessEngine(fx.system, fx.store)
    names = fx.ws.names
    cert = eng.certificate("1", names["y"], "in", names["ybul"])
    report = cert.to_report(fx.store)
    blob = json.dumps(report, sort_keys=True)
    assert json.loads(blob) == report


def test_certificate_merge(fixtures):
    fx = fixtures["SYS-A"]
    eng = WitnessEngine(fx.system, fx.store)
    names = fx.ws.names
    a = eng.certificate("p", names["zero"], "in", names["y"])
    b = eng.certificate("1", names["y"], "in", names["ybul"])
    merged = a.merge(b)
    ok, why = merged.validate(fx.system)
    assert ok, why
    assert set(merged.roots) == set(a.roots) | set(b.roots)
    assert merged.tuples >= a.tuples | b.tuples


def test_certificates_on_every_fixture(fx):
    eng = WitnessEngine(fx.system, fx.store)
    order = fx.system.order
    pool = fx.universe()[: 10]
    built = 0
    for x in pool:
        for y in pool:
            m = eng.vector(x, "in", y)
            for p in order.conditions:
                if m >> order.index(p) & 1:
                    cert = eng.certificate(p, x, "in", y)
                    ok, why = cert.validate(fx.system)
                    assert ok, why
                    built += 1
                    break
    assert built > 0
