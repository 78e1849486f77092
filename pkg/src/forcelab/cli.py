"""Command-line front end.

Every command accepts --system <file> or --family <id> [--param k=v ...],
prints a deterministic report (or JSON lines with --machine), and exits
0 on pass/true, 1 on fail/false, 2 on any error.
"""

import argparse
import json
import sys

from . import extension, families, logic, niceness, sysfile
from .atomic import AtomicEngine
from .errors import ForcelabError
from .names import ClassName, plain
from .symmetry import validate_system
from .witness import WitnessEngine


def _add_source(sub):
    sub.add_argument("--system", help="system file to load")
    sub.add_argument("--family", help="built-in family id (%s)" % ", ".join(families.FAMILIES))
    sub.add_argument("--param", action="append", default=[],
                     metavar="K=V", help="family parameter, repeatable")
    sub.add_argument("--machine", action="store_true",
                     help="emit one JSON report object per line")
    sub.add_argument("--resource-cap", type=int, default=None,
                     help="override the enumeration cap (also FORCELAB_CAP)")


def _add_qb(sub):
    sub.add_argument("--cutoff", type=int, default=2,
                     help="quantifier rank cutoff (default 2)")
    sub.add_argument("--bound", default=None,
                     help="comma-separated conditions bounding quantifier universes")


def _workspace(args):
    if args.system and args.family:
        raise ForcelabError("--system and --family are mutually exclusive")
    if args.system:
        with open(args.system, "r", encoding="utf-8") as fh:
            return sysfile.loads(fh.read())
    if args.family:
        params = {}
        for item in args.param:
            key, sep, value = item.partition("=")
            if not sep:
                raise ForcelabError("--param expects K=V, got %r" % item)
            params[key] = int(value)
        if args.resource_cap is not None:
            params["cap"] = args.resource_cap
        return families.build(args.family, **params)
    raise ForcelabError("one of --system or --family is required")


def _qb(args, ws):
    b = None
    if args.bound:
        b = tuple(ws.resolve_condition(t) for t in args.bound.split(",") if t)
    return logic.QuantifierBound(args.cutoff, b)


def _bindings(args, ws):
    out = {}
    for item in args.bind:
        var, sep, label = item.partition("=")
        if not sep:
            raise ForcelabError("--bind expects var=name-id, got %r" % item)
        out[var] = ws.resolve_name(label)
    return out


def _dense_family(args, ws):
    fam = ws.families.get(args.family_dense)
    if fam is None:
        raise ForcelabError("no dense family %r on this system (have: %s)"
                            % (args.family_dense, ", ".join(sorted(ws.families)) or "none"))
    return fam


class Report:
    def __init__(self, machine):
        self.machine = machine
        self.lines = []
        self.objects = []

    def add(self, text, obj):
        self.lines.append(text)
        self.objects.append(obj)

    def flush(self):
        if self.machine:
            for obj in self.objects:
                print(json.dumps(obj, sort_keys=True))
        else:
            for line in self.lines:
                print(line)


def cmd_check_system(args):
    ws = _workspace(args)
    rows = validate_system(ws.system)
    rep = Report(args.machine)
    bad = 0
    for row in rows:
        ok = row["status"] == "pass"
        bad += 0 if ok else 1
        rep.add("%s %s%s" % ("pass" if ok else "FAIL", row["check"],
                             "" if ok else ": " + row["detail"]), row)
    rep.flush()
    return 0 if not bad else 1


def _atomic_args(sub):
    sub.add_argument("--p", required=True)
    sub.add_argument("--x", required=True)
    sub.add_argument("--rel", required=True, choices=("in", "sub", "eq", "="))
    sub.add_argument("--y", required=True)
    sub.add_argument("--plain", action="store_true",
                     help="drop the hereditary-symmetry admission check")


def _atomic_query(args, ws):
    rel = "eq" if args.rel == "=" else args.rel
    p = ws.resolve_condition(args.p)
    x = plain(ws.resolve_name(args.x))
    y = plain(ws.resolve_name(args.y))
    return p, x, rel, y


def cmd_atomic(args):
    ws = _workspace(args)
    p, x, rel, y = _atomic_query(args, ws)
    engine = AtomicEngine(ws.system, ws.store, strict=not args.plain)
    result = engine.forces(p, x, rel, y)
    rep = Report(args.machine)
    rep.add("true" if result else "false",
            {"command": "atomic", "p": p, "rel": rel, "result": result})
    rep.flush()
    return 0 if result else 1


def cmd_witness(args):
    ws = _workspace(args)
    p, x, rel, y = _atomic_query(args, ws)
    engine = WitnessEngine(ws.system, ws.store, strict=not args.plain)
    result = engine.wit_atomic_forces(p, x, rel, y)
    rep = Report(args.machine)
    rep.add("true" if result else "false",
            {"command": "witness", "p": p, "rel": rel, "result": result})
    if args.emit_certificate:
        cert = engine.certificate(p, x, rel, y)
        payload = json.dumps(cert.to_report(ws.store), sort_keys=True, indent=2)
        if args.emit_certificate == "-":
            rep.add(payload, {"certificate": cert.to_report(ws.store)})
        else:
            with open(args.emit_certificate, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            rep.add("certificate written to %s" % args.emit_certificate,
                    {"certificate_path": args.emit_certificate})
    rep.flush()
    return 0 if result else 1


def cmd_forces(args):
    ws = _workspace(args)
    phi = logic.parse(args.phi)
    binding = _bindings(args, ws)
    qb = _qb(args, ws)
    p = ws.resolve_condition(args.p)
    result, exact = logic.forces(ws.system, ws.store, p, phi, binding, qb,
                                 plain=args.plain, cap=args.resource_cap)
    rep = Report(args.machine)
    rep.add("%s (%s)" % ("true" if result else "false",
                         "exact" if exact else "approximate"),
            {"command": "forces", "p": p, "formula": logic.to_text(phi),
             "result": result, "exact": exact})
    rep.flush()
    return 0 if result else 1


def cmd_generics(args):
    ws = _workspace(args)
    gens = extension.enumerate_generics(ws.system, cap=args.resource_cap)
    rep = Report(args.machine)
    for g in gens:
        ordered = [c for c in ws.system.order.conditions if c in g]
        rep.add(" ".join(ordered), {"generic": ordered})
    rep.flush()
    return 0


def cmd_truth_check(args):
    ws = _workspace(args)
    phi = logic.parse(args.phi)
    binding = _bindings(args, ws)
    qb = _qb(args, ws)
    report = extension.truth_lemma_check(ws.system, ws.store, phi, binding, qb,
                                         cap=args.resource_cap)
    rep = Report(args.machine)
    ok = report["status"] == "ok"
    flag = "exact" if report["exact"] else "approximate"
    if ok:
        rep.add("PASS (%d generics, %s)" % (report["generics"], flag), report)
    else:
        rep.add("FAIL (%d generics, %s): %d violations"
                % (report["generics"], flag, len(report["violations"])), report)
        for v in report["violations"]:
            rep.add("  %s" % json.dumps(v, sort_keys=True), v)
    rep.flush()
    return 0 if ok else 1


def cmd_axioms(args):
    ws = _workspace(args)
    qb = _qb(args, ws)
    # plain helper names (used by atomic --plain demos) are not admissible here
    names = {label: nm for label, nm in ws.names.items()
             if ws.store.is_hereditarily_symmetric(nm)}
    rows = extension.axiom_preservation_check(ws.system, ws.store, names, qb,
                                              cap=args.resource_cap)
    rep = Report(args.machine)
    failed = 0
    for row in rows:
        failed += 1 if row["status"] == "fail" else 0
        text = "%s %s %s" % (row["status"], row["axiom"], row["instance"])
        if row["detail"]:
            text += " [%s]" % row["detail"]
        rep.add(text, row)
    rep.flush()
    return 0 if not failed else 1


def cmd_pretame(args):
    ws = _workspace(args)
    fam = _dense_family(args, ws)
    p = ws.resolve_condition(args.p)
    report = niceness.pretameness_witness(ws.system, ws.store, fam, p, args.cap)
    rep = Report(args.machine)
    if report["status"] == "witness":
        rep.add("witness q=%s max-size=%d (cap %d)"
                % (report["q"], report["max_size"], args.cap), report)
    else:
        rep.add("refusal best=%d (cap %d)" % (report["best"], args.cap), report)
    if not args.machine:
        for row in report["per_q"]:
            rep.add("  q=%s max-min-size=%d" % (row["q"], row["max_min_size"]),
                    row)
    rep.flush()
    return 0 if report["status"] == "witness" else 1


def cmd_stratified(args):
    ws = _workspace(args)
    report = niceness.stratification_check(ws.system, sample_cap=args.resource_cap)
    rep = Report(args.machine)
    worst = report["worst"]["expansion"] if report["worst"] else 0
    rep.add("%s checked=%d exhaustive=%s worst-expansion=%d"
            % (report["status"], report["checked"],
               "yes" if report["exhaustive"] else "no", worst),
            report)
    rep.flush()
    return 0 if report["status"] == "pass" else 1


def cmd_sep_witness(args):
    ws = _workspace(args)
    z = plain(ws.resolve_name(args.z))
    gamma = ws.resolve_name(args.gamma)
    if not isinstance(gamma, ClassName):
        gamma = ClassName(plain(gamma))
    p = ws.resolve_condition(args.p)
    qb = _qb(args, ws)
    b = None
    if args.b:
        b = [ws.resolve_condition(t) for t in args.b.split(",") if t]
    report = niceness.separation_witness(ws.system, ws.store, z, gamma, p,
                                         qb=qb, b=b)
    rep = Report(args.machine)
    rep.add("%s u=%s forced=%s exact=%s" % (report["status"], report["u"],
                                            report["forced"], report["exact"]),
            {k: v for k, v in report.items() if k != "name"})
    rep.flush()
    return 0 if report["status"] == "witness" else 1


def cmd_coll_witness(args):
    ws = _workspace(args)
    z = plain(ws.resolve_name(args.z))
    gamma = ws.resolve_name(args.gamma)
    if not isinstance(gamma, ClassName):
        gamma = ClassName(plain(gamma))
    p = ws.resolve_condition(args.p)
    qb = _qb(args, ws)
    report = niceness.collection_witness(ws.system, ws.store, z, gamma, p,
                                         qb=qb, alpha_max=args.alpha_max)
    rep = Report(args.machine)
    if report["status"] == "witness":
        rep.add("witness alpha=%d universe=%d" % (report["alpha"],
                                                  report["universe_size"]),
                report)
    else:
        rep.add("refusal: %s" % report["detail"], report)
    rep.flush()
    return 0 if report["status"] == "witness" else 1


def cmd_orbit(args):
    ws = _workspace(args)
    e = [int(t) for t in args.e.split(",") if t != ""] if args.e else []
    size = families.orbit_size(ws, args.q, e)
    rep = Report(args.machine)
    rep.add(str(size), {"command": "orbit", "q": args.q, "e": sorted(e),
                        "size": size})
    rep.flush()
    return 0


def cmd_hs(args):
    ws = _workspace(args)
    qb = _qb(args, ws)
    if args.plain:
        universe = ws.store.enumerate_all(qb.alpha, qb.b, cap=args.resource_cap)
    else:
        universe = ws.store.enumerate_hs(qb.alpha, qb.b, cap=args.resource_cap)
    rep = Report(args.machine)
    rep.add("%d names" % len(universe), {"count": len(universe)})
    for name in universe:
        rep.add(ws.store.serialize(name), {"name": ws.store.serialize(name),
                                           "rank": name.rank})
    rep.flush()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="forcelab",
        description="finite symmetric systems, names, and forcing checks")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check-system", help="run the structural validators")
    _add_source(sub)
    sub.set_defaults(func=cmd_check_system)

    sub = subs.add_parser("atomic", help="one atomic forcing query")
    _add_source(sub)
    _atomic_args(sub)
    sub.set_defaults(func=cmd_atomic)

    sub = subs.add_parser("witness", help="witness-relation route for an atomic query")
    _add_source(sub)
    _atomic_args(sub)
    sub.add_argument("--emit-certificate", metavar="PATH",
                     help="write the supporting certificate (- for stdout)")
    sub.set_defaults(func=cmd_witness)

    sub = subs.add_parser("forces", help="evaluate a formula at a condition")
    _add_source(sub)
    _add_qb(sub)
    sub.add_argument("--p", required=True)
    sub.add_argument("--phi", required=True)
    sub.add_argument("--bind", action="append", default=[], metavar="VAR=NAME")
    sub.add_argument("--plain", action="store_true")
    sub.set_defaults(func=cmd_forces)

    sub = subs.add_parser("generics", help="list the generic filters")
    _add_source(sub)
    sub.set_defaults(func=cmd_generics)

    sub = subs.add_parser("truth-check", help="truth lemma over every generic")
    _add_source(sub)
    _add_qb(sub)
    sub.add_argument("--phi", required=True)
    sub.add_argument("--bind", action="append", default=[], metavar="VAR=NAME")
    sub.set_defaults(func=cmd_truth_check)

    sub = subs.add_parser("axioms", help="axiom preservation report")
    _add_source(sub)
    _add_qb(sub)
    sub.set_defaults(func=cmd_axioms)

    sub = subs.add_parser("pretame", help="pretameness witness search")
    _add_source(sub)
    sub.add_argument("--family-dense", required=True,
                     help="label of a dense family registered on the system")
    sub.add_argument("--p", required=True)
    sub.add_argument("--cap", type=int, required=True,
                     help="largest allowed cover size")
    sub.set_defaults(func=cmd_pretame)

    sub = subs.add_parser("stratified", help="orbit-closure stratification check")
    _add_source(sub)
    sub.set_defaults(func=cmd_stratified)

    sub = subs.add_parser("sep-witness", help="separation witness construction")
    _add_source(sub)
    _add_qb(sub)
    sub.add_argument("--z", required=True)
    sub.add_argument("--gamma", required=True)
    sub.add_argument("--p", required=True)
    sub.add_argument("--b", default=None,
                     help="comma-separated entry conditions for the witness name")
    sub.set_defaults(func=cmd_sep_witness)

    sub = subs.add_parser("coll-witness", help="collection witness universe scan")
    _add_source(sub)
    _add_qb(sub)
    sub.add_argument("--z", required=True)
    sub.add_argument("--gamma", required=True)
    sub.add_argument("--p", required=True)
    sub.add_argument("--alpha-max", type=int, default=5)
    sub.set_defaults(func=cmd_coll_witness)

    sub = subs.add_parser("orbit", help="orbit size of a condition under fix(e)")
    _add_source(sub)
    sub.add_argument("--q", required=True)
    sub.add_argument("--e", default="", help="comma-separated coordinates")
    sub.set_defaults(func=cmd_orbit)

    sub = subs.add_parser("hs", help="enumerate the bounded name universe")
    _add_source(sub)
    _add_qb(sub)
    sub.add_argument("--plain", action="store_true",
                     help="every name, not just the hereditarily symmetric ones")
    sub.set_defaults(func=cmd_hs)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ForcelabError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
