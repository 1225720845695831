"""Command line entry point: ``wdcop check|verify-lemmas|audit|probe``.

Exit status is 0 when everything passes, 1 on a fixture mismatch (or a
failed lemma / audit item) and 2 on bad input.
"""
import argparse
import sys
from dataclasses import replace

from . import criteria as cr
from . import harness
from .analytic import Power, ProbeKernel, mobius, polynomial
from .errors import ScenarioError, WdcError
from .spaces import growth_exponent

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2
DEFAULT_SCENARIOS = "scenarios/fixtures.json"


class InputError(Exception):
    pass


def _complex(text):
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"expected 're,im', got {text!r}")


def parse_function(text, space=None):
    """Function syntax accepted by ``probe``.

    identity | scaled_identity:F | automorphism:RE,IM | polynomial:C0,C1,...
    | monomial:N | kernel:RE,IM[:K] (normalized probe for the scenario's space)
    """
    name, _, arg = text.partition(":")
    try:
        if name == "identity" and not arg:
            return polynomial([0.0, 1.0])
        if name == "scaled_identity":
            return polynomial([0.0, _complex(arg)])
        if name == "automorphism":
            return mobius(_complex(arg))
        if name == "polynomial":
            return polynomial([float(c) for c in arg.split(",")])
        if name == "monomial":
            return Power(int(arg))
        if name == "kernel":
            a, _, k = arg.partition(":")
            return ProbeKernel(_complex(a), growth_exponent(space), int(k) if k else 0)
    except (ValueError, WdcError) as e:
        raise InputError(f"bad function {text!r}: {e}") from None
    raise InputError(f"unknown function {text!r}")


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _config(args):
    if args.shells < 5:
        raise InputError("--shells must be >= 5")
    if args.angles < 4:
        raise InputError("--angles must be >= 4")
    return replace(cr.CriteriaConfig(), shells=args.shells, angles=args.angles)


def cmd_check(args):
    cfg = _config(args)
    results = harness.run_all(harness.load_scenarios(args.scenarios), cfg)
    for r in results:
        v = r.report.verdicts
        print(f"{'PASS' if r.passed else 'MISMATCH':8s} {r.scenario.name}: bounded={v['bounded']} "
              f"compact={v['compact']} order_bounded={v['order_bounded'] or '-'}", file=sys.stderr)
    text = harness.to_csv(results) if (args.out or "").lower().endswith(".csv") else harness.to_json(results, cfg)
    _write(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_MISMATCH


def cmd_verify(args):
    if args.nmax < 8:
        raise InputError("--nmax must be >= 8")
    cfg = harness.LemmaConfig(nmax=args.nmax)
    items = harness.verify_lemmas(cfg)
    for i in items:
        print(f"{i.status:4s} {i.name}: {i.measured!r}", file=sys.stderr)
    text = harness.lemmas_csv(items) if (args.out or "").lower().endswith(".csv") else harness.lemmas_json(items, cfg)
    _write(text, args.out)
    return EXIT_MISMATCH if any(i.status == "FAIL" for i in items) else EXIT_OK


def cmd_audit(args):
    cfg = _config(args)
    results = harness.run_all(harness.load_scenarios(args.scenarios), cfg)
    fails = 0
    for r in results:
        for a in r.report.audit:
            fails += a.status == "FAIL"
            print(f"{a.status:12s} {r.scenario.name} [{a.prop}] {a.first} vs {a.second}: "
                  f"{a.verdicts[0]} / {a.verdicts[1]}", file=sys.stderr)
        for note in r.report.notes:
            print(f"{'NOTE':12s} {r.scenario.name}: {note}", file=sys.stderr)
    _write(harness.audit_json(results), args.out)
    return EXIT_MISMATCH if fails else EXIT_OK


def cmd_probe(args):
    scenarios = {s.name: s for s in harness.load_scenarios(args.scenarios)}
    if args.scenario not in scenarios:
        raise InputError(f"no scenario named {args.scenario!r} in {args.scenarios}")
    sc = scenarios[args.scenario]
    f = parse_function(args.function, sc.source_space)
    z = _complex(args.at)
    if abs(z) >= 1:
        raise InputError("--at must lie strictly inside the unit disk")
    val = harness.probe_value(sc, f, z)
    print(f"{val.real!r},{val.imag!r}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="wdcop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def grid_flags(sp):
        sp.add_argument("--shells", type=int, default=16, help="shell count J (default 16)")
        sp.add_argument("--angles", type=int, default=1024, help="angles per shell K (default 1024)")

    c = sub.add_parser("check", help="evaluate scenarios and compare with expected verdicts")
    c.add_argument("scenarios")
    c.add_argument("--out", help="report path; .csv selects CSV, anything else JSON")
    grid_flags(c)
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify-lemmas", help="monomial exponents, growth constants, probe unit bounds")
    v.add_argument("--nmax", type=int, default=256)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("audit", help="pairwise agreement of the equivalent conditions")
    a.add_argument("scenarios")
    a.add_argument("--out")
    grid_flags(a)
    a.set_defaults(func=cmd_audit)

    pr = sub.add_parser("probe", help="evaluate S f at one point")
    pr.add_argument("scenario")
    pr.add_argument("--function", required=True, help=parse_function.__doc__.split("\n\n")[1].strip())
    pr.add_argument("--at", required=True, help="point as re,im")
    pr.add_argument("--scenarios", default=DEFAULT_SCENARIOS)
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, WdcError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
