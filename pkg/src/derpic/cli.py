"""Command line front end: ``verify <check> [flags]``.

Every check prints one line per report and exits 0 when all pass, 1 on any
failure, 2 when something is inconclusive and 64 on usage errors.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import suites
from .homotopy import hom_k, minimal_model
from .serialize import complex_from_json, complex_to_json
from .tilting import Report
from .witnesses import build_world

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

WORLD_CHECKS = ["frobenius", "orbit", "morita", "tilting-h", "tilting-q", "adjusters", "mu",
                "rickard", "lemma4", "root", "graded", "kernel", "theorem6"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def run_world_check(check, world, opts):
    """One report for one world; ``opts`` holds l, seed and budget."""
    l, seed, budget = opts.get("l"), opts.get("seed", 0), opts.get("budget", 2000)
    if check == "frobenius":
        return suites.frobenius_suite(world)
    if check == "orbit":
        return suites.orbit_suite(world)
    if check == "morita":
        return suites.morita_suite(world)
    if check == "tilting-h":
        return suites.tilting_suite(world, "h", l, budget)
    if check == "tilting-q":
        return suites.tilting_suite(world, "q", l, budget)
    if check == "adjusters":
        return suites.adjusters_suite(world, l)
    if check == "mu":
        return suites.mu_suite(world, l)
    if check == "rickard":
        return suites.rickard_suite(world, seed, l or 0)
    if check == "lemma4":
        return suites.lemma4_suite(world, seed)
    if check == "root":
        return suites.root_suite(world, seed)
    if check == "graded":
        return suites.graded_suite(world, seed)
    if check == "kernel":
        return suites.kernel_suite(world, seed)
    if check == "theorem6":
        return suites.theorem6(world, seed)
    raise UsageError(f"unknown check {check!r}")


def _task(args):
    check, params, opts = args
    try:
        world = build_world(*params)
    except (ValueError, ArithmeticError) as exc:
        rep = Report(check, {"n": params[0], "m": params[1], "t": params[2], "field": params[3]})
        rep.fail("world", str(exc))
        return rep.done().as_dict()
    return run_world_check(check, world, opts).as_dict()


def strip_timing(d):
    if isinstance(d, dict):
        return {k: (0 if k == "elapsed_ms" else strip_timing(v)) for k, v in d.items()}
    if isinstance(d, list):
        return [strip_timing(v) for v in d]
    return d


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def emit_report(reports):
    """The JSON document for a list of reports (dicts or Report objects)."""
    out = []
    for r in reports:
        d = r.as_dict() if isinstance(r, Report) else r
        out.append({k: _jsonable(d.get(k)) for k in ("check", "params", "status", "details", "elapsed_ms")})
    return json.dumps(out, indent=2)


def exit_code(reports):
    statuses = [(r.status if isinstance(r, Report) else r["status"]) for r in reports]
    if any(s == "fail" for s in statuses):
        return EXIT_FAIL
    if any(s == "inconclusive" for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def load_grid(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise UsageError("grid must be a JSON list of [n, m, t, field]")
    out = []
    for row in data:
        if isinstance(row, dict):
            row = [row["n"], row["m"], row["t"], row.get("field", "Q")]
        if len(row) == 3:
            row = list(row) + ["Q"]
        if len(row) != 4:
            raise UsageError(f"bad grid entry {row!r}")
        out.append((int(row[0]), int(row[1]), int(row[2]), str(row[3])))
    return out


def run_check(check, worlds, opts, jobs=1):
    tasks = [(check, w, opts) for w in worlds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_task, tasks))
    return [_task(t) for t in tasks]


def complex_tool(args):
    """validate / minimize / hom over complexes stored as JSON."""
    reports = []
    with open(args.file) as fh:
        X = complex_from_json(json.load(fh))
    rep = Report(f"complex-{args.action}", {"file": args.file})
    if args.action == "validate":
        rep.details["rank"] = X.rank()
    elif args.action == "minimize":
        Xm = minimal_model(X)[0]
        rep.details["minimal"] = complex_to_json(Xm)
        rep.details["rank"] = Xm.rank()
    else:
        if not args.other:
            raise UsageError("hom needs a second complex file")
        with open(args.other) as fh:
            Y = complex_from_json(json.load(fh), X.algebra)
        rep.details["dim"] = hom_k(X, Y, args.shift).dim
        rep.params.update(other=args.other, shift=args.shift)
    reports.append(rep.done())
    return reports


def build_parser():
    p = _Parser(prog="verify", description="Exact verification of tilting and orbit-algebra data.")
    sub = p.add_subparsers(dest="check")
    for name in WORLD_CHECKS:
        s = sub.add_parser(name)
        s.add_argument("--n", type=int)
        s.add_argument("--m", type=int)
        s.add_argument("--t", type=int)
        s.add_argument("--field", default="Q")
        s.add_argument("--l", type=int)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--budget", type=int, default=2000)
        s.add_argument("--grid")
        s.add_argument("--json")
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--no-timing", action="store_true")
    c = sub.add_parser("complex")
    c.add_argument("action", choices=["validate", "minimize", "hom"])
    c.add_argument("file")
    c.add_argument("other", nargs="?")
    c.add_argument("--shift", type=int, default=0)
    c.add_argument("--json")
    c.add_argument("--no-timing", action="store_true")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.check:
            raise UsageError("missing check name")
        if args.check == "complex":
            reports = [r.as_dict() for r in complex_tool(args)]
        else:
            if args.grid:
                worlds = load_grid(args.grid)
            elif None in (args.n, args.m, args.t):
                raise UsageError("give --n --m --t or --grid")
            else:
                worlds = [(args.n, args.m, args.t, args.field)]
            opts = {"l": args.l, "seed": args.seed, "budget": args.budget}
            reports = run_check(args.check, worlds, opts, args.jobs)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.no_timing:
        reports = [strip_timing(r) for r in reports]
    for r in reports:
        print(f"{r['check']:<12} {json.dumps(r['params'], sort_keys=True)} {r['status']} ({r['elapsed_ms']} ms)")
    if args.json:
        doc = emit_report(reports)
        if args.json == "-":
            print(doc)
        else:
            with open(args.json, "w") as fh:
                fh.write(doc + "\n")
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
