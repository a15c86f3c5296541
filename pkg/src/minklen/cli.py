"""Command line interface: ``minklen {length,classify,sum,verify,random}``.

Polytopes are read from a path (``-`` for stdin) either as JSON
``{"dim": 3, "vertices": [[0,0,0], ...]}`` or as plain text with one vertex
per line.  ``--json`` prints a versioned report; timings are left out of it
unless ``--timings`` is given, so reports for the same input are identical.

Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 oracle budget
exceeded, 4 fast and brute-force lengths disagree.
"""

import argparse
import json
import sys
import time
from itertools import combinations

from . import __version__
from .classify import (
    PreconditionError,
    TheoremViolation,
    classify_length1_polygon,
    five_point_type,
    interior_ledger,
    lemma_intersection_check,
    subset_types,
)
from .lattice import all_mod3_classes
from .minkowski import length
from .oracle import DEFAULT_BUDGET, OracleBudgetExceeded, oracle_length, witness_fits
from .polytope import DegenerateInputError, LatticePolytope, minkowski_sum_all
from .sampling import Mcg64, random_points

SCHEMA = "minklen.report/1"

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_MISMATCH = 4


class InputError(ValueError):
    pass


# -- polytope files -----------------------------------------------------------


def parse_polytope(text):
    """Parse a polytope file; returns ``(dim, vertices)``."""
    body = text.strip()
    if not body:
        raise InputError("empty input")
    if body.startswith("{"):
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or "vertices" not in data:
            raise InputError('JSON input needs a "vertices" list')
        verts = data["vertices"]
        dim = data.get("dim")
    else:
        verts = []
        for lineno, line in enumerate(body.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                verts.append([int(x) for x in line.replace(",", " ").split()])
            except ValueError:
                raise InputError(f"line {lineno}: expected integers, got {line!r}") from None
        dim = None
    if not isinstance(verts, list) or not verts:
        raise InputError("no vertices given")
    out = []
    for v in verts:
        if not isinstance(v, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
            raise InputError(f"vertex {v!r} is not a list of integers")
        out.append(tuple(v))
    if dim is None:
        dim = len(out[0])
    if dim not in (2, 3):
        raise InputError(f"dimension must be 2 or 3, got {dim!r}")
    if any(len(v) != dim for v in out):
        raise InputError(f"every vertex must have {dim} coordinates")
    return dim, out


def dump_polytope(P):
    return json.dumps({"dim": P.dim, "vertices": [list(v) for v in P.vertices]})


def read_polytope(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    _, verts = parse_polytope(text)
    return LatticePolytope(verts)


# -- reports ------------------------------------------------------------------


class Report:
    def __init__(self, args, command):
        self.args = args
        self.payload = {"schema": SCHEMA, "version": __version__, "command": command}
        self.lines = []
        self.timings = {}

    def say(self, line):
        self.lines.append(line)

    def timed(self, name, fn, *a, **kw):
        start = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    def emit(self, out=None):
        out = out or sys.stdout
        if self.args.json:
            payload = dict(self.payload)
            if self.args.timings:
                payload["timings"] = self.timings
            out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            for line in self.lines:
                out.write(line + "\n")
            if self.args.timings:
                for name, t in self.timings.items():
                    out.write(f"time {name}: {t:.3f}s\n")


def _fmt(v):
    return "(" + ",".join(str(c) for c in v) + ")"


def _witness_lines(anchor, parts):
    lines = [f"anchor {_fmt(anchor)}"]
    lines += [f"  {n} x {_fmt(v)}" for n, v in parts]
    return lines


def _oracle_parts(res):
    counts = {}
    for v in res.witness:
        counts[v] = counts.get(v, 0) + 1
    return sorted(counts.items(), key=lambda kv: kv[0])


def _length_payload(P, args, report, prefix=""):
    """Compute L(P) by the requested path(s); returns (length, exit code)."""
    code = EXIT_OK
    out = {}
    fast = oracle = None
    if not args.oracle or args.check:
        fast = report.timed(prefix + "fast", length, P)
        out["length"] = fast.length
        if args.witness:
            out["witness"] = fast.witness.as_dict()
            if fast.basis is not None:
                out["template"] = {"kind": fast.basis.kind, "variant": fast.basis.variant}
    if args.oracle or args.check:
        oracle = report.timed(prefix + "oracle", oracle_length, P, args.oracle_budget)
        out["oracle_length"] = oracle.length
        out["oracle_nodes"] = oracle.nodes
        if "length" not in out:
            out["length"] = oracle.length
            if args.witness:
                out["witness"] = {
                    "anchor": list(oracle.anchor),
                    "parts": [{"multiplicity": n, "direction": list(v)} for n, v in _oracle_parts(oracle)],
                }
    if fast is not None and oracle is not None:
        out["agree"] = fast.length == oracle.length
        if not out["agree"]:
            code = EXIT_MISMATCH
    return out, code, fast, oracle


# -- commands -----------------------------------------------------------------


def cmd_length(args):
    report = Report(args, "length")
    P = read_polytope(args.file)
    out, code, fast, oracle = _length_payload(P, args, report)
    report.payload["input"] = {"dim": P.dim, "vertices": [list(v) for v in P.vertices]}
    report.payload["result"] = out
    report.say(f"L = {out['length']}")
    if args.witness:
        w = out["witness"]
        report.say("\n".join(_witness_lines(w["anchor"], [(p["multiplicity"], p["direction"]) for p in w["parts"]])))
    if oracle is not None:
        report.say(f"oracle: L = {oracle.length} ({oracle.nodes} nodes, within budget {args.oracle_budget})")
    if code == EXIT_MISMATCH:
        report.say(f"MISMATCH: fast path {fast.length}, oracle {oracle.length}")
    return report, code


def cmd_classify(args):
    report = Report(args, "classify")
    P = read_polytope(args.file)
    res = report.timed("length", length, P)
    out = {"length": res.length, "lattice_points": P.num_lattice_points}
    report.say(f"L = {res.length}")
    report.say(f"{P.num_lattice_points} lattice points")
    if P.affine_dim <= 2:
        try:
            kind = classify_length1_polygon(P)
            out["polygon_kind"] = kind
            report.say(kind)
        except PreconditionError as exc:
            out["polygon_kind"] = None
            out["note"] = str(exc)
            report.say(f"no polygon classification: {exc}")
    else:
        interior = sorted(P.interior_points())
        out["interior_points"] = len(interior)
        report.say(f"{len(interior)} interior lattice points")
        n = P.num_lattice_points
        if n >= 5:
            subsets = list(combinations(P.lattice_points, 5))
            if len(subsets) <= 56:
                types = [five_point_type(S)[0] for S in subsets]
                out["subset_types"] = [{"points": [list(p) for p in S], "type": t} for S, t in zip(subsets, types)]
                hist = {}
                for t in types:
                    hist[t] = hist.get(t, 0) + 1
            else:
                hist = dict(subset_types(P))
            out["subset_histogram"] = dict(sorted(hist.items()))
            if len(hist) == 1:
                report.say(f"all 5-subsets: {next(iter(hist))}")
            else:
                report.say("5-subsets: " + ", ".join(f"{t} x{c}" for t, c in sorted(hist.items())))
    report.payload["input"] = {"dim": P.dim, "vertices": [list(v) for v in P.vertices]}
    report.payload["result"] = out
    return report, EXIT_OK


def cmd_sum(args):
    report = Report(args, "sum")
    if len(args.files) < 2:
        raise InputError("sum needs at least two polytope files")
    polys = [read_polytope(f) for f in args.files]
    if len({P.dim for P in polys}) != 1:
        raise InputError("all summands must have the same dimension")
    total = minkowski_sum_all(polys)
    code = EXIT_OK
    each = []
    for i, P in enumerate(polys):
        out, c, _, _ = _length_payload(P, args, report, prefix=f"summand{i}.")
        each.append(out["length"])
        code = max(code, c)
    out, c, _, _ = _length_payload(total, args, report, prefix="sum.")
    code = max(code, c)
    names = "PQRSTUVW"
    labels = [names[i] if i < len(names) else f"P{i}" for i in range(len(polys))]
    report.say(", ".join(f"L({x})={n}" for x, n in zip(labels, each)) + f", L({'+'.join(labels)})={out['length']}")
    report.say(f"superadditivity margin {out['length'] - sum(each)}")
    report.payload["result"] = {
        "summands": each,
        "sum": out,
        "margin": out["length"] - sum(each),
        "sum_vertices": [list(v) for v in total.vertices],
    }
    return report, code


# -- built-in verification ----------------------------------------------------


SIMPLEX4 = [(0, 0, 0), (1, 3, 0), (0, 2, 3), (4, 1, 3)]
TETRA = [(-1, -1, -1), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
T0_VERTS = [(1, 0), (0, 1), (2, 2)]
UNIT2 = [(0, 0), (1, 0), (0, 1)]


def _verify_checks():
    simplex4 = LatticePolytope(SIMPLEX4)
    tetra = LatticePolytope(TETRA)
    t0 = LatticePolytope(T0_VERTS)
    unit = LatticePolytope(UNIT2)

    def differential(count=20, seed=1):
        rng = Mcg64(seed)
        for _ in range(count):
            for dim, box in ((3, 3), (2, 5)):
                P = LatticePolytope(random_points(rng, dim, box))
                if length(P).length != oracle_length(P).length:
                    return False
        return True

    return [
        ("four-interior simplex: interior points",
         lambda: simplex4.interior_points() == {(1, 2, 1), (1, 2, 2), (1, 1, 1), (2, 1, 2)}),
        ("four-interior simplex: length 1", lambda: length(simplex4).length == 1),
        ("four-interior simplex: interior ledger total 4",
         lambda: interior_ledger([simplex4], simplex4).total == 4),
        ("reflexive tetrahedron: length 1", lambda: length(tetra).length == 1),
        ("reflexive tetrahedron: doubled length 2", lambda: length(tetra.dilate(2)).length == 2),
        ("reflexive tetrahedron: every 5-subset is (10)", lambda: set(subset_types(tetra)) == {"(10)"}),
        ("T0: length 1 and classified", lambda: classify_length1_polygon(t0) == "T0"),
        ("unit simplex: length 1 and classified", lambda: classify_length1_polygon(unit) == "unit simplex"),
        ("doubled unit simplex: length 2", lambda: length(unit.dilate(2)).length == 2),
        ("T0 + T0: length 3", lambda: length(t0 + t0).length == 3),
        ("mod-3 classes: 13 in 3D, 4 in 2D",
         lambda: (len(all_mod3_classes(3)), len(all_mod3_classes(2))) == (13, 4)),
        ("class lines pairwise intersect", lambda: lemma_intersection_check()[1] == 0),
        ("fast length equals oracle on 40 random instances", differential),
    ]


def cmd_verify(args):
    report = Report(args, "verify")
    rows = []
    failed = 0
    for name, check in _verify_checks():
        try:
            ok = bool(report.timed(name, check))
            err = None
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, err = False, f"{type(exc).__name__}: {exc}"
        failed += not ok
        rows.append({"check": name, "pass": ok, **({"error": err} if err else {})})
        report.say(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{err}]" if err else ""))
    report.say(f"{len(rows) - failed}/{len(rows)} checks passed")
    report.payload["result"] = {"checks": rows, "failed": failed}
    return report, EXIT_VERIFY if failed else EXIT_OK


def cmd_random(args):
    report = Report(args, "random")
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if args.box < 1:
        raise InputError("--box must be at least 1")
    if args.dim not in (2, 3):
        raise InputError("--dim must be 2 or 3")
    rng = Mcg64(args.seed)
    instances = []
    failures = []
    code = EXIT_OK
    for i in range(args.count):
        P = LatticePolytope(random_points(rng, args.dim, args.box))
        item = {"index": i, "vertices": [list(v) for v in P.vertices], "lattice_points": P.num_lattice_points}
        fast = report.timed(f"fast.{i}", length, P)
        item["length"] = fast.length
        if args.diff:
            try:
                orc = report.timed(f"oracle.{i}", oracle_length, P, args.oracle_budget)
            except OracleBudgetExceeded:
                item["oracle_length"] = None
                item["status"] = "budget"
                code = max(code, EXIT_BUDGET)
            else:
                item["oracle_length"] = orc.length
                ok = orc.length == fast.length and fast.witness.fits_in(P) and witness_fits(P, orc)
                item["status"] = "ok" if ok else "mismatch"
                if not ok:
                    failures.append({"dim": P.dim, "vertices": item["vertices"]})
        instances.append(item)
    report.payload["seed"] = args.seed
    report.payload["params"] = {"count": args.count, "box": args.box, "dim": args.dim, "diff": args.diff}
    report.payload["result"] = {"instances": instances}
    if args.diff:
        budget = sum(1 for x in instances if x["status"] == "budget")
        report.payload["result"]["mismatches"] = len(failures)
        report.payload["result"]["budget_exceeded"] = budget
        report.payload["result"]["failures"] = failures
        report.say(f"{args.count} instances, {len(failures)} mismatches" + (f", {budget} over budget" if budget else ""))
        for f in failures:
            report.say(json.dumps(f))
        if failures:
            code = EXIT_MISMATCH
    else:
        for item in instances:
            report.say(f"{item['index']}: L = {item['length']}  {item['vertices']}")
    return report, code


# -- entry point --------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common.add_argument("--oracle-budget", type=int, default=DEFAULT_BUDGET, metavar="N",
                        help="node budget for the brute-force oracle (default %(default)s)")

    paths = argparse.ArgumentParser(add_help=False)
    paths.add_argument("--oracle", action="store_true", help="use the brute-force oracle")
    paths.add_argument("--check", action="store_true", help="run both paths and compare")
    paths.add_argument("--witness", action="store_true", help="print a witness decomposition")

    parser = argparse.ArgumentParser(prog="minklen", description="Minkowski length of lattice polytopes")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("length", parents=[common, paths], help="Minkowski length of one polytope")
    p.add_argument("file", help="polytope file, or - for stdin")
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("classify", parents=[common], help="polygon kind or 5-point types")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sum", parents=[common, paths], help="length of a Minkowski sum")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("verify", parents=[common], help="run the built-in golden checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", parents=[common], help="random instances and differential testing")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--diff", action="store_true", help="compare against the oracle")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report, code = args.func(args)
    except (InputError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except TheoremViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    report.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
