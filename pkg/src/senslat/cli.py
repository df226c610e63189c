"""``senslat`` command line.

Exit codes: 0 every check passed, 1 a mathematical check failed (the
report holds the counterexample), 2 usage or resource error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import shlex
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from . import boolfn as bf
from . import bounds, constructions, lattice, reductions, search
from .checks import CheckReport, Inequality, encode_number
from .errors import SenslatError

SCHEMA_VERSION = "senslat.report/1"
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def jsonable(v):
    if isinstance(v, Fraction):
        return encode_number(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.ndarray):
        return jsonable(v.tolist())
    return v


def fingerprint_inputs(inputs: dict) -> str:
    blob = json.dumps(jsonable(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class Result:
    """What a subcommand hands back before it is wrapped into a report."""

    def __init__(self, check: str, inputs: dict, results: dict, witnesses=None,
                 inequalities=(), findings=(), artifact: str | None = None):
        self.check = check
        self.inputs = inputs
        self.results = results
        self.witnesses = witnesses or {}
        self.inequalities = list(inequalities)
        self.findings = list(findings)
        self.artifact = artifact

    @property
    def passed(self) -> bool:
        return all(q.holds for q in self.inequalities)

    def absorb(self, rep: CheckReport, key: str | None = None):
        self.inequalities += rep.inequalities
        self.findings += rep.findings
        if key:
            self.results[key] = rep.details


def build_report(argv: list[str], res: Result, seconds: float) -> dict:
    return jsonable({
        "schema": SCHEMA_VERSION,
        "command": "senslat " + shlex.join(argv),
        "check": res.check,
        "inputs": res.inputs,
        "inputs_fingerprint": fingerprint_inputs(res.inputs),
        "results": res.results,
        "inequalities": [q.to_dict() for q in res.inequalities],
        "witnesses": res.witnesses,
        "findings": res.findings,
        "passed": res.passed,
        "timing": {"seconds": round(seconds, 6), "backend": _kernels.BACKEND, "version": __version__},
    })


# ---------------------------------------------------------------- argument helpers

def load_function(args) -> bf.TruthTable:
    if args.file:
        return bf.TruthTable.parse(Path(args.file).read_text())
    if args.table:
        if args.n is None:
            raise UsageError("--table needs --n")
        return bf.TruthTable.from_hex(args.n, args.table)
    raise UsageError("give a function with --file PATH or --table HEX --n N")


def load_coloring_arg(args, default_n: int | None = None):
    if args.spec:
        return lattice.load_coloring(args.spec), {"spec": args.spec}
    n = args.n if args.n is not None else default_n
    if n is None:
        raise UsageError("give a coloring with --spec PATH or --n N")
    return constructions.slice_coloring(n), {"slice_coloring": n}


def parse_box(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--box expects lo:hi, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("--box needs lo <= hi")
    return lo, hi


def parse_blocks(text: str) -> list[int]:
    """``1;2;3,4`` -> block masks over 1-based variables."""
    out = []
    for part in text.split(";"):
        try:
            out.append(bf.block_from_vars(int(v) for v in part.split(",") if v.strip()))
        except ValueError:
            raise UsageError(f"bad --blocks entry {part!r}; use e.g. '1;2;3,4'") from None
    return out


def write_out(path: str | None, text: str):
    if path:
        Path(path).write_text(text)


# ---------------------------------------------------------------- fn

def cmd_fn_measure(args) -> Result:
    f = load_function(args)
    rep = bf.measure(f, args.cap)
    results = rep.to_dict()
    results.pop("witnesses")
    if args.l is not None:
        results["requested_bs_l"] = {"l": args.l, "value": bf.l_block_sensitivity(f, args.l, f.n, args.cap)}
    return Result("fn.measure", {"table": f.to_hex(), "n": f.n, "fingerprint": f.fingerprint()},
                  results, rep.witnesses,
                  [Inequality("witnesses replay", int(rep.replay(f)), "==", 1)])


def cmd_fn_build(args) -> Result:
    name = args.name
    if name == "sorted":
        f = constructions.sorted_function()
    elif name in ("rubinstein-g", "rubinstein-f"):
        if args.n is None:
            raise UsageError(f"{name} needs --n (even)")
        f = constructions.rubinstein_g(args.n) if name == "rubinstein-g" else constructions.rubinstein_f(args.n)
        if not isinstance(f, bf.TruthTable):
            raise UsageError(f"rubinstein-f with n={args.n} has {f.n} variables; tables stop at {bf.MAX_TABLE_VARS}")
    else:
        raise UsageError(f"unknown function {name!r}")
    write_out(args.out, f.dumps())
    return Result("fn.build", {"name": name, "n": args.n},
                  {"n": f.n, "table": f.to_hex(), "fingerprint": f.fingerprint()}, artifact=f.dumps())


# ---------------------------------------------------------------- color

def cmd_color_build(args) -> Result:
    n = args.n
    if n is None:
        raise UsageError("color build needs --n")
    name = args.name
    if name == "slice":
        c = constructions.slice_coloring(n)
    elif name == "slice-group":
        c = constructions.slice_group(n)
    elif name == "repeated":
        c = lattice.repeated_coloring(constructions.slice_group(n), n)
    elif name == "doubled":
        c = lattice.double_coloring(constructions.slice_coloring(n))
    else:
        raise UsageError(f"unknown coloring {name!r}")
    text = lattice.dump_coloring(c)
    write_out(args.out, text)
    results = {"kind": c.kind, "d": c.d, "fingerprint": c.fingerprint()}
    if isinstance(c, lattice.SlicedColoring):
        results["slice_table"] = constructions.slice_table(c)
    return Result("color.build", {"name": name, "n": n}, results, artifact=text)


def measure_coloring(c, args) -> lattice.ColoringReport:
    if args.box is not None:
        if args.samples:
            return lattice.sampled_report(c, box=args.box, samples=args.samples, seed=args.seed)
        return lattice.box_report(c, args.box[0], args.box[1], args.cap or lattice.DEFAULT_PROBE_CAP)
    if c.representatives() is None:
        raise UsageError(f"{c.kind} colorings have no exact mode; pass --box lo:hi")
    if args.samples:
        return lattice.sampled_report(c, samples=args.samples, seed=args.seed,
                                      values=lattice.representative_box(c))
    return lattice.exact_report(c, args.cap or lattice.DEFAULT_PROBE_CAP)


def cmd_color_measure(args) -> Result:
    c, src = load_coloring_arg(args)
    nt = lattice.check_nontrivial(c)
    rep = measure_coloring(c, args)
    ineq = [
        Inequality("r <= s", rep.r, "<=", rep.s),
        Inequality("s <= 2r", rep.s, "<=", 2 * rep.r),
        Inequality("witnesses replay", int(rep.replay(c)), "==", 1),
    ]
    results = rep.to_dict()
    witnesses = results.pop("witnesses")
    results["nontrivial"] = nt.to_dict()
    return Result("color.measure", {**src, "fingerprint": c.fingerprint(), "box": args.box,
                                    "samples": args.samples, "seed": args.seed},
                  results, witnesses, ineq)


# ---------------------------------------------------------------- reduce

def _f2c(args) -> tuple[Result, reductions.ReductionCertificate, lattice.Coloring]:
    f = load_function(args)
    if not args.blocks:
        raise UsageError("--blocks is required, e.g. --blocks '1;2;3,4'")
    blocks = parse_blocks(args.blocks)
    x = bf.parse_input(args.x) if args.x else 0
    c, cert = reductions.function_to_coloring(f, blocks, x)
    nt = lattice.check_nontrivial(c)
    res = Result("reduce.fn-to-color",
                 {"table": f.to_hex(), "n": f.n, "blocks": blocks, "x": bf.format_input(x, f.n)},
                 {"certificate": cert.to_dict(), "nontrivial": nt.to_dict()},
                 cert.witnesses, cert.inequalities)
    res.inequalities.append(Inequality("coloring is non-trivial", int(nt.passed), "==", 1))
    return res, cert, c


def cmd_reduce_f2c(args) -> Result:
    res, cert, _ = _f2c(args)
    write_out(args.out, cert.dumps())
    return res


def _c2f(args, default_n=None):
    c, src = load_coloring_arg(args, default_n)
    f, blocks, cert = reductions.coloring_to_function(c, seed=args.seed)
    res = Result("reduce.color-to-fn", {**src, "fingerprint": c.fingerprint(), "seed": args.seed},
                 {"certificate": cert.to_dict(), "n": f.n}, cert.witnesses, cert.inequalities)
    return res, cert


def cmd_reduce_c2f(args) -> Result:
    res, cert = _c2f(args)
    write_out(args.out, cert.dumps())
    return res


def cmd_reduce_check(args) -> Result:
    if not args.file:
        raise UsageError("reduce check needs --file CERTIFICATE.json")
    cert = reductions.ReductionCertificate.from_dict(json.loads(Path(args.file).read_text()))
    problems = cert.verify()
    return Result("reduce.check", {"file": args.file, "direction": cert.direction},
                  {"problems": problems}, cert.witnesses,
                  [Inequality("certificate problems == 0", len(problems), "==", 0)])


# ---------------------------------------------------------------- verify

def cmd_verify_kk(args) -> Result:
    if args.file or args.table:
        f = load_function(args)
        rep = bounds.kk_check(f, args.cap)
        res = Result("verify.kk", {"table": f.to_hex(), "n": f.n}, {})
    else:
        n = args.n if args.n is not None else 4
        rep = bounds.kk_sweep(n, args.threads)
        res = Result("verify.kk", {"n": n, "exhaustive": True}, {})
    res.absorb(rep, "kk")
    return res


def cmd_verify_theorem3(args) -> Result:
    n = args.n if args.n is not None else 2
    c = constructions.slice_coloring(n)
    nt = lattice.check_nontrivial(c)
    if not nt.passed:
        raise SenslatError(nt.reason)
    rep = lattice.exact_report(c, args.cap or lattice.DEFAULT_PROBE_CAP)
    w = constructions.red_axis_witness(n)
    w_r = lattice.axis_sensitivity(c, w)
    w_red = c.color(w) == lattice.Color.RED
    res = Result("verify.theorem3", {"n": n, "samples": args.samples, "seed": args.seed},
                 {"d": c.d, "exact": rep.to_dict(), "min_width": nt.width.k,
                  "nontrivial": nt.to_dict(), "slice_table": constructions.slice_table(c),
                  "red_axis_witness": {"point": w, "r": w_r, "red": w_red}},
                 {"red_axis_witness": w, **rep.witnesses})
    res.inequalities += [
        Inequality("r(C) == n", rep.r, "==", n),
        Inequality("d == 2r^2 - r", c.d, "==", 2 * rep.r**2 - rep.r),
        Inequality("witness point is red", int(w_red), "==", 1),
        Inequality("r at witness >= n", w_r, ">=", n),
    ]
    if args.samples:
        sampled = lattice.sampled_report(c, samples=args.samples, seed=args.seed,
                                         values=lattice.representative_box(c), witnesses=[w])
        res.results["sampled"] = sampled.to_dict()
        res.inequalities.append(Inequality("sampled r <= n", sampled.r, "<=", n))
    return res


def cmd_verify_theorem4(args) -> Result:
    if not (args.file or args.table):
        f = constructions.sorted_function()
        args.table, args.n = f.to_hex(), 4
        args.blocks = args.blocks or "1;2;3,4"
        args.x = args.x or "0100"
    res, cert, c = _f2c(args)
    res.check = "verify.theorem4"
    return res


def cmd_verify_theorem5(args) -> Result:
    res, _ = _c2f(args, default_n=2)
    res.check = "verify.theorem5"
    return res


def cmd_verify_theorem6(args) -> Result:
    c, src = load_coloring_arg(args, default_n=2)
    rep = lattice.exact_report(c, args.cap or lattice.DEFAULT_PROBE_CAP)
    res = Result("verify.theorem6", {**src, "fingerprint": c.fingerprint()},
                 {"report": rep.to_dict()}, rep.witnesses)
    res.absorb(bounds.lattice_lower_bound_check(rep), "bound")
    return res


def cmd_verify_theorem7(args) -> Result:
    if args.spec:
        c = lattice.load_coloring(args.spec)
        src = {"spec": args.spec}
    else:
        n = args.n if args.n is not None else 2
        c = lattice.repeated_coloring(constructions.slice_group(n), n)
        src = {"repeated_slice_group": n}
    res = Result("verify.theorem7", {**src, "fingerprint": c.fingerprint()}, {})
    res.absorb(bounds.repeated_bound_check(c), "bound")
    return res


def cmd_verify_theorem9(args) -> Result:
    c, src = load_coloring_arg(args, default_n=2)
    res = Result("verify.theorem9", {**src, "fingerprint": c.fingerprint()}, {})
    res.absorb(bounds.sliced_bound_check(c), "bound")
    return res


# ---------------------------------------------------------------- search / bounds

def _search_result(check, inputs, scan: search.ScanResult, args) -> Result:
    records = scan.records()
    if args.out:
        with open(args.out, "w") as fh:
            search.write_records(records, fh)
    ineq = [
        Inequality("records replay", sum(r.replay() for r in records), "==", len(records)),
        Inequality("tripwire violations == 0", len(scan.tripwire), "==", 0),
    ]
    best = scan.best_record()
    results = scan.to_dict()
    results["best"] = None if best is None else best.to_dict()
    return Result(check, inputs, results, inequalities=ineq)


def cmd_search_exhaustive(args) -> Result:
    n = args.n if args.n is not None else 3
    scan = search.exhaustive_scan(n, args.threads)
    return _search_result("search.exhaustive", {"n": n}, scan, args)


def cmd_search_random(args) -> Result:
    if args.n is None:
        raise UsageError("search random needs --n")
    scan = search.random_scan(args.n, args.samples, args.seed)
    return _search_result("search.random", {"n": args.n, "samples": args.samples, "seed": args.seed}, scan, args)


def cmd_bounds_const(args) -> Result:
    lmax = args.l if args.l is not None else 50
    if lmax < 1:
        raise UsageError("--l must be >= 1")
    res = Result("bounds.const", {"l": lmax},
                 {"constants": [bounds.kk_constant(l).to_dict() for l in range(1, lmax + 1)]})
    if lmax >= 2:
        res.absorb(bounds.kk_strict_check(lmax), "strict")
    return res


# ---------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser):
    p.add_argument("--file", help="truth-table file (n=<k> line then hex), or certificate for 'reduce check'")
    p.add_argument("--table", help="truth table as hex, most significant digit first; needs --n")
    p.add_argument("--n", type=int, help="number of variables, or construction parameter")
    p.add_argument("--l", type=int, help="block size bound / largest constant index")
    p.add_argument("--spec", help="coloring JSON file")
    p.add_argument("--cap", type=int, default=None, help="candidate-block cap (fn) or probe cap (colorings)")
    p.add_argument("--box", type=parse_box, help="scan box lo:hi on every axis")
    p.add_argument("--samples", type=int, default=0, help="random samples (0 = none)")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--out", help="write the command's artifact (or report) here")


SUBCOMMANDS = {
    "fn": {"measure": cmd_fn_measure, "build": cmd_fn_build},
    "color": {"build": cmd_color_build, "measure": cmd_color_measure},
    "reduce": {"fn-to-color": cmd_reduce_f2c, "color-to-fn": cmd_reduce_c2f, "check": cmd_reduce_check},
    "verify": {"kk": cmd_verify_kk, "theorem3": cmd_verify_theorem3, "theorem4": cmd_verify_theorem4,
               "theorem5": cmd_verify_theorem5, "theorem6": cmd_verify_theorem6,
               "theorem7": cmd_verify_theorem7, "theorem9": cmd_verify_theorem9},
    "search": {"exhaustive": cmd_search_exhaustive, "random": cmd_search_random},
    "bounds": {"const": cmd_bounds_const},
}

# commands whose --out receives an artifact; the rest write the report there
ARTIFACT_COMMANDS = {("fn", "build"), ("color", "build"), ("reduce", "fn-to-color"),
                     ("reduce", "color-to-fn"), ("search", "exhaustive"), ("search", "random")}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="senslat", description="Sensitivity measures for Boolean functions and lattice colorings.")
    parser.add_argument("--version", action="version", version=f"senslat {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)
    for group, actions in SUBCOMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="action", required=True)
        for action in actions:
            ap = sub.add_parser(action)
            _common(ap)
            if group == "fn" and action == "build" or group == "color" and action == "build":
                ap.add_argument("--name", required=True)
            if group in ("reduce", "verify"):
                ap.add_argument("--blocks", help="disjoint blocks of 1-based variables, e.g. '1;2;3,4'")
                ap.add_argument("--x", help="base input as a bit string x1..xn")
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    if args.cap is None and args.group == "fn":
        args.cap = bf.DEFAULT_CANDIDATE_CAP
    if args.cap is None and args.group == "verify" and args.action == "kk":
        args.cap = bf.DEFAULT_CANDIDATE_CAP
    if args.threads is not None and args.threads < 1:
        print("senslat: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    handler = SUBCOMMANDS[args.group][args.action]
    start = time.perf_counter()
    try:
        res = handler(args)
    except (UsageError, SenslatError, ValueError, OSError, IndexError, KeyError) as exc:
        print(f"senslat {args.group} {args.action}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = build_report(argv, res, time.perf_counter() - start)
    text = json.dumps(report, indent=2) + "\n"
    if args.out and (args.group, args.action) not in ARTIFACT_COMMANDS:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if res.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
