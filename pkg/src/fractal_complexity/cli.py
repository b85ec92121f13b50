"""Command-line front end.

Exit codes: 0 success, 1 failure (bad preset, failed verification, I/O),
2 disagreement between counting methods, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import mpmath

from .decimation import DecimationError, decimation_data, multiplicity_recursion, spectrum_numeric
from .entropy import entropy_report
from .graph import (
    PresetError,
    build_level,
    degree_census_recursive,
    load_preset,
    require_valid,
)
from .presets import CATALOG
from .treecount import count_decimation, count_kirchhoff_probabilistic, count_matrix_tree, int_str
from .verification import verify_preset

EXIT_OK, EXIT_FAIL, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2, 64
METHODS = ("matrix-tree", "decimation", "kirchhoff")
KIRCHHOFF_RTOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _precision(text: str) -> int:
    v = int(text)
    if v < 15:
        raise argparse.ArgumentTypeError("precision must be at least 15 digits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("preset_pos", nargs="?", metavar="PRESET",
                        help="catalog name or preset JSON file")
    common.add_argument("--preset", dest="preset_opt", metavar="PRESET")
    common.add_argument("--out", metavar="PATH", help="write the JSON result here")
    common.add_argument("--precision", type=_precision, default=30, metavar="DIGITS")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")

    p = _Parser(prog="fractal-complexity",
                description="Spanning trees and tree entropy of self-similar fractal graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="construct G_n")
    b.add_argument("--level", type=_nonneg, required=True)

    s = sub.add_parser("spectrum", parents=[common], help="exact spectrum by decimation")
    s.add_argument("--level", type=_nonneg, required=True)

    c = sub.add_parser("count", parents=[common], help="count spanning trees")
    c.add_argument("--level", type=_nonneg, required=True)
    c.add_argument("--method", choices=METHODS + ("all",), default="all")

    e = sub.add_parser("entropy", parents=[common], help="tree entropy sequence and limit")
    e.add_argument("--levels", type=_positive, required=True, metavar="N_MAX")

    sub.add_parser("verify", parents=[common], help="run the self-checks for a preset")
    sub.add_parser("presets", parents=[common], help="list built-in presets")
    return p


def _resolve(args):
    if args.preset_pos and args.preset_opt and args.preset_pos != args.preset_opt:
        raise UsageError("preset given twice with different values")
    name = args.preset_opt or args.preset_pos
    if name is None:
        raise UsageError("a preset is required")
    return load_preset(name)


def _write(path: str | None, text: str):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_build(args) -> int:
    preset = _resolve(args)
    require_valid(preset)
    g = build_level(preset, args.level)
    _write(args.out, g.to_json())
    if args.json:
        sys.stdout.write(g.to_json())
        return EXIT_OK
    census = " ".join(f"{d}:{c}" for d, c in sorted(g.degree_census.items()))
    print(f"vertices: {g.vertex_count}, edges: {g.edge_count}")
    print(f"degree census: {census}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    preset = _resolve(args)
    require_valid(preset)
    dd = decimation_data(preset)
    tab = multiplicity_recursion(dd, preset, args.level)
    doc = dict(tab.to_dict(), preset=preset.name, decimation=dd.to_dict())
    text = _dump(doc)
    _write(args.out, text)
    if args.json:
        sys.stdout.write(text)
        return EXIT_OK
    print(f"{preset.name} level {tab.level}: {tab.total()} eigenvalues")
    print(f"R(z) = ({dd.P}) / ({dd.Q})")
    print(f"0: multiplicity {tab.zero_mult}")
    for x, k in tab.A_set:
        print(f"A {x}: multiplicity {k}")
    for x, grid in tab.B_set:
        print(f"B {x}: grid {' '.join(map(str, grid))}")
    return EXIT_OK


def cmd_count(args) -> int:
    preset = _resolve(args)
    require_valid(preset)
    n, dps = args.level, args.precision
    methods = METHODS if args.method == "all" else (args.method,)
    g = build_level(preset, n) if {"matrix-tree", "kirchhoff"} & set(methods) else None
    results = {}
    for meth in methods:
        if meth == "matrix-tree":
            results[meth] = count_matrix_tree(g, dps=dps)
        elif meth == "decimation":
            dd = decimation_data(preset)
            census, _ = degree_census_recursive(preset, n)
            results[meth] = count_decimation(dd, multiplicity_recursion(dd, preset, n),
                                             census, n, dps)
        else:
            results[meth] = count_kirchhoff_probabilistic(g, spectrum_numeric(g), dps)

    problems = []
    exact = [(m, r.value) for m, r in results.items() if r.value is not None]
    if len({v for _, v in exact}) > 1:
        problems.append("exact counts disagree: " + ", ".join(f"{m}={int_str(v)}" for m, v in exact))
    if "kirchhoff" in results and exact:
        with mpmath.workdps(dps + 10):
            ref = results[exact[0][0]].log_value
            rel = abs(mpmath.expm1(results["kirchhoff"].log_value - ref))
        if rel > KIRCHHOFF_RTOL:
            problems.append(f"probabilistic Kirchhoff off by relative {mpmath.nstr(rel, 3)}")

    doc = [r.to_dict(n, m) for m, r in results.items()]
    text = _dump(doc)
    _write(args.out, text)
    if args.json:
        sys.stdout.write(text)
    else:
        print(f"{preset.name} level {n}")
        for m, r in results.items():
            # the floating eigensolver carries about 15 significant digits
            ln = mpmath.nstr(r.log_value, dps if m != "kirchhoff" else 15)
            if r.value is not None:
                print(f"{m}: {int_str(r.value)}")
                print(f"  = {r.product_string()}")
            elif r.factorization is not None:
                print(f"{m}: {r.product_string()}")
            else:
                print(f"{m}: ~{mpmath.nstr(r.approx, 15)}")
            print(f"  ln = {ln}")
        if len(results) > 1 and not problems:
            print("agreement: ok")
    for msg in problems:
        print(f"mismatch: {msg}", file=sys.stderr)
    return EXIT_MISMATCH if problems else EXIT_OK


def cmd_entropy(args) -> int:
    preset = _resolve(args)
    require_valid(preset)
    dps = args.precision
    rep = entropy_report(preset, args.levels, dps)
    text = rep.to_json()
    _write(args.out, text)
    if args.json:
        sys.stdout.write(text)
        return EXIT_OK
    s = lambda x: mpmath.nstr(x, dps)
    for n, c in rep.sequence:
        print(f"c_{n} = {s(c)}")
    print(f"bounds: [{s(rep.lower_bound)}, {s(rep.upper_bound)}]")
    print(f"limit ({rep.method}): {s(rep.limit_estimate)}")
    if rep.error_estimate is not None:
        print(f"  estimated error: {mpmath.nstr(rep.error_estimate, 3)}")
    if rep.fit is not None:
        terms = ", ".join(f"{p}: {a}" for p, a, _, _ in rep.fit.coefficients)
        print(f"exponent leading coefficients: {terms}")
    return EXIT_OK


def cmd_verify(args) -> int:
    preset = _resolve(args)
    results = verify_preset(preset)
    ok = all(r.passed for r in results)
    doc = {"preset": preset.name, "passed": ok, "checks": [r.to_dict() for r in results]}
    text = _dump(doc)
    _write(args.out, text)
    sys.stdout.write(text)
    for r in results:
        if not r.passed:
            print(f"FAIL {r.name}: {r.detail}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_presets(args) -> int:
    rows = [{"name": p.name, "m": p.m, "V0": p.n_boundary, "V1": p.v1_count}
            for p in CATALOG.values()]
    text = _dump(rows)
    _write(args.out, text)
    if args.json:
        sys.stdout.write(text)
    else:
        for r in rows:
            print(f"{r['name']}: m={r['m']}, |V0|={r['V0']}, |V1|={r['V1']}")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "spectrum": cmd_spectrum,
    "count": cmd_count,
    "entropy": cmd_entropy,
    "verify": cmd_verify,
    "presets": cmd_presets,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with mpmath.workdps(args.precision + 10):
            return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PresetError, DecimationError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
