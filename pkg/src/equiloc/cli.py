"""Single executable exposing all computations as subcommands.

Identical invocations produce byte-identical stdout: all randomized
evaluations are driven by ``--seed`` (default 0) and every polynomial is
printed in the canonical term order.  Domain errors exit with code 1,
malformed input with code 2, both with a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import hyperbolicity, jets, localization, thom
from .algebra import parse_polynomial, term_list
from .errors import DomainError, EquilocError, InputError
from .residue import DEFAULT_CAP, residue_job


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def _fmt_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


def _emit(args, text_value, json_value):
    if args.format == "json":
        print(json.dumps(json_value, sort_keys=True, indent=2))
    else:
        print(text_value)


def _load_jet(path: str, n: int, k: int) -> jets.JetCurve:
    data = _load_json(path)
    if "coefficients" in data:
        rows, derivative = data["coefficients"], False
    elif "derivatives" in data:
        rows, derivative = data["derivatives"], True
    else:
        raise InputError(
            "jet file needs a 'coefficients' or 'derivatives' array")
    try:
        rows = [[Fraction(str(x)) for x in row] for row in rows]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"bad jet entry: {exc}") from exc
    if len(rows) != k or any(len(r) != n for r in rows):
        raise InputError(f"jet file must hold a {k} x {n} array")
    if derivative:
        return jets.JetCurve.from_derivatives(rows)
    return jets.JetCurve(rows)


def _load_qtable(path: str | None) -> thom.QTable:
    table = thom.QTable.builtin()
    if path is None:
        return table
    data = _load_json(path)
    for key in sorted(data):
        try:
            k = int(key)
        except ValueError as exc:
            raise InputError(f"bad order key in q-file: {key!r}") from exc
        table = table.with_entry(k, parse_polynomial(data[key]))
    return table


def _basis_labels(n: int, k: int) -> list[str]:
    labels = []
    for exps in jets.sym_basis(n, k):
        parts = [f"e{i + 1}" if e == 1 else f"e{i + 1}^{e}"
                 for i, e in enumerate(exps) if e]
        labels.append("*".join(parts))
    return labels


# -- subcommand handlers -------------------------------------------------

def _cmd_residue(args):
    job = _load_json(args.job)
    out = residue_job(job, cap=args.cap)
    _emit(args, out["residue"], out)


def _cmd_grass_integrate(args):
    cls = parse_polynomial(getattr(args, "class"))
    value = localization.grass_integrate(args.n, args.k, cls, seed=args.seed)
    _emit(args, _fmt_rat(value),
          {"n": args.n, "k": args.k, "class": getattr(args, "class"),
           "integral": _fmt_rat(value)})


def _cmd_flag_check(args):
    report = localization.run_flag_trials(args.n, args.d, args.trials,
                                          seed=args.seed, cap=args.cap)
    lines = [f"trial {r['trial']}: value={r['value']} match={r['match']}"
             for r in report["results"]]
    lines.append(f"all_match={report['all_match']}")
    _emit(args, "\n".join(lines), report)
    if not report["all_match"]:
        raise DomainError("fixed-point and residue values disagreed")


def _thom_json(result: thom.ThomResult) -> dict:
    return {"k": result.k, "codim": result.codim,
            "polynomial": str(result.polynomial),
            "terms": [[m, _fmt_rat(c)]
                      for m, c in term_list(result.polynomial)],
            "sign_calibration": result.sign_calibration}


def _cmd_thom(args):
    table = _load_qtable(args.q_file)
    result = thom.thom_polynomial(args.k, args.codim, table, cap=args.cap)
    _emit(args, str(result.polynomial), _thom_json(result))


def _cmd_thom_scan(args):
    table = _load_qtable(args.q_file)
    rows = []
    lines = []
    for k in range(1, args.kmax + 1):
        for codim in range(0, args.lmax + 1):
            result = thom.thom_polynomial(k, codim, table, cap=args.cap)
            entry = _thom_json(result)
            line = f"k={k} codim={codim}: {result.polynomial}"
            if args.check_positivity:
                report = thom.positivity_check(result)
                entry["negative_terms"] = [[m, _fmt_rat(c)]
                                           for m, c in report.negative_terms]
                line += ("  [all coefficients nonnegative]"
                         if report.all_nonnegative
                         else f"  [NEGATIVE: {report.negative_terms}]")
            rows.append(entry)
            lines.append(line)
    _emit(args, "\n".join(lines), rows)


def _cmd_gg(args):
    table = _load_qtable(args.q_file)
    result = hyperbolicity.intersection_polynomial(args.n, table,
                                                   cap=args.cap)
    payload = {"n": args.n, "polynomial": str(result.polynomial),
               "theta": _fmt_rat(result.theta),
               "leading": str(result.leading)}
    poly = result.polynomial
    if args.delta is not None:
        poly = poly.evaluate({hyperbolicity.DELTA_VAR: _rat(args.delta)})
        payload["delta"] = args.delta
    if args.d is not None:
        poly = poly.evaluate({hyperbolicity.D_VAR: _rat(args.d)})
        payload["d"] = args.d
    if args.delta is not None or args.d is not None:
        payload["value"] = str(poly)
    _emit(args, str(poly), payload)


def _cmd_theta(args):
    table = _load_qtable(args.q_file)
    value = hyperbolicity.leading_constant(args.n, table, cap=args.cap)
    _emit(args, _fmt_rat(value), {"n": args.n, "theta": _fmt_rat(value)})


def _cmd_euler(args):
    table = _load_qtable(args.q_file)
    d = _rat(args.d) if args.d is not None else None
    result = hyperbolicity.euler_characteristic(args.n, d, table,
                                                cap=args.cap)
    payload = {"n": args.n, "chi": str(result.chi)}
    if d is not None:
        payload["d"] = _fmt_rat(d)
    _emit(args, str(result.chi), payload)


def _matrix_strings(matrix):
    return [[_fmt_rat(x) for x in row] for row in matrix]


def _cmd_rho(args):
    curve = _load_jet(args.jet, args.n, args.k)
    matrix = _matrix_strings(jets.rho(curve))
    text = "\n".join("\t".join(row) for row in matrix)
    _emit(args, text, {"n": args.n, "k": args.k,
                       "basis": _basis_labels(args.n, args.k),
                       "matrix": matrix})


def _cmd_minors(args):
    curve = _load_jet(args.jet, args.n, args.k)
    minors = [_fmt_rat(x) for x in jets.invariant_minors(curve)]
    _emit(args, "\n".join(minors),
          {"n": args.n, "k": args.k, "minors": minors})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized weight draws")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="expansion-order cap of the residue engine")

    parser = argparse.ArgumentParser(
        prog="equiloc",
        description="exact localization / iterated-residue calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residue", parents=[common],
                       help="run a JSON residue job")
    p.add_argument("--job", required=True, help="path to the job file")
    p.set_defaults(func=_cmd_residue)

    p = sub.add_parser("grass-integrate", parents=[common],
                       help="intersection number on Grass(k, n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", required=True,
                   help="polynomial in c1..ck, e.g. 'c1^2*c2'")
    p.set_defaults(func=_cmd_grass_integrate)

    p = sub.add_parser("flag-check", parents=[common],
                       help="fixed-point vs residue identity trials")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=_cmd_flag_check)

    p = sub.add_parser("thom", parents=[common],
                       help="singularity-locus polynomial")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--codim", type=int, default=0)
    p.add_argument("--q-file", default=None,
                   help="JSON map of extra numerator polynomials")
    p.set_defaults(func=_cmd_thom)

    p = sub.add_parser("thom-scan", parents=[common],
                       help="table of polynomials over a (k, codim) range")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--check-positivity", action="store_true")
    p.add_argument("--q-file", default=None)
    p.set_defaults(func=_cmd_thom_scan)

    p = sub.add_parser("gg", parents=[common],
                       help="hypersurface intersection polynomial p(n, d, delta)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", default=None)
    p.add_argument("--d", default=None)
    p.add_argument("--q-file", default=None)
    p.set_defaults(func=_cmd_gg)

    p = sub.add_parser("theta", parents=[common],
                       help="leading-coefficient constant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q-file", default=None)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("euler", parents=[common],
                       help="Euler characteristic of the weight-m jet sheaf")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", default=None, help="hypersurface degree; "
                   "omit to keep it symbolic")
    p.add_argument("--q-file", default=None)
    p.set_defaults(func=_cmd_euler)

    p = sub.add_parser("rho", parents=[common],
                       help="jet embedding matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--jet", required=True, help="path to the jet file")
    p.set_defaults(func=_cmd_rho)

    p = sub.add_parser("minors", parents=[common],
                       help="maximal minors of the jet embedding matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--jet", required=True, help="path to the jet file")
    p.set_defaults(func=_cmd_minors)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}),
              file=sys.stderr)
        return 2
    except EquilocError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
