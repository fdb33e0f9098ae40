"""Command-line front end.

Every subcommand builds a :class:`Report`, prints one line per check and
optionally writes the report as key-sorted JSON. Exit codes: 0 all checks
pass, 1 some check fails, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .fock import (
    DEFAULT_TOLERANCE,
    PositivityError,
    build_fock_rep,
    equivalent_form_relation,
    spectrum_recursion,
    spectrum_value,
    verify_relations,
)
from .freealg import PresentationError, check_local_confluence, parse_presentation
from .hopf import FLOAT_TOLERANCE, GridConfig, make_solution, solve_hopf, verify_axioms
from .oscillator import SolutionType, build_solution_system, solution_params
from .scalar import Cyclotomic, UnitParam, cyc_root, rational, sqrt2

B_PRESETS = ("half", "sqrt-half", "one")


class UsageError(Exception):
    """Bad flags or configuration; maps to exit code 2."""


@dataclass
class Check:
    name: str
    kind: str  # "exact" or "float"
    residual: str | float | None
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "residual": self.residual, "pass": self.passed}


@dataclass
class Report:
    command: str
    parameters: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    engine_version: str = __version__

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def exact(self, name: str, residual: str, passed: bool | None = None) -> None:
        self.checks.append(Check(name, "exact", residual, residual == "0" if passed is None else passed))

    def float(self, name: str, residual: float, passed: bool) -> None:
        value: str | float = residual if math.isfinite(residual) else str(residual)
        self.checks.append(Check(name, "float", value, passed))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "checks": [c.to_dict() for c in self.checks],
            "notes": self.notes,
            "overall_pass": self.overall_pass,
            "engine_version": self.engine_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    def text(self) -> str:
        lines = [f"{self.command}: " + ", ".join(f"{k}={v}" for k, v in sorted(self.parameters.items()))]
        for c in self.checks:
            res = f"{c.residual:.3e}" if isinstance(c.residual, float) else c.residual
            lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.name}  [{c.kind}: {res}]")
        lines += [f"  note: {n}" for n in self.notes]
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{'PASS' if self.overall_pass else 'FAIL'}: {len(self.checks) - n_fail}/{len(self.checks)} checks")
        return "\n".join(lines)


# -- argument parsing -----------------------------------------------------------

def parse_B(text: str | None, t: SolutionType) -> tuple[Cyclotomic | None, str]:
    if text is None:
        return None, "default"
    if text == "half":
        return rational(Fraction(1, 2), 8), text
    if text == "sqrt-half":
        return sqrt2(8) * Fraction(1, 2), text
    if text == "one":
        return rational(1, 8), text
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--B must be one of {', '.join(B_PRESETS)} or a rational, got {text!r}") from None
    if value <= 0:
        raise UsageError("--B must be positive")
    return rational(value, 8), text


_ZETA = re.compile(r"^zeta\(\s*(\d+)\s*,\s*(-?\d+)\s*\)$")


def parse_scalar(text: str) -> Cyclotomic:
    """``i``, ``-i``, ``zeta(m,j)`` or a rational."""
    s = text.strip().replace(" ", "")
    sign = 1
    if s.startswith("-") and not s[1:].startswith(("0", "1", "2", "3", "4", "5", "6", "7", "8", "9")):
        sign, s = -1, s[1:]
    if s == "i":
        return cyc_root(4, 1) * sign
    mt = _ZETA.match(s)
    if mt:
        m, j = int(mt.group(1)), int(mt.group(2))
        if m < 1:
            raise UsageError(f"bad root of unity {text!r}")
        return cyc_root(m, j) * sign
    try:
        return rational(Fraction(s) * sign)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse scalar {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # one-line diagnostic, exit 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--k", type=int, default=3, help="exclusion order k >= 2 (default 3)")
    common.add_argument("--type", default="bosonic", help="solution type: bosonic or fermionic")
    common.add_argument("--B", dest="B", default=None,
                        help="normalization: half, sqrt-half, one or a positive rational such as 3/4")
    common.add_argument("--tolerance", type=float, default=None, help="float residual tolerance")
    common.add_argument("--json", dest="json_path", default=None, metavar="PATH", help="write the JSON report here")
    common.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes (default 1)")

    parser = _Parser(prog="exclusion-hopf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="exact ladder spectrum a_n^2")
    p.add_argument("--n", type=int, default=None, help="single level n (default: all 0..k)")

    sub.add_parser("verify-algebra", parents=[common], help="defining relations in the Fock representation")

    p = sub.add_parser("verify-hopf", parents=[common], help="braided Hopf axioms for a solution")
    p.add_argument("--q1", default=None, help="tamper: replace Q1 by this value (i, -1, zeta(m,j), ...)")

    p = sub.add_parser("solve", parents=[common], help="search the (z, Q1, D1, D2) grid for Hopf structures")
    p.add_argument("--grid", default=None, metavar="PATH", help="JSON grid configuration")

    sub.add_parser("verify-covariance", parents=[common], help="quantum-matrix covariance of the bosonic algebra")

    p = sub.add_parser("confluence", parents=[common], help="critical-pair audit of a rewrite system")
    p.add_argument("--max-overlap-len", type=int, default=3, help="longest overlap word (default 3)")
    p.add_argument("--system", choices=("oscillator", "t-matrix"), default="oscillator",
                   help="built-in system to audit (default oscillator)")
    p.add_argument("--presentation", default=None, metavar="PATH", help="audit a custom text presentation instead")
    return parser


# -- subcommands --------------------------------------------------------------------

def _params(args: argparse.Namespace, B_label: str, **extra: Any) -> dict[str, Any]:
    out = {"k": args.k, "type": args.type, "B": B_label, "tolerance": args.tolerance}
    out.update(extra)
    return out


def cmd_spectrum(args, t: SolutionType, B: Cyclotomic | None, report: Report) -> None:
    k = args.k
    levels = range(k + 1) if args.n is None else [args.n]
    if args.n is not None and not 0 <= args.n <= k:
        raise UsageError(f"--n must lie in 0..{k}")
    p = solution_params(t, k, B)
    for n in levels:
        val = spectrum_value(k, t, B, n)
        print(f"a_{n}^2 = {val}")
        report.notes.append(f"a_{n}^2 = {val}")
        diff = val - spectrum_recursion(p, n)
        report.exact(f"spectrum a_{n}^2 equals recursion", "0" if diff.is_zero() else str(diff))
        ok = val.is_real() and val.to_complex().real >= -1e-12
        report.exact(f"spectrum a_{n}^2 real and nonnegative", str(val), ok)
    top = spectrum_value(k, t, B, k)
    report.exact(f"highest state annihilated: a_{k}^2 = 0", str(top))


def cmd_verify_algebra(args, t: SolutionType, B: Cyclotomic | None, report: Report) -> None:
    tol = DEFAULT_TOLERANCE if args.tolerance is None else args.tolerance
    rep = build_fock_rep(args.k, t, B)
    rs = build_solution_system(t, args.k, B)
    extra = [("equivalent trigonometric form", equivalent_form_relation(t, args.k, B))]
    res = verify_relations(rep, rs, tol, extra)
    for e in res.entries:
        report.exact(f"relation: {e.label}", "0" if e.exact_zero else "nonzero", e.exact_zero)
        report.float(f"relation: {e.label}", e.float_residual, e.float_residual <= tol)


def _hopf_checks(ar, report: Report) -> None:
    for e in ar.entries:
        name = f"axiom: {e.axiom} ({e.args})" if e.args else f"axiom: {e.axiom}"
        if e.diagnostic:
            report.notes.append(f"diagnostic {name}: {'zero' if e.exact_zero else 'nonzero'}")
            continue
        report.exact(name, "0" if e.exact_zero else (e.detail or f"{e.exact_residual:.6g}"), e.exact_zero)
        if e.float_residual is not None:
            report.float(name, e.float_residual, e.float_residual <= e.tolerance)


def cmd_verify_hopf(args, t: SolutionType, B: Cyclotomic | None, report: Report) -> None:
    tol = FLOAT_TOLERANCE if args.tolerance is None else args.tolerance
    ans = make_solution(t, args.k, B)
    if args.q1 is not None:
        q1 = parse_scalar(args.q1)
        try:
            ans = replace(ans, Q1=UnitParam(q1.lift(math.lcm(q1.m, ans.m))))
        except ValueError as exc:
            raise UsageError(f"--q1: {exc}") from None
        report.parameters["q1"] = args.q1
        report.notes.append(f"Q1 tampered to {args.q1}")
    ar = verify_axioms(ans, tolerance=tol)
    if ar.note:
        report.notes.append(ar.note)
    _hopf_checks(ar, report)
    failing = sorted({e.axiom for e in ar.failures})
    if failing:
        print("failing axioms: " + ", ".join(failing))


def cmd_solve(args, t: SolutionType, B: Cyclotomic | None, report: Report) -> None:
    if args.grid is not None:
        try:
            grid = GridConfig.from_file(args.grid)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad grid config {args.grid}: {exc}") from None
        report.parameters["k"] = grid.k
    else:
        grid = GridConfig(args.k)
    result = solve_hopf(grid, workers=max(1, args.parallel))
    report.notes += result.notes
    report.notes.append(f"grid points evaluated: {result.evaluated}")
    for s in result:
        d = s.to_dict()
        name = f"solution z={d['z']} Q1={d['Q1']} D1={d['D1']} D2={d['D2']}"
        report.exact(name, "0" if s.residuals.passed else "nonzero", s.residuals.passed)
        report.notes.append(f"class ({d['class']}): Q2={d['Q2']} fock_positive={d['fock_positive']}")
    classes = sorted(result.classes())
    print("classes (z, Q1): " + ", ".join(f"({z}, {q})" for z, q in classes))
    report.notes.append("classes (z, Q1): " + ", ".join(f"({z}, {q})" for z, q in classes))
    report.float("rejected grid points: min residual >= 1e-3", result.min_rejected_residual,
                 result.min_rejected_residual >= 1e-3)


def cmd_verify_covariance(args, t: SolutionType, B: Cyclotomic | None, report: Report) -> None:
    from .covariance import (
        covariance_suite,
        derive_covariance_constraints,
        specialize_classical_limit,
        verify_tmatrix_hopf,
    )

    if t is not SolutionType.BOSONIC:
        report.notes.append("covariance is defined for the bosonic solution; --type ignored")
    for e in covariance_suite(args.k, B).entries:
        report.exact(f"covariance: {e.label}", "0" if e.exact_zero else e.surviving, e.exact_zero)
    cs = derive_covariance_constraints(args.k)
    for c in cs.constraints:
        report.exact(f"derived identity {c.name}", "0" if c.matches else str(c.derived), c.matches)
    report.exact("no unexpected oscillator monomials", "0" if not cs.unexpected else str(len(cs.unexpected)),
                 not cs.unexpected)
    report.notes += cs.conclusions
    for name, ok, detail in specialize_classical_limit(args.k).entries:
        report.exact(f"limit: {name}", "0" if ok else detail, ok)
        report.notes.append(detail)
    for e in verify_tmatrix_hopf(args.k, B).entries:
        report.exact(f"t-matrix {e.label}", "0" if e.exact_zero else e.surviving, e.exact_zero)


def cmd_confluence(args, t: SolutionType, B: Cyclotomic | None, report: Report) -> None:
    if args.max_overlap_len < 3:
        raise UsageError("--max-overlap-len must be at least 3")
    report.parameters["max_overlap_len"] = args.max_overlap_len
    if args.presentation is not None:
        try:
            rs = parse_presentation(Path(args.presentation).read_text())
        except (OSError, PresentationError) as exc:
            raise UsageError(f"bad presentation {args.presentation}: {exc}") from None
        report.parameters["system"] = f"presentation {Path(args.presentation).name}"
        fails = sorted(check_local_confluence(rs, args.max_overlap_len), key=lambda f: (len(f.word), f.word))
    elif args.system == "t-matrix":
        from .covariance import confluence_report

        report.parameters["system"] = "t-matrix"
        fails = confluence_report(args.k, args.max_overlap_len, B)
    else:
        report.parameters["system"] = "oscillator"
        rs = build_solution_system(t, args.k, B)
        fails = sorted(check_local_confluence(rs, args.max_overlap_len), key=lambda f: (len(f.word), f.word))
    report.exact("critical pairs resolve", "0" if not fails else f"{len(fails)} failing", not fails)
    for f in fails:
        report.exact(f"critical pair {' '.join(f.word)}", str(f), False)
    print(f"failing critical pairs: {len(fails)}")


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify-algebra": cmd_verify_algebra,
    "verify-hopf": cmd_verify_hopf,
    "solve": cmd_solve,
    "verify-covariance": cmd_verify_covariance,
    "confluence": cmd_confluence,
}


def run(argv: Sequence[str] | None = None) -> tuple[int, Report | None]:
    try:
        args = build_parser().parse_args(argv)
        if args.k < 2:
            raise UsageError(f"invalid k={args.k}: exclusion order must be >= 2")
        try:
            t = SolutionType.parse(args.type)
        except (ValueError, KeyError):
            raise UsageError(f"unknown type {args.type!r}: use bosonic or fermionic") from None
        if args.parallel < 1:
            raise UsageError("--parallel must be >= 1")
        if args.tolerance is not None and not args.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        B, B_label = parse_B(args.B, t)
        report = Report(args.command, _params(args, B_label, grid=getattr(args, "grid", None)))
        report.parameters["type"] = t.value
        try:
            COMMANDS[args.command](args, t, B, report)
        except PositivityError as exc:
            raise UsageError(str(exc)) from None
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    print(report.text())
    if args.json_path:
        Path(args.json_path).write_text(report.to_json())
    return (0 if report.overall_pass else 1), report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
