"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numeric failure (oracle did not
converge). Machine formats (json, csv) print floats with 17 significant
digits; text output uses 7.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .geometry import RegionSyntaxError, as_region, parse_region
from .oracle import OracleConvergenceError, poisson_solve, torsion_oracle
from .spectrum import NoExactRepresentation, enumerate_spectrum, isospectral_check

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

DEFAULTS = {"cutoff": "2000", "grid": 256, "tol": 1e-5, "format": "text"}


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# formatting


def dumps(obj) -> str:
    """JSON with every float written as ``%.17g``."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(None)
        text = f"{obj:.17g}"
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return dumps(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _g17(x: float) -> str:
    return f"{x:.17g}"


def _g7(x: float) -> str:
    return f"{x:.7g}"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _parse_cutoff(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None
    if q <= 0:
        raise UsageError(f"bound must be positive, got {text}")
    return q


def _parse_times(text: str) -> list[float]:
    try:
        ts = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"malformed --times {text!r}") from None
    if not ts or any(not (t > 0 and math.isfinite(t)) for t in ts):
        raise UsageError("--times needs positive values")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise UsageError("--times must be strictly ascending")
    return ts


# ---------------------------------------------------------------------------
# subcommands


def cmd_torsion(args) -> str:
    from .torsion import torsion_region_closed, torsion_spectral

    region = parse_region(args.region)
    method = args.method
    if method == "closed":
        res = torsion_region_closed(region)
        payload = res.to_json()
    elif method == "spectral":
        res = torsion_spectral(region, _parse_cutoff(args.cutoff), args.coeff)
        payload = res.to_json()
    elif method == "oracle":
        results = [torsion_oracle(s, args.tol) for s in region.components]
        if not all(r.converged for r in results):
            raise NumericFailure("oracle grid budget exhausted before reaching tolerance")
        payload = {
            "value": math.fsum(r.value for r in results),
            "method": "oracle",
            "tail": math.fsum(r.estimated_error for r in results),
            "cutoff": None,
        }
    else:  # fdm
        fields = [poisson_solve(s, args.grid) for s in region.components]
        if args.dump_field:
            with open(args.dump_field, "w") as fh:
                fh.write("".join(f.to_text() for f in fields))
        payload = {
            "value": math.fsum(f.torsion() for f in fields),
            "method": "oracle",
            "tail": None,
            "cutoff": None,
            "grid": args.grid,
        }
    if args.format == "json":
        return dumps(payload) + "\n"
    if args.format == "csv":
        keys = list(payload)
        return _csv([keys, [_g17(v) if isinstance(v, float) else ("" if v is None else v) for v in payload.values()]])
    return _g7(payload["value"]) + "\n"


def cmd_spectrum(args) -> str:
    sl = enumerate_spectrum(parse_region(args.region), _parse_cutoff(args.bound))
    if args.format == "json":
        return dumps(sl.to_json()) + "\n"
    if args.format == "csv":
        rows = [["lambda_over_pi2", "mult", "modes"]]
        for line in sl.lines:
            rows.append(
                [
                    f"{line.value.numerator}/{line.value.denominator}",
                    line.mult,
                    ";".join(f"{s}:{j}:{k}" for s, j, k in line.modes),
                ]
            )
        return _csv(rows)
    out = [f"# eigenvalues / pi^2 <= {sl.bound}  (count {sl.count()})"]
    for line in sl.lines:
        q = line.value
        out.append(f"{str(q):>12}  {_g7(float(q)):>12}  x{line.mult}")
    return "\n".join(out) + "\n"


def cmd_isospectral(args) -> str:
    rep = isospectral_check(parse_region(args.a), parse_region(args.b), _parse_cutoff(args.bound))
    data = rep.to_json()
    if args.format == "json":
        return dumps(data) + "\n"
    if args.format == "csv":
        return _csv([list(data), ["" if v is None else v for v in data.values()]])
    lines = [f"isospectral: {'true' if rep.equal else 'false'}", f"bound: {data['bound']}"]
    lines.append(f"eigenvalues counted: {rep.count_a} vs {rep.count_b}")
    if rep.first_mismatch is not None:
        lines.append(f"first mismatch: {data['first_mismatch']}")
    return "\n".join(lines) + "\n"


def cmd_chapman(args) -> str:
    from .chapman import chapman_report

    rep = chapman_report(_parse_cutoff(args.cutoff), args.tol)
    if rep.verdict_sign == "indeterminate" and "oracle" not in rep.torsion_by_method:
        raise NumericFailure("; ".join(rep.audit_notes) or "oracle failed")
    data = rep.to_json()
    if args.format == "json":
        return dumps(data) + "\n"
    if args.format == "csv":
        rows = [["method", "C1", "C2", "diff"]]
        for m, v in rep.torsion_by_method.items():
            rows.append([m, _g17(v["C1"]), _g17(v["C2"]), _g17(v["diff"])])
        return _csv(rows)
    out = [f"isospectral up to {data['bound']} pi^2: {'true' if rep.isospectral else 'false'}", ""]
    out.append(f"{'method':<16}{'T(C1)':>14}{'T(C2)':>14}{'diff':>14}")
    for m, v in rep.torsion_by_method.items():
        out.append(f"{m:<16}{_g7(v['C1']):>14}{_g7(v['C2']):>14}{_g7(v['diff']):>14}")
    out.append("")
    out.append(f"printed triangle difference   {_g7(rep.paper_eq8)}")
    out.append(f"printed rectangle difference  {_g7(rep.paper_eq9)}  (recomputed {_g7(rep.paper_eq9_direct)})")
    out.append(f"printed series sum D          {_g7(rep.paper_D)}")
    out.append(f"printed bound 1/60 - 24*31/(32 pi^5)  {_g7(rep.paper_bound)}")
    out.append("")
    out.append(f"verdict: T(C1) - T(C2) is {rep.verdict_sign}")
    out.extend(f"audit: {n}" for n in rep.audit_notes)
    return "\n".join(out) + "\n"


def cmd_heat(args) -> str:
    from .heat import heat_content, heat_difference_curve

    times = _parse_times(args.times)
    cutoff = _parse_cutoff(args.cutoff)
    a = parse_region(args.a)
    if args.b is None:
        vals = heat_content(a, times, cutoff, args.coeff)
        if args.format == "json":
            return dumps({"t": times, "Q_a": vals}) + "\n"
        fmt = _g17 if args.format == "csv" else _g7
        rows = [["t", "Q_a"]] + [[fmt(t), fmt(q)] for t, q in zip(times, vals)]
        return _csv(rows) if args.format == "csv" else "\n".join("  ".join(r) for r in rows) + "\n"
    cmp = heat_difference_curve(a, parse_region(args.b), times, cutoff, args.coeff)
    if args.format == "csv":
        return cmp.to_csv()
    if args.format == "json":
        return dumps(
            {
                "t": cmp.times,
                "Q_a": cmp.curve_a.values,
                "Q_b": cmp.curve_b.values,
                "diff": cmp.diff,
                "truncation": cmp.truncation,
            }
        ) + "\n"
    rows = [f"{'t':>12}{'Q_a':>16}{'Q_b':>16}{'diff':>16}"]
    for t, qa, qb, d in zip(cmp.times, cmp.curve_a.values, cmp.curve_b.values, cmp.diff):
        rows.append(f"{_g7(t):>12}{_g7(qa):>16}{_g7(qb):>16}{_g7(d):>16}")
    return "\n".join(rows) + "\n"


def cmd_audit(args) -> str:
    from .chapman import (
        coefficient_audit,
        eq8_from_triangle_formula,
        eval_paper_eq8,
        eval_paper_eq9,
        proof_bound_chain,
    )
    from .spectrum import tri_coefficient_exact, tri_coefficient_paper, tri_coefficient_quadrature
    from .torsion import rayleigh_lower_bound, torsion_spectral, torsion_tri_closed_paper

    cutoff = _parse_cutoff(args.cutoff)
    oracle = torsion_oracle(as_region("tri:1")[0], args.tol)
    if not oracle.converged:
        raise NumericFailure("oracle grid budget exhausted before reaching tolerance")
    coeffs = []
    for m in ((1, 2), (1, 4), (2, 3), (3, 4)):
        coeffs.append(
            {
                "mode": list(m),
                "printed": tri_coefficient_paper(1, m),
                "exact": tri_coefficient_exact(1, m),
                "quadrature": tri_coefficient_quadrature(1, m),
            }
        )
    eq9 = eval_paper_eq9()
    chain = proof_bound_chain()
    data = {
        "triangle_coefficients": coeffs,
        "tri1_torsion": {
            "closed_printed": torsion_tri_closed_paper(1).value,
            "spectral_printed": torsion_spectral("tri:1", cutoff, "paper").value,
            "spectral_exact": torsion_spectral("tri:1", cutoff, "exact").value,
            "oracle": oracle.value,
            "oracle_error": oracle.estimated_error,
            "variational_lower_bound": float(rayleigh_lower_bound()),
        },
        "triangle_difference": {"printed": eval_paper_eq8(), "from_closed_form": eq8_from_triangle_formula()},
        "rectangle_difference": {"printed": eq9.printed, "direct": eq9.direct, "flagged": eq9.flagged},
        "bound_chain": {
            "coth_sum": chain.coth_sum,
            "zeta5_bound": chain.zeta5_bound,
            "final_bound": chain.final_bound,
            "holds": chain.holds,
        },
        "notes": coefficient_audit(),
    }
    if args.format == "json":
        return dumps(data) + "\n"
    if args.format == "csv":
        rows = [["quantity", "value"]]
        for section, vals in data.items():
            if isinstance(vals, dict):
                for k, v in vals.items():
                    rows.append([f"{section}.{k}", _g17(v) if isinstance(v, float) else v])
        return _csv(rows)
    t = data["tri1_torsion"]
    out = ["triangle coefficients on tri:1 (printed / exact / quadrature):"]
    for c in coeffs:
        out.append(
            f"  a{tuple(c['mode'])}: {_g7(c['printed'])} / {_g7(c['exact'])} / {_g7(c['quadrature'])}"
        )
    out.append("tri:1 torsion:")
    for k in ("closed_printed", "spectral_printed", "spectral_exact", "oracle", "variational_lower_bound"):
        out.append(f"  {k:<24}{_g7(t[k])}")
    out.append(
        f"triangle difference: printed {_g7(data['triangle_difference']['printed'])}, "
        f"from closed form {_g7(data['triangle_difference']['from_closed_form'])}"
    )
    out.append(
        f"rectangle difference: printed {_g7(eq9.printed)}, recomputed {_g7(eq9.direct)}"
        + ("  [MISMATCH]" if eq9.flagged else "")
    )
    out.append(
        f"bound chain: coth sum {_g7(chain.coth_sum)} > {_g7(chain.zeta5_bound)}; "
        f"final {_g7(chain.final_bound)} ({'holds' if chain.holds else 'fails'})"
    )
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=DEFAULTS["format"])
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = _Parser(prog="torsionlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("torsion", parents=[common], help="torsional rigidity of a region")
    t.add_argument("region")
    t.add_argument("--method", choices=("closed", "spectral", "oracle", "fdm"), default="closed")
    t.add_argument("--coeff", choices=("paper", "exact"), default="exact")
    t.add_argument("--cutoff", default=DEFAULTS["cutoff"])
    t.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    t.add_argument("--grid", "-N", type=int, default=DEFAULTS["grid"])
    t.add_argument("--dump-field", help="with --method fdm, write the mesh solution as text")
    t.set_defaults(func=cmd_torsion)

    s = sub.add_parser("spectrum", parents=[common], help="exact Dirichlet eigenvalues")
    s.add_argument("region")
    s.add_argument("--bound", required=True, help="rational p/q, in units of pi^2")
    s.set_defaults(func=cmd_spectrum)

    i = sub.add_parser("isospectral", parents=[common], help="compare two spectra exactly")
    i.add_argument("a")
    i.add_argument("b")
    i.add_argument("--bound", required=True)
    i.set_defaults(func=cmd_isospectral)

    c = sub.add_parser("chapman", parents=[common], help="full Chapman-pair report")
    c.add_argument("--cutoff", default=DEFAULTS["cutoff"])
    c.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    c.set_defaults(func=cmd_chapman)

    h = sub.add_parser("heat", parents=[common], help="spectral heat content")
    h.add_argument("a")
    h.add_argument("b", nargs="?")
    h.add_argument("--times", required=True, help="comma-separated ascending times")
    h.add_argument("--cutoff", default=DEFAULTS["cutoff"])
    h.add_argument("--coeff", choices=("paper", "exact"), default="exact")
    h.set_defaults(func=cmd_heat)

    a = sub.add_parser("audit", parents=[common], help="printed formulas vs independent checks")
    a.add_argument("--cutoff", default=DEFAULTS["cutoff"])
    a.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    a.set_defaults(func=cmd_audit)
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "tol", 1e-5) is not None and getattr(args, "tol", 1e-5) < 1e-7:
            raise UsageError("--tol must be at least 1e-7")
        if getattr(args, "grid", 8) < 8:
            raise UsageError("--grid must be at least 8")
        text = args.func(args)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except RegionSyntaxError as exc:
        print(f"torsionlab: {exc}", file=stderr)
        return EXIT_USAGE
    except (NoExactRepresentation, ValueError) as exc:
        print(f"torsionlab: {exc}", file=stderr)
        return EXIT_USAGE
    except (NumericFailure, OracleConvergenceError) as exc:
        print(f"torsionlab: numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
