"""``srlie`` command-line front end.

Subcommands: dist, geodesic, cut, conjugate, locus, verify. Output is JSON
(default) or CSV; floats are rendered with 17 significant digits.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from dataclasses import dataclass

import numpy as np

from srlie.algebra import BasisKind
from srlie.cutconj import (
    AbnormalGeodesicError,
    LocusClass,
    conjugate_time,
    cut_time,
    in_cut_locus,
    in_first_conjugate_locus,
)
from srlie.distance import distance
from srlie.geodesics import GeodesicParams, geodesic, point_coordinates
from srlie.groups import GroupKind, InvalidPointError, So3RPoint, Su2RPoint
from srlie.roots import SolverError
from srlie.verify import run_suites

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3
ALPHA_NORMALIZE_TOL = 1e-6

SU2R_COLUMNS = ["t", "ReA", "ImA", "ReB", "ImB", "v"]
SO3R_COLUMNS = ["t"] + [f"c{i}{j}" for i in range(1, 4) for j in range(1, 4)] + ["v"]


class InputError(ValueError):
    """Bad command-line input (exit code 2)."""


@dataclass(frozen=True)
class CliConfig:
    group: GroupKind
    metric: BasisKind
    format: str
    tol: float
    seed: int = 0

    def __post_init__(self):
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise InputError(f"--tol must be a positive real, got {self.tol!r}")
        if self.format not in ("json", "csv"):
            raise InputError(f"--format must be json or csv, got {self.format!r}")


# ---------------------------------------------------------------- rendering


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        # strict JSON has no infinities; they travel as strings
        return json.dumps(fmt_float(x)) if not math.isfinite(x) else fmt_float(x)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    raise TypeError(f"cannot render {value!r}")


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    return str(value)


def render(rows: list[dict], fmt: str, single: bool) -> str:
    """Rows as a JSON object/array or as CSV with one header row (LF endings)."""
    if fmt == "json":
        return (_json_value(rows[0]) if single else _json_value(rows)) + "\n"
    buf = io.StringIO()
    header = list(rows[0].keys())
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_value(row[k]) for k in header) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------- parsing


_NUMERIC_VALUE = re.compile(r"^-(\d|\.\d|inf|nan)", re.IGNORECASE)


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Join "--flag -1,0" into "--flag=-1,0" so argparse does not read an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NUMERIC_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _reals(text: str, count: int, name: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{name} expects {count} comma-separated reals, got {text!r}") from None
    if len(vals) != count:
        raise InputError(f"{name} expects {count} comma-separated reals, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise InputError(f"{name} values must be finite")
    return vals


def _group(text: str) -> GroupKind:
    try:
        return GroupKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _metric(text: str) -> BasisKind:
    if text not in ("1", "2"):
        raise argparse.ArgumentTypeError(f"metric must be 1 or 2, got {text!r}")
    return BasisKind.parse(text)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", type=_group, default=GroupKind.SU2R, help="su2r or so3r")
    p.add_argument("--metric", type=_metric, default=BasisKind.D2, help="1 or 2")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float, default=1e-9)


def _add_point(p: argparse.ArgumentParser) -> None:
    p.add_argument("--A", help="re,im of A (su2r)")
    p.add_argument("--B", help="re,im of B (su2r)")
    p.add_argument("--C", help="nine row-major reals (so3r)")
    p.add_argument("--v", type=float, default=0.0)


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", help="a1,a2,a3 (normalized if within 1e-6 of unit norm)")
    p.add_argument("--phi0", type=float, help="angle of (a1, a3); use with --alpha2")
    p.add_argument("--alpha2", type=float, help="a2 when --phi0 is given")
    p.add_argument("--beta", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srlie",
        description="Sub-Riemannian distances, geodesics and cut loci on SU(2)xR and SO(3)xR.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance from the identity")
    _add_common(p)
    _add_point(p)

    p = sub.add_parser("geodesic", help="sample a geodesic")
    _add_common(p)
    _add_params(p)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--n", type=int, default=10, help="number of intervals (n+1 rows)")

    p = sub.add_parser("cut", help="cut time and branch")
    _add_common(p)
    _add_params(p)

    p = sub.add_parser("conjugate", help="n-th conjugate time")
    _add_common(p)
    _add_params(p)
    p.add_argument("--n", type=int, default=1)

    p = sub.add_parser("locus", help="cut / first-conjugate locus membership")
    _add_common(p)
    _add_point(p)

    p = sub.add_parser("verify", help="run seeded property suites")
    _add_common(p)
    p.add_argument("--suite", default="all",
                   choices=("ode", "roundtrip", "covering", "splitting", "monotonicity", "all"))
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deep", action="store_true", help="include the shooting-oracle suite")
    return parser


def parse_point(args, cfg: CliConfig):
    """Point from --A/--B/--v or --C/--v, validated within --tol and then projected."""
    if cfg.group is GroupKind.SU2R:
        if args.A is None or args.B is None or args.C is not None:
            raise InputError("su2r points need --A re,im and --B re,im (and no --C)")
        a = _reals(args.A, 2, "--A")
        b = _reals(args.B, 2, "--B")
        A, B = complex(*a), complex(*b)
        norm2 = abs(A) ** 2 + abs(B) ** 2
        if abs(norm2 - 1.0) > cfg.tol:
            raise InputError(f"|A|^2 + |B|^2 = {fmt_float(norm2)} is not 1 within {cfg.tol}")
        scale = 1.0 / math.sqrt(norm2)
        return Su2RPoint(A * scale, B * scale, args.v)
    if args.C is None or args.A is not None or args.B is not None:
        raise InputError("so3r points need --C with nine row-major reals (and no --A/--B)")
    C = np.array(_reals(args.C, 9, "--C")).reshape(3, 3)
    defect = float(np.max(np.abs(C.T @ C - np.eye(3))))
    if defect > cfg.tol:
        raise InputError(f"C is not orthogonal: max|C^T C - E| = {defect:.3e} > {cfg.tol}")
    if np.linalg.det(C) <= 0:
        raise InputError("C must have determinant +1")
    if defect > 0.0:
        u, _, vt = np.linalg.svd(C)
        C = u @ vt
    return So3RPoint(C, args.v)


def parse_params(args, cfg: CliConfig) -> GeodesicParams:
    if args.alpha is not None and args.phi0 is not None:
        raise InputError("give either --alpha or --phi0/--alpha2, not both")
    if not math.isfinite(args.beta):
        raise InputError("--beta must be finite")
    if args.alpha is not None:
        a = _reals(args.alpha, 3, "--alpha")
        try:
            return GeodesicParams.normalized(*a, args.beta, cfg.metric, cfg.group,
                                             tol=ALPHA_NORMALIZE_TOL)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if args.phi0 is None or args.alpha2 is None:
        raise InputError("geodesic parameters need --alpha a1,a2,a3 or --phi0 and --alpha2")
    if not (math.isfinite(args.phi0) and abs(args.alpha2) <= 1.0):
        raise InputError("--phi0 must be finite and |--alpha2| <= 1")
    return GeodesicParams.from_phi0(args.phi0, args.alpha2, args.beta, cfg.metric, cfg.group)


def _label(metric: BasisKind) -> int:
    return metric.value


# ---------------------------------------------------------------- commands


def cmd_dist(args, cfg: CliConfig) -> tuple[str, int]:
    point = parse_point(args, cfg)
    res = distance(point, cfg.metric)
    row = {"group": cfg.group.value, "metric": _label(cfg.metric), "value": res.value,
           "case_label": res.case_label, "xi": res.xi, "residual": res.residual}
    return render([row], cfg.format, single=True), EXIT_OK


def cmd_geodesic(args, cfg: CliConfig) -> tuple[str, int]:
    params = parse_params(args, cfg)
    if args.n < 1:
        raise InputError("--n must be a positive integer")
    if not (math.isfinite(args.t0) and math.isfinite(args.t1)):
        raise InputError("--t0/--t1 must be finite")
    # a degenerate range is a single sample
    times = [args.t0] if args.t0 == args.t1 else list(np.linspace(args.t0, args.t1, args.n + 1))
    cols = SU2R_COLUMNS if cfg.group is GroupKind.SU2R else SO3R_COLUMNS
    rows = []
    for t in times:
        coords = point_coordinates(geodesic(params, float(t)))
        rows.append(dict(zip(cols, [float(t)] + [float(c) for c in coords])))
    return render(rows, cfg.format, single=False), EXIT_OK


def cmd_cut(args, cfg: CliConfig) -> tuple[str, int]:
    info = cut_time(parse_params(args, cfg))
    row = {"cut_time": info.cut_time, "locus_class": info.locus_class.value,
           "first_conjugate_time": info.first_conjugate_time}
    return render([row], cfg.format, single=True), EXIT_OK


def cmd_conjugate(args, cfg: CliConfig) -> tuple[str, int]:
    params = parse_params(args, cfg)
    if args.n < 1:
        raise InputError("--n must be a positive integer")
    try:
        t = conjugate_time(params, args.n)
    except AbnormalGeodesicError:
        t = math.inf
    return render([{"n": args.n, "conjugate_time": t}], cfg.format, single=True), EXIT_OK


def cmd_locus(args, cfg: CliConfig) -> tuple[str, int]:
    point = parse_point(args, cfg)
    branch = in_cut_locus(point, cfg.group, cfg.metric, tol=cfg.tol)
    row = {"in_cut_locus": branch is not None,
           "cut_branch": branch.value if isinstance(branch, LocusClass) else None,
           "in_first_conjugate_locus": in_first_conjugate_locus(point, cfg.group, cfg.metric,
                                                                tol=cfg.tol)}
    return render([row], cfg.format, single=True), EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> tuple[str, int]:
    if args.count < 1:
        raise InputError("--count must be a positive integer")
    results = run_suites(args.suite, args.count, args.seed, deep=args.deep)
    rows = [{"suite": r.name, "samples": r.samples, "max_residual": r.max_residual,
             "tolerance": r.tolerance, "passed": r.passed, "failures": len(r.failures)}
            for r in results]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
    return render(rows, cfg.format, single=False), code


COMMANDS = {
    "dist": cmd_dist,
    "geodesic": cmd_geodesic,
    "cut": cmd_cut,
    "conjugate": cmd_conjugate,
    "locus": cmd_locus,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:  # argparse reports usage errors with exit 2
        return int(exc.code or 0)
    try:
        cfg = CliConfig(args.group, args.metric, args.format, args.tol,
                        getattr(args, "seed", 0))
        out, code = COMMANDS[args.command](args, cfg)
    except (InputError, InvalidPointError) as exc:
        print(f"srlie {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SolverError, AbnormalGeodesicError) as exc:
        print(f"srlie {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"srlie {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
