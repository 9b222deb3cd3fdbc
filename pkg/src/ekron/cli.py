"""Command-line front end.

    ekron compute    --field q --r 0..2 --xmax 1e6 --routes dirichlet,ihara --format json
    ekron crosscheck --cyclo 5 --r 0..3 --xmax 1e7 --routes dirichlet,ihara
    ekron scan       --quad-range -50..-3 --r 1 --xmax 1e6

Exit codes: 0 success, 2 invalid arguments, 3 missing or bad input data,
4 cross-check failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .arithmetic_stream import export_stream_csv, lambda_stream
from .ek_core import (
    ZeroTableError,
    bundled_zeta_zeros,
    ek_dirichlet,
    ek_ihara,
    ek_integral,
    ek_zero_sum,
    grh_bound,
    load_zero_table,
)
from .laurent_engine import EKEstimate
from .number_fields import (
    SplittingDataError,
    field_from_cyclotomic,
    field_from_fundamental_discriminant,
    field_from_quadratic,
    field_from_table,
    field_rational,
    is_fundamental_discriminant,
    load_splitting_table,
)
from .special_functions import R_MAX

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CROSSCHECK = 0, 2, 3, 4

ROUTES = {"dirichlet": "dirichlet", "ihara": "ihara", "integral": "integral", "zerosum": "zero_sum",
          "zero_sum": "zero_sum"}
MIN_R = {"dirichlet": 0, "ihara": 0, "integral": 1, "zero_sum": 1}
COMPUTE_COLUMNS = ["field", "r", "route", "value", "error_bar", "x_used"]
SCAN_COLUMNS = ["field", "D", "r", "value", "error_bar", "x_used", "grh_main_term", "uncond_scale", "ratio",
                "grh_ratio"]


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _num(v) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def parse_range(text: str) -> list[int]:
    """'0..3' -> [0, 1, 2, 3]; '1,3' -> [1, 3]; '2' -> [2]."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse range {text!r}") from None


def parse_xmax(text: str) -> int:
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"--xmax must be a number, got {text!r}") from None
    if v != int(v) or v < 2:
        raise UsageError(f"--xmax must be an integer >= 2, got {text!r}")
    return int(v)


@dataclass(frozen=True)
class RunConfig:
    fields: tuple
    rs: tuple[int, ...]
    x_max: int
    checkpoints: tuple[float, ...] | None
    routes: tuple[str, ...]
    zeros: object
    density_constant: float
    fmt: str
    output: str | None
    threads: int
    export_stream: str | None = None


def _select_field(args):
    chosen = [a for a in ("field", "quad", "cyclo", "custom") if getattr(args, a, None) is not None]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --field q, --quad d, --cyclo m, --custom path")
    try:
        if args.field is not None:
            if args.field.lower() not in ("q", "rational"):
                raise UsageError(f"--field accepts only 'q', got {args.field!r}")
            return field_rational()
        if args.quad is not None:
            return field_from_quadratic(args.quad)
        if args.cyclo is not None:
            return field_from_cyclotomic(args.cyclo)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        with open(args.custom, "rb") as fh:
            table = load_splitting_table(fh)
        return field_from_table(table, label=os.path.basename(args.custom))
    except OSError as exc:
        raise DataError(f"cannot read splitting table: {exc}") from None
    except SplittingDataError as exc:
        raise DataError(str(exc)) from None


def _threads(args) -> int:
    if args.threads is not None:
        t = args.threads
    else:
        env = os.environ.get("EKRON_THREADS")
        try:
            t = int(env) if env else 1
        except ValueError:
            raise UsageError(f"EKRON_THREADS must be an integer, got {env!r}") from None
    if t < 1:
        raise UsageError("thread count must be positive")
    return t


def build_config(args, fields=None) -> RunConfig:
    rs = tuple(parse_range(args.r))
    if not rs or min(rs) < 0 or max(rs) > R_MAX:
        raise UsageError(f"r-range must lie within 0..{R_MAX}")
    routes = []
    for name in args.routes.split(","):
        name = name.strip()
        if name not in ROUTES:
            raise UsageError(f"unknown route {name!r}; choose from dirichlet, ihara, integral, zerosum")
        if ROUTES[name] not in routes:
            routes.append(ROUTES[name])
    if not routes:
        raise UsageError("at least one route is required")
    checkpoints = None
    if getattr(args, "checkpoints", None):
        try:
            checkpoints = tuple(float(v) for v in args.checkpoints.split(","))
        except ValueError:
            raise UsageError(f"bad --checkpoints {args.checkpoints!r}") from None
    x_max = parse_xmax(args.xmax)
    if checkpoints and max(checkpoints) > x_max:
        raise UsageError("checkpoints must not exceed --xmax")
    if fields is None:
        fields = (_select_field(args),)
    zeros = None
    if "zero_sum" in routes:
        if max(rs) < 1 and routes == ["zero_sum"]:
            raise UsageError("the zero-sum route needs r >= 1")
        if not getattr(args, "zeros", None):
            raise DataError("zero table required for the zerosum route (--zeros PATH or --zeros builtin)")
        try:
            zeros = bundled_zeta_zeros() if args.zeros == "builtin" else load_zero_table(args.zeros)
        except OSError as exc:
            raise DataError(f"cannot read zero table: {exc}") from None
        except ZeroTableError as exc:
            raise DataError(str(exc)) from None
    return RunConfig(
        fields=tuple(fields),
        rs=rs,
        x_max=x_max,
        checkpoints=checkpoints,
        routes=tuple(routes),
        zeros=zeros,
        density_constant=getattr(args, "density_constant", 1.0),
        fmt=args.format,
        output=args.output,
        threads=_threads(args),
        export_stream=getattr(args, "export_stream", None),
    )


def _run_job(job):
    field, r, route, stream, cfg = job
    kw = {"checkpoints": cfg.checkpoints, "stream": stream}
    if route == "dirichlet":
        return ek_dirichlet(field, r, cfg.x_max, **kw)
    if route == "ihara":
        return ek_ihara(field, r, cfg.x_max, **kw)
    if route == "integral":
        return ek_integral(field, r, cfg.x_max, **kw)
    return ek_zero_sum(field, r, cfg.zeros, cfg.density_constant)


def run_jobs(cfg: RunConfig) -> list[EKEstimate]:
    """Estimates for every applicable (field, r, route), in that nesting order."""
    needs_stream = any(r != "zero_sum" for r in cfg.routes)
    try:
        streams = {}
        for f in cfg.fields:
            if needs_stream:
                streams[f] = lambda_stream(f, cfg.x_max, threads=cfg.threads)
        if cfg.export_stream and cfg.fields and needs_stream:
            export_stream_csv(streams[cfg.fields[0]], cfg.export_stream)
        jobs = [
            (f, r, route, streams.get(f), cfg)
            for f, r, route in itertools.product(cfg.fields, cfg.rs, cfg.routes)
            if r >= MIN_R[route]
        ]
        if cfg.threads > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
                return list(ex.map(_run_job, jobs))
        return [_run_job(j) for j in jobs]
    except SplittingDataError as exc:
        raise DataError(str(exc)) from None


def estimate_record(est: EKEstimate) -> dict:
    return {
        "field": est.field_label,
        "r": est.r,
        "route": est.route,
        "value": est.value,
        "error_bar": est.error_bar,
        "x_used": est.x_used,
        "raw_partial": est.raw_partial,
        "metadata": est.metadata,
    }


def render_json(records: list[dict]) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, "records": records}, indent=1, sort_keys=True) + "\n"


def render_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_num(row[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(cfg: RunConfig) -> int:
    records = [estimate_record(e) for e in run_jobs(cfg)]
    text = render_json(records) if cfg.fmt == "json" else render_csv(records, COMPUTE_COLUMNS)
    _emit(text, cfg.output)
    return EXIT_OK


def crosscheck_report(estimates: list[EKEstimate]) -> list[dict]:
    groups: dict[tuple[str, int], list[EKEstimate]] = {}
    for e in estimates:
        groups.setdefault((e.field_label, e.r), []).append(e)
    rows = []
    for (label, r), ests in groups.items():
        worst_diff, worst_bar, ok = 0.0, 0.0, True
        for a, b in itertools.combinations(ests, 2):
            d, bar = abs(a.value - b.value), a.error_bar + b.error_bar
            ok &= d <= bar
            if d - bar >= worst_diff - worst_bar or worst_diff == 0.0:
                worst_diff, worst_bar = d, bar
        flags = sorted({f"{e.route}:{fl}" for e in ests for fl in e.metadata.get("flags", ())})
        converged = all(e.converged for e in ests)
        rows.append({
            "field": label,
            "r": r,
            "routes": "+".join(e.route for e in ests),
            "max_diff": worst_diff,
            "error_bar_sum": worst_bar,
            "status": "pass" if ok and converged and len(ests) > 1 else "fail",
            "flags": ";".join(flags),
        })
    return rows


def cmd_crosscheck(cfg: RunConfig) -> int:
    if len(cfg.routes) < 2:
        raise UsageError("crosscheck needs at least two routes")
    rows = crosscheck_report(run_jobs(cfg))
    cols = ["field", "r", "routes", "max_diff", "error_bar_sum", "status", "flags"]
    if cfg.fmt == "json":
        text = json.dumps({"schema": SCHEMA_VERSION, "crosscheck": rows}, indent=1, sort_keys=True) + "\n"
    else:
        text = render_csv(rows, cols)
    _emit(text, cfg.output)
    return EXIT_OK if all(r["status"] == "pass" for r in rows) else EXIT_CROSSCHECK


def scan_family(lo: int, hi: int) -> list:
    return [field_from_fundamental_discriminant(D) for D in range(lo, hi + 1)
            if abs(D) >= 3 and is_fundamental_discriminant(D)]


def _scan_one(job):
    field, r, x_max, checkpoints = job
    est = ek_dirichlet(field, r, x_max, checkpoints=checkpoints)
    rep = grh_bound(field, r, est)
    return {
        "field": field.label,
        "D": field.disc,
        "r": r,
        "value": est.value,
        "error_bar": est.error_bar,
        "x_used": est.x_used,
        "grh_main_term": rep.grh_main_term,
        "uncond_scale": rep.uncond_scale,
        "ratio": rep.ratio,
        "grh_ratio": rep.grh_ratio,
    }


def cmd_scan(cfg: RunConfig) -> int:
    if not cfg.fields:
        raise UsageError("no fundamental discriminants in the requested range")
    if min(cfg.rs) < 1:
        raise UsageError("scan reports bounds, which are stated for r >= 1")
    jobs = [(f, r, cfg.x_max, cfg.checkpoints) for f in cfg.fields for r in cfg.rs]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            rows = list(ex.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    _emit(render_csv(rows, SCAN_COLUMNS), cfg.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ekron", description="Higher Euler-Kronecker constants of number fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, field_flags=True, routes_default="dirichlet", r_default="0"):
        if field_flags:
            g = p.add_argument_group("field selection")
            g.add_argument("--field", help="'q' for the rationals")
            g.add_argument("--quad", type=int, metavar="D", help="Q(sqrt(d)) for squarefree d")
            g.add_argument("--cyclo", type=int, metavar="M", help="Q(zeta_m), m >= 3, m != 2 mod 4")
            g.add_argument("--custom", metavar="PATH", help="splitting-table CSV")
        p.add_argument("--r", default=r_default, help=f"orders, e.g. 0..3 or 1,2 (default {r_default})")
        p.add_argument("--xmax", default="1e6", help="truncation point (default 1e6)")
        p.add_argument("--checkpoints", help="comma-separated checkpoints (default: 8 geometric over two decades)")
        p.add_argument("--routes", default=routes_default, help="comma list of dirichlet, ihara, integral, zerosum")
        p.add_argument("--zeros", help="zero-table file, or 'builtin' for the bundled zeta zeros")
        p.add_argument("--density-constant", type=float, default=1.0, help="zero-sum tail constant (default 1)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write results here instead of stdout")
        p.add_argument("--threads", type=int, help="worker threads (fallback: $EKRON_THREADS, else 1)")

    p = sub.add_parser("compute", help="compute gamma_{K,r} by the selected routes")
    common(p)
    p.add_argument("--export-stream", metavar="PATH", help="also write the Lambda_K stream as CSV n,value")
    p = sub.add_parser("crosscheck", help="compare routes against their error bars")
    common(p, routes_default="dirichlet,ihara")
    p = sub.add_parser("scan", help="batch over quadratic fields with bound diagnostics (CSV)")
    common(p, field_flags=False, r_default="1")
    p.add_argument("--quad-range", required=True, metavar="LO..HI", help="range of fundamental discriminants")
    return parser


def _glue_ranges(argv: list[str]) -> list[str]:
    # argparse reads "-500..-3" as an option; attach it to its flag
    out = []
    for tok in argv:
        if out and out[-1] in ("--quad-range", "--r") and tok.startswith("-"):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_ranges(list(sys.argv[1:] if argv is None else argv)))
    try:
        if args.command == "scan":
            bounds = parse_range(args.quad_range)
            if ".." not in args.quad_range or not bounds:
                raise UsageError("--quad-range must look like LO..HI")
            args.format = "csv"
            cfg = build_config(args, fields=scan_family(bounds[0], bounds[-1]))
            return cmd_scan(cfg)
        cfg = build_config(args)
        if args.command == "compute":
            return cmd_compute(cfg)
        return cmd_crosscheck(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ekron: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"ekron: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
