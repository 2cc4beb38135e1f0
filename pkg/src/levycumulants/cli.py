"""Command line entry point.

Exit codes: 0 success, 1 input error, 2 verification failure, 3 capacity error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, default_config
from .multiindex import CapacityError, as_multi_index, enumerate_p2_partitions, enumerate_partitions
from .rho_alpha import ModelError, normalized_cumulant, rho_alpha_cumulant, scan
from . import verification

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CAPACITY = 0, 1, 2, 3

CSV_COLUMNS = ("param_name", "param_value", "t", "i", "j", "raw", "normalized")


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def fmt(x: float | None) -> str:
    """At most 12 significant digits; 'NA' for a missing value."""
    if x is None:
        return "NA"
    return f"{x:.12g}"


def parse_index(text: str):
    try:
        return as_multi_index([int(v) for v in text.split(",")])
    except ValueError as exc:
        raise InputError(f"bad multi-index {text!r}: {exc}") from None


def _load(args) -> RunConfig:
    return RunConfig.load(args.config) if args.config else default_config()


def _overrides(cfg: RunConfig, args) -> None:
    if getattr(args, "rho12", None) is not None:
        if len(cfg.model.rho) < 2:
            raise InputError("--rho12 needs at least two assets")
        cfg.model.rho[0][1] = cfg.model.rho[1][0] = args.rho12
    if getattr(args, "a", None) is not None:
        cfg.model.a = args.a


def cmd_cumulant(args, out) -> int:
    cfg = _load(args)
    _overrides(cfg, args)
    model = cfg.validate()
    i = parse_index(args.index)
    raw = rho_alpha_cumulant(model, i, args.t)
    norm = normalized_cumulant(model, i, args.t) if sum(i) >= 2 else None
    out.write(f"index = ({','.join(map(str, i))})\n")
    out.write(f"t = {fmt(args.t)}\n")
    out.write(f"raw = {fmt(raw)}\n")
    out.write(f"normalized = {fmt(norm)}\n")
    return EXIT_OK


def scan_rows(cfg: RunConfig, workers: int = 1) -> list[tuple]:
    model = cfg.validate()
    if model.n != 2:
        raise InputError(f"scan output has (i, j) columns and needs a bivariate model, got n={model.n}")
    grid = cfg.scan.grid()
    tables = scan(model, cfg.scan.param, grid, cfg.orders, cfg.times, workers)
    rows = []
    for value, table in zip(grid, tables):
        for (i, j), t, raw, norm in table.rows():
            rows.append((cfg.scan.param, value, t, i, j, raw, norm))
    rows.sort(key=lambda r: (r[1], r[2], r[3], r[4]))
    return rows


def render_rows(rows, fmt_name: str) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for name, value, t, i, j, raw, norm in rows:
            w.writerow([name, fmt(value), fmt(t), i, j, fmt(raw), fmt(norm)])
        return buf.getvalue()
    objs = [
        {
            "param_name": name,
            "param_value": float(fmt(value)),
            "t": float(fmt(t)),
            "i": i,
            "j": j,
            "raw": float(fmt(raw)),
            "normalized": None if norm is None else float(fmt(norm)),
        }
        for name, value, t, i, j, raw, norm in rows
    ]
    return json.dumps(objs, indent=1) + "\n"


def cmd_scan(args, out) -> int:
    cfg = _load(args)
    _overrides(cfg, args)
    if args.param is not None:
        cfg.scan.param = args.param
    if args.start is not None:
        cfg.scan.start = args.start
    if args.stop is not None:
        cfg.scan.stop = args.stop
    if args.steps is not None:
        cfg.scan.steps = args.steps
    if args.orders is not None:
        cfg.orders = args.orders
    if args.out is not None:
        cfg.output.path = args.out
    if args.format is not None:
        cfg.output.format = args.format
    cfg.validate()
    text = render_rows(scan_rows(cfg, args.workers), cfg.output.format)
    try:
        Path(cfg.output.path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {cfg.output.path}: {exc.strerror}") from None
    out.write(f"wrote {cfg.output.path}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = _load(args)
    _overrides(cfg, args)
    model = cfg.validate()
    paths = args.paths if args.paths is not None else cfg.verify.num_paths
    seed = args.seed if args.seed is not None else cfg.verify.seed
    results = verification.run_all(
        model, cfg.orders, cfg.times, paths, seed, args.workers,
        report=lambda r: (out.write(r.line() + "\n"), out.flush()),
    )
    failed = [r for r in results if r.status == verification.FAIL]
    out.write(f"{len(results) - len(failed)}/{len(results)} checks without failure\n")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_partitions(args, out) -> int:
    i = parse_index(args.index)
    parts = enumerate_p2_partitions(i) if args.p2 else enumerate_partitions(i)
    for lam in parts:
        out.write(f"{lam}  l={lam.length}\n")
    out.write(f"count = {len(parts)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="levycumulants", description="Joint cumulants of subordinated Lévy processes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_opts(sp):
        sp.add_argument("--config", help="JSON run config (default: built-in calibrated set)")
        sp.add_argument("--rho12", type=float, help="override rho_12")
        sp.add_argument("--a", type=float, help="override the common-clock weight a")

    c = sub.add_parser("cumulant", help="raw and normalized joint cumulant")
    model_opts(c)
    c.add_argument("--index", required=True, help="multi-index, e.g. 1,1")
    c.add_argument("--t", type=float, default=1.0, help="time in years")
    c.set_defaults(func=cmd_cumulant)

    s = sub.add_parser("scan", help="normalized cross-cumulants over a parameter grid")
    model_opts(s)
    s.add_argument("--param", choices=("rho", "a", "t"))
    s.add_argument("--from", dest="start", type=float)
    s.add_argument("--to", dest="stop", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--orders", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="closed forms vs series and Monte Carlo oracles")
    model_opts(v)
    v.add_argument("--paths", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("partitions", help="list the partitions of a multi-index")
    d.add_argument("--index", required=True)
    d.add_argument("--p2", action="store_true", help="only columns of total order <= 2")
    d.set_defaults(func=cmd_partitions)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, ConfigError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
