"""Command-line entry point: ``trendwave <subcommand> ...``.

Exit codes: 0 ran, 1 a verification check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import infocalc, io, pipeline, soliton, svg, verify
from .decompose import extract_waves
from .periods import Period

log = logging.getLogger("trendwave")


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if lo >= hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _kappas(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad wave-number list {text!r}") from None


def _add_grid_flags(p):
    p.add_argument("--scale-min", type=float, help="smallest wavelet scale in weeks (default 0.5)")
    p.add_argument("--scale-max", type=float, help="largest scale (default window length / 3)")
    p.add_argument("--scale-steps", type=int, help="geometric scale steps (default 120)")
    p.add_argument("--shift-step", type=float, help="shift grid step in weeks (default 0.5)")


def _config_from_args(args) -> io.AnalysisConfig:
    file_values = io.read_config_file(args.config) if getattr(args, "config", None) else {}
    periods = None
    if getattr(args, "period", None):
        periods = [] if args.period == ["none"] else [io.parse_period(p) for p in args.period]
    return io.build_config(
        file_values,
        input=args.input, out=args.out, seed=args.seed, periods=periods,
        scale_min=args.scale_min, scale_max=args.scale_max, scale_steps=args.scale_steps,
        shift_step=args.shift_step, k_max=getattr(args, "k_max", None),
        restarts=getattr(args, "restarts", None),
        refine=False if getattr(args, "no_refine", False) else None,
    )


def cmd_analyze(args) -> int:
    cfg = _config_from_args(args)
    summary = pipeline.run_pipeline(cfg)
    print(io.dumps(summary), end="")
    return 0


def cmd_fit(args) -> int:
    cfg = _config_from_args(args)
    if not cfg.input:
        raise io.InputError("--input is required")
    series = io.ingest_csv(cfg.input)
    try:
        doc = json.loads(Path(args.waves).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise io.InputError(f"{args.waves}: {exc}") from None
    model, period = io.waves_from_json(doc)
    if args.period:
        period = io.parse_period(args.period[0])
    if period is None:
        period = Period("all", 1, len(series))
    try:
        window = series.window(period.start, period.end)
    except ValueError as exc:
        raise io.InputError(str(exc)) from None
    model, report = pipeline.fit_window(model, window, cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.prefix
    (out / f"{stem}.waves.json").write_text(io.dumps(io.waves_to_json(model, period)))
    rep = io.fit_report_to_json(report, period)
    (out / f"{stem}.fit.json").write_text(io.dumps(rep))
    (out / f"{stem}.overlay.svg").write_text(
        pipeline.overlay_svg(model, window, f"Period {period.label}: data and fitted derivative"))
    print(io.dumps(rep), end="")
    return 0


def cmd_scalogram(args) -> int:
    cfg = _config_from_args(args)
    if not cfg.input:
        raise io.InputError("--input is required")
    series = io.ingest_csv(cfg.input)
    period = cfg.periods[0] if args.period else Period("all", 1, len(series))
    try:
        window = series.window(period.start, period.end)
    except ValueError as exc:
        raise io.InputError(str(exc)) from None
    dcfg = pipeline.decompose_config(cfg, len(window))
    dcfg.k_max = 1
    sc = extract_waves(window, dcfg).scalograms[0]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.prefix}.csv").write_text(pipeline.scalogram_csv(sc))
    (out / f"{args.prefix}.svg").write_text(
        pipeline.scalogram_svg(sc, f"Index scalogram, weeks {period.start}-{period.end}"))
    ext = [{"alpha": e.alpha, "beta": e.beta, "value": e.value, "kind": e.kind}
           for e in sc.extrema]
    print(io.dumps({"schema": io.SCHEMA, "shape": list(sc.values.shape), "extrema": ext[:20]}),
          end="")
    return 0


def cmd_soliton(args) -> int:
    try:
        spec = soliton.SolitonSpec(tuple(args.kappa), args.c1)
    except ValueError as exc:
        raise io.InputError(str(exc)) from None
    x = np.arange(args.x_range[0], args.x_range[1] + args.hx / 2, args.hx)
    t = np.arange(args.t_range[0], args.t_range[1] + args.ht / 2, args.ht)
    c1 = spec.c1
    if spec.n == 1:
        grid = soliton.Grid2D.from_function(lambda X, T: soliton.single_soliton(spec, X, T), x, t)
    else:
        if c1 != 0.0:
            log.warning("multi-soliton construction ignores C1=%g; residual uses C1=0", c1)
            c1 = 0.0
        grid = soliton.n_soliton_P(spec, x, t)
    result = {
        "schema": io.SCHEMA,
        "kappas": list(spec.kappas),
        "c1": c1,
        "hx": args.hx,
        "ht": args.ht,
        "residual": soliton.kdv_residual(grid, c1),
        "asymptotic_amplitudes": [k * k / 2 for k in spec.kappas],
        "peak_first": float(grid.values[0].max()),
        "peak_last": float(grid.values[-1].max()),
        "phase_shifts": {f"{i + 1}{j + 1}": soliton.phase_shift(spec.kappas[i], spec.kappas[j])
                         for i in range(spec.n) for j in range(i + 1, spec.n)},
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "soliton.json").write_text(io.dumps(result))
    rows = sorted({0, grid.t.size // 2, grid.t.size - 1})
    curves = [(grid.x, grid.values[r], f"T = {grid.t[r]:.3g}") for r in rows]
    (out / "soliton.svg").write_text(svg.line_chart_svg(curves, "Soliton field slices", "X", "P"))
    print(io.dumps(result), end="")
    return 0


def cmd_entropy(args) -> int:
    try:
        raw = args.table if args.table is not None else (
            sys.stdin.read() if args.path == "-" else Path(args.path).read_text(encoding="utf-8"))
        table = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise io.InputError(f"cannot read probability table: {exc}") from None
    if isinstance(table, dict):
        table = table.get("probabilities")
    try:
        dist = infocalc.JointDistribution(np.asarray(table, dtype=float))
    except (ValueError, TypeError) as exc:
        raise io.InputError(str(exc)) from None
    print(io.dumps({"schema": io.SCHEMA, **infocalc.entropy_report(dist)}), end="")
    return 0


def cmd_verify(args) -> int:
    checks = verify.run(args.suite)
    for c in checks:
        print(c.line(), file=sys.stderr)
    report = verify.as_report(checks, args.suite)
    print(io.dumps(report), end="")
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trendwave", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def analysis(name, help_, fn):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", help="weekly CSV with header date,close")
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument("--period", action="append",
                       help="start:end or LABEL=start:end (repeatable); 'none' for no periods")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        _add_grid_flags(p)
        p.set_defaults(func=fn)
        return p

    p = analysis("analyze", "decompose and fit every period", cmd_analyze)
    p.add_argument("--k-max", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--no-refine", action="store_true")

    p = analysis("fit", "refine waves from a waves JSON against data", cmd_fit)
    p.add_argument("--waves", required=True)
    p.add_argument("--restarts", type=int)
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--prefix", default="fit")

    p = analysis("scalogram", "first-pass Index scalogram as CSV and SVG", cmd_scalogram)
    p.add_argument("--prefix", default="scalogram")

    p = sub.add_parser("soliton", help="evaluate soliton fields and their KdV residual")
    p.add_argument("--kappa", type=_kappas, default=[1.0], help="comma-separated wave numbers")
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--x-range", type=_range, default=(-20.0, 20.0),
                   help="lo:hi; write --x-range=-20:20 when lo is negative")
    p.add_argument("--t-range", type=_range, default=(-1.0, 1.0), help="lo:hi, as --x-range")
    p.add_argument("--hx", type=float, default=0.01)
    p.add_argument("--ht", type=float, default=0.01)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_soliton)

    p = sub.add_parser("entropy", help="entropies, T and R of a JSON probability table")
    p.add_argument("path", nargs="?", default="-", help="JSON file, '-' for stdin")
    p.add_argument("--table", help="inline JSON table")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify", help="run built-in numerical checks")
    p.add_argument("suite", choices=["wavelet", "soliton", "entropy", "all"])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "hx", 1.0) <= 0 or getattr(args, "ht", 1.0) <= 0:
        parser.error("grid steps must be positive")
    try:
        return args.func(args)
    except io.InputError as exc:
        print(f"trendwave: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
