"""Command-line interface: point reports, sweeps, maps and figure presets."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, parse_config, _parse_quantities
from .fcs import SolverError
from .figures import FIGURE_IDS, figure_preset, render_figure
from .sweep import read_csv, run_point, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2


def _load_config(args) -> RunConfig:
    path = Path(args.config)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    config = parse_config(text, source=str(path))
    return _apply_cli_overrides(config, args)


def _apply_cli_overrides(config: RunConfig, args) -> RunConfig:
    from dataclasses import replace

    if getattr(args, "quantities", None):
        config = replace(config, quantities=_parse_quantities(args.quantities, "--quantities"))
    if getattr(args, "workers", None):
        config = replace(config, workers=args.workers)
    if getattr(args, "out", None):
        config = replace(config, out=args.out)
    return config


def _cmd_point(args) -> int:
    config = _load_config(args)
    report = run_point(config)
    payload = json.dumps(report, indent=2)
    if config.out:
        Path(config.out).write_text(payload + "\n", encoding="utf-8")
        print(f"wrote {config.out}")
    else:
        print(payload)
    return EXIT_OK


def _cmd_sweep(args, expected_axes: int) -> int:
    config = _load_config(args)
    if len(config.axes) != expected_axes:
        kind = "sweep" if expected_axes == 1 else "map"
        raise ConfigError(f"{kind} needs exactly {expected_axes} sweep axis(es), config has {len(config.axes)}")
    out = config.out or ("sweep.csv" if expected_axes == 1 else "map.csv")
    summary = run_sweep(config, out, workers=config.workers)
    print(
        f"wrote {summary['out']}: {summary['points']} points, "
        f"{summary['failures']} failed"
    )
    return EXIT_OK


def _cmd_figure(args) -> int:
    config = figure_preset(args.id)
    config = _apply_cli_overrides(config, args)
    out = Path(config.out) if config.out else Path(f"{args.id}.csv")
    summary = run_sweep(config, str(out), workers=config.workers)
    print(f"wrote {out}: {summary['points']} points, {summary['failures']} failed")
    if not args.no_plot:
        header, rows = read_csv(str(out))
        png = out.with_suffix(".png")
        render_figure(args.id, header, rows, str(png))
        print(f"wrote {png}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutritdemon",
        description="Steady-state heat transport of the coupled-qutrit four-bath device",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path")
    common.add_argument("--workers", type=int, help="parallel worker count")
    common.add_argument("--quantities", help="comma-separated quantity list")

    p_point = sub.add_parser("point", parents=[common], help="single-configuration JSON report")
    p_point.add_argument("--config", required=True)
    p_point.set_defaults(func=_cmd_point)

    p_sweep = sub.add_parser("sweep", parents=[common], help="1D parameter sweep to CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.set_defaults(func=lambda a: _cmd_sweep(a, 1))

    p_map = sub.add_parser("map", parents=[common], help="2D parameter map to CSV")
    p_map.add_argument("--config", required=True)
    p_map.set_defaults(func=lambda a: _cmd_sweep(a, 2))

    p_fig = sub.add_parser("figure", parents=[common], help="run a named figure preset")
    p_fig.add_argument("id", choices=FIGURE_IDS)
    p_fig.add_argument("--no-plot", action="store_true", help="emit CSV only")
    p_fig.set_defaults(func=_cmd_figure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        if exc.diagnostics:
            print(json.dumps(exc.diagnostics, indent=2), file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
