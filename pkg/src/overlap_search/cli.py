"""Command-line experiment runner.

Usage::

    overlap-search <subcommand> [--config cfg.json] [--seed N] [--out DIR]
                    [--trials N] [--plot]

Subcommands: error-vs-alpha, depth-vs-alpha, error-vs-beta,
optimize-placement, simulate, validate.  Exit codes: 0 on success, 1 when a
validation check fails, 2 for configuration or precondition errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .analysis import AsymmetricSensorsError
from .experiments import COMMANDS, ConfigError, cmd_validate, load_config_file, resolve_config
from .svgplot import line_chart

SUBCOMMANDS = ("error-vs-alpha", "depth-vs-alpha", "error-vs-beta",
               "optimize-placement", "simulate", "validate")


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_value(v) for v in row])


def _series_by_group(rows, x_col, y_col, group_col, group_name):
    groups: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        if row[y_col] is None or row[x_col] is None:
            continue
        key = group_name(row[group_col])
        groups.setdefault(key, []).append((float(row[x_col]), float(row[y_col])))
    return [
        (key, [p[0] for p in pts], [p[1] for p in pts]) for key, pts in groups.items()
    ]


def _plot_outputs(command: str, outputs: dict, out_dir: Path) -> list[Path]:
    written = []
    for filename, (header, rows) in outputs.items():
        svg = out_dir / (Path(filename).stem + ".svg")
        if filename in ("error_vs_alpha.csv", "alpha_coupled_error.csv"):
            series = _series_by_group(
                rows, 0, 2, 1, lambda n: f"n={n}"
            ) + _series_by_group(rows, 0, 3, 1, lambda _n: "continuous")
            line_chart(svg, series, title="Step error vs overlap", x_label="alpha",
                       y_label="step error", log_y=True)
        elif filename == "depth_vs_alpha.csv":
            xs = [r[0] for r in rows]
            series = [("exact", xs, [r[1] for r in rows]),
                      ("approx", xs, [r[2] for r in rows])]
            line_chart(svg, series, title="Tree depth vs overlap", x_label="alpha",
                       y_label="depth")
        elif filename == "error_vs_beta.csv":
            feasible = [r for r in rows if r[2] is not None]
            series = [("analytic", [r[0] for r in feasible], [r[2] for r in feasible])]
            if any(r[3] is not None for r in feasible):
                with_mc = [r for r in feasible if r[3] is not None]
                series.append(("simulated", [r[0] for r in with_mc], [r[3] for r in with_mc]))
            line_chart(svg, series, title="Total error vs tree depth", x_label="beta",
                       y_label="total error", log_y=True)
        elif filename == "optimize_placement.csv":
            xs = [r[0] for r in rows]
            series = [("EA offset", xs, [r[1] for r in rows]),
                      ("heuristic offset", xs, [r[2] for r in rows])]
            line_chart(svg, series, title="Sensor offset vs overlap", x_label="alpha",
                       y_label="offset")
        else:
            continue
        written.append(svg)
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlap-search",
        description="Experiments for overlapping-partition noisy binary search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override the section seed")
        p.add_argument("--out", type=str, default="results", help="output directory")
        p.add_argument("--trials", type=int, default=None, help="override Monte Carlo trials")
        p.add_argument("--plot", action="store_true", help="also write SVG charts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    experiment = args.command.replace("-", "_")
    try:
        file_config = load_config_file(args.config) if args.config else None
        overrides = {"seed": args.seed}
        if experiment != "depth_vs_alpha":
            overrides["trials"] = args.trials
        elif args.trials is not None:
            raise ConfigError("depth-vs-alpha takes no --trials override")
        cfg = resolve_config(experiment, file_config, **overrides)

        if args.command == "validate":
            results = cmd_validate(cfg)
            width = max(len(name) for name, _, _ in results)
            for name, passed, detail in results:
                status = "PASS" if passed else "FAIL"
                print(f"{name:<{width}}  {status}  {detail}")
            failed = [name for name, passed, _ in results if not passed]
            if failed:
                print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
                return 1
            return 0

        outputs = COMMANDS[args.command](cfg)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for filename, (header, rows) in outputs.items():
            path = out_dir / filename
            write_csv(path, header, rows)
            print(f"wrote {path}")
        if args.plot:
            for svg in _plot_outputs(args.command, outputs, out_dir):
                print(f"wrote {svg}")
        return 0
    except (ConfigError, AsymmetricSensorsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
