"""Command-line front end: run, sweep, analytic, compare."""

from __future__ import annotations

import argparse
import sys

from .analysis import analytic_report, compare
from .config import PROTOCOLS, ScenarioConfig, load_config
from .engine import Simulation
from .experiments import RESULT_FIELDS, read_rows, row_from_sim, sweep, write_rows
from .overhead import AnalyticParams, load_analytic_params


def _scenario(args) -> ScenarioConfig:
    overrides = {}
    if getattr(args, "protocol", None) and args.protocol != "all":
        overrides["protocol"] = args.protocol
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if args.config:
        return load_config(args.config, overrides)
    return ScenarioConfig(**overrides)


def _parse_values(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if part:
            out.append(float(part))
    if not out:
        raise ValueError("no values given")
    return out


def _parse_seeds(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in text.split(",") if s.strip()]


def cmd_run(args) -> int:
    config = _scenario(args)
    sim = Simulation(config)
    if args.dump_trajectory:
        sim.enable_trajectory_dump()
    sim.run()
    row = row_from_sim(sim)
    if args.out:
        write_rows(args.out, [row])
    else:
        print(",".join(RESULT_FIELDS))
        print(",".join(row.to_csv()))
    if args.dump_tables:
        with open(args.dump_tables, "w") as fh:
            fh.write("\n".join(sim.dump_tables()) + "\n")
    if args.dump_trajectory:
        with open(args.dump_trajectory, "w") as fh:
            fh.write("\n".join(sim.trace_positions) + "\n")
    return 0


def cmd_sweep(args) -> int:
    config = _scenario(args)
    protocols = list(PROTOCOLS) if args.protocol == "all" else [config.protocol]
    values = _parse_values(args.values)
    seeds = _parse_seeds(args.seeds) if args.seeds else None
    rows = sweep(config, args.param, values, seeds=seeds, protocols=protocols,
                 out=args.out, jobs=args.jobs)
    print(f"sweep complete: {len(rows)} new rows -> {args.out}")
    return 0


def cmd_analytic(args) -> int:
    params = load_analytic_params(args.config) if args.config else AnalyticParams()
    values = _parse_values(args.values) if args.values else None
    if args.sweep_param and values is None:
        raise ValueError("--sweep-param needs --values")
    rows = analytic_report(params, args.out, args.sweep_param, values)
    print(f"analytic report: {len(rows)} rows -> {args.out}")
    return 0


def cmd_compare(args) -> int:
    params = load_analytic_params(args.config) if args.config else AnalyticParams()
    rows = read_rows(args.rows)
    result = compare(rows, params)
    lines = [("protocol", "fitted_k", "residual", "slope_ctrl_bytes",
              "slope_ctrl_pkts", "superlinear")]
    for proto, stats in result.items():
        lines.append((proto, repr(stats["fitted_k"]), repr(stats["residual"]),
                      repr(stats["slope_ctrl_bytes"]), repr(stats["slope_ctrl_pkts"]),
                      str(stats["superlinear"])))
    text = "\n".join(",".join(line) for line in lines)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proasim",
                                     description="proactive routing simulator and overhead model")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one scenario")
    run_p.add_argument("--config", help="scenario config file (key = value lines)")
    run_p.add_argument("--protocol", choices=PROTOCOLS)
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--out", help="CSV path for the result row")
    run_p.add_argument("--dump-tables", help="write final routing tables here")
    run_p.add_argument("--dump-trajectory", help="write `t node x y` lines here")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="sweep nodes, pause or speed")
    sweep_p.add_argument("--config")
    sweep_p.add_argument("--param", required=True, choices=("nodes", "pause", "speed"))
    sweep_p.add_argument("--values", required=True, help="comma-separated values")
    sweep_p.add_argument("--seeds", help="e.g. 1..10 or 1,2,3 (default 1..10)")
    sweep_p.add_argument("--protocol", default=None,
                         choices=PROTOCOLS + ("all",), help="protocol or `all`")
    sweep_p.add_argument("--out", required=True)
    sweep_p.add_argument("--jobs", type=int, default=1)
    sweep_p.set_defaults(func=cmd_sweep)

    ana_p = sub.add_parser("analytic", help="evaluate the overhead model")
    ana_p.add_argument("--config", help="analytic parameter file")
    ana_p.add_argument("--sweep-param", help="model symbol to sweep (e.g. n, T_pr)")
    ana_p.add_argument("--values", help="comma-separated sweep values")
    ana_p.add_argument("--out", required=True)
    ana_p.set_defaults(func=cmd_analytic)

    cmp_p = sub.add_parser("compare", help="fit measured control load to the model")
    cmp_p.add_argument("--config", help="analytic parameter file")
    cmp_p.add_argument("--rows", required=True, help="sweep CSV from a nodes sweep")
    cmp_p.add_argument("--out")
    cmp_p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
