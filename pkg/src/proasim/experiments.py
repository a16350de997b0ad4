"""Scenario execution and sweeps: one deterministic ResultRow per (scenario, seed)."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

from .config import PROTOCOLS, ScenarioConfig
from .engine import Simulation
from .metrics import report

RESULT_FIELDS = (
    "protocol", "seed", "nodes", "pause", "speed_max", "duration",
    "throughput_bps", "avg_delay_s", "nrl", "delivery_ratio",
    "ctrl_pkts", "ctrl_bytes", "data_sent", "data_delivered", "data_dropped",
)

SWEEP_PARAMS = {"nodes": "nodes", "pause": "pause", "speed": "speed_max"}


@dataclass(frozen=True)
class ResultRow:
    protocol: str
    seed: int
    nodes: int
    pause: float
    speed_max: float
    duration: float
    throughput_bps: float
    avg_delay_s: float | None
    nrl: float | None
    delivery_ratio: float | None
    ctrl_pkts: int
    ctrl_bytes: int
    data_sent: int
    data_delivered: int
    data_dropped: int

    def to_csv(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                out.append("nan")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out

    @property
    def key(self) -> tuple:
        return (self.protocol, self.seed, self.nodes, self.pause, self.speed_max)


def row_from_sim(sim: Simulation) -> ResultRow:
    """Build the result row of a finished run, enforcing accounting invariants."""
    config, ledger = sim.config, sim.ledger
    if ledger.data_sent != ledger.data_delivered + ledger.data_dropped + sim.in_flight():
        raise RuntimeError("packet conservation violated: "
                           f"{ledger.data_sent} sent vs {ledger.data_delivered} delivered "
                           f"+ {ledger.data_dropped} dropped + {sim.in_flight()} in flight")
    if ledger.ctrl_pkts != sim.control_tx_total():
        raise RuntimeError("control accounting mismatch: ledger "
                           f"{ledger.ctrl_pkts} vs world {sim.control_tx_total()}")
    rep = report(ledger, config.duration)
    return ResultRow(
        protocol=config.protocol,
        seed=config.seed,
        nodes=config.nodes,
        pause=config.pause,
        speed_max=config.speed_max,
        duration=config.duration,
        throughput_bps=rep.throughput_bps,
        avg_delay_s=rep.avg_delay_s,
        nrl=rep.nrl,
        delivery_ratio=rep.delivery_ratio,
        ctrl_pkts=ledger.ctrl_pkts,
        ctrl_bytes=ledger.ctrl_bytes,
        data_sent=ledger.data_sent,
        data_delivered=ledger.data_delivered,
        data_dropped=ledger.data_dropped,
    )


def run_scenario(config: ScenarioConfig) -> ResultRow:
    """Execute one full run; identical config and seed give a byte-identical row."""
    sim = Simulation(config)
    sim.run()
    return row_from_sim(sim)


def _existing_keys(path: str) -> set[tuple]:
    keys = set()
    if not path or not os.path.exists(path):
        return keys
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            keys.add((row["protocol"], int(row["seed"]), int(row["nodes"]),
                      float(row["pause"]), float(row["speed_max"])))
    return keys


def write_rows(path: str, rows: list[ResultRow]):
    """Write a sorted, keyed CSV: output is independent of execution order."""
    rows = sorted(rows, key=lambda r: r.key)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_FIELDS)
        for r in rows:
            w.writerow(r.to_csv())


def read_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def sweep(config: ScenarioConfig, param: str, values, seeds=None, protocols=None,
          out: str | None = None, jobs: int = 1) -> list[ResultRow]:
    """Cross product of values x seeds (x protocols), each an independent run.

    Completed rows stream to `out` as they finish; re-running skips rows the
    file already holds, and the final file is rewritten sorted by row key.
    """
    if not values:
        raise ValueError("sweep needs at least one value")
    if param not in SWEEP_PARAMS:
        raise ValueError(f"sweep param must be one of {sorted(SWEEP_PARAMS)}")
    field = SWEEP_PARAMS[param]
    seeds = list(seeds) if seeds is not None else list(range(1, 11))
    protocols = list(protocols) if protocols is not None else [config.protocol]
    for proto in protocols:
        if proto not in PROTOCOLS:
            raise ValueError(f"unknown protocol {proto!r}")

    caster = int if field == "nodes" else float
    tasks = [replace(config, protocol=proto, seed=seed, **{field: caster(v)})
             for proto in protocols for v in values for seed in seeds]

    done = _existing_keys(out)
    kept: list[ResultRow] = []
    pending = []
    for cfg in tasks:
        key = (cfg.protocol, cfg.seed, cfg.nodes, cfg.pause, cfg.speed_max)
        if key in done:
            continue
        pending.append(cfg)

    stream = None
    if out:
        new_file = not os.path.exists(out)
        stream = open(out, "a", newline="")
        writer = csv.writer(stream)
        if new_file:
            writer.writerow(RESULT_FIELDS)

    try:
        if jobs > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for row in pool.map(run_scenario, pending):
                    kept.append(row)
                    if stream:
                        writer.writerow(row.to_csv())
                        stream.flush()
        else:
            for cfg in pending:
                row = run_scenario(cfg)
                kept.append(row)
                if stream:
                    writer.writerow(row.to_csv())
                    stream.flush()
    finally:
        if stream:
            stream.close()

    if out:
        all_rows = _rows_from_csv(out)
        _finalize_csv(out, all_rows)
    return kept


def _rows_from_csv(path: str) -> list[list[str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        assert header == list(RESULT_FIELDS), f"unexpected sweep CSV header: {header}"
        return list(reader)


def _finalize_csv(path: str, raw_rows: list[list[str]]):
    def key(row):
        return (row[0], int(row[1]), int(row[2]), float(row[3]), float(row[4]))

    uniq = {}
    for row in raw_rows:
        uniq[key(row)] = row
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_FIELDS)
        for k in sorted(uniq):
            w.writerow(uniq[k])
