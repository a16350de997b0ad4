"""Scenario configuration: defaults, key=value file parsing, validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

PROTOCOLS = ("dsdv", "fsr", "olsr")


@dataclass(frozen=True)
class ScenarioConfig:
    protocol: str = "dsdv"
    nodes: int = 50
    area_x: float = 1000.0
    area_y: float = 1000.0
    range: float = 250.0
    bandwidth: float = 2e6
    packet_size: int = 512
    speed_min: float = 1.0
    speed_max: float = 10.0
    pause: float = 0.0
    flows: int = 10
    flow_rate: float = 4.0
    flow_start: float = 10.0
    flow_stop: float | None = None  # defaults to duration - 5
    duration: float = 900.0
    seed: int = 1
    ttl: int | None = None  # defaults to node count
    link_sample_interval: float = 0.1
    loss_prob: float = 0.0
    dsdv_periodic: float = 15.0
    dsdv_settling: float = 5.0
    dsdv_full_dump_every: int = 4
    dsdv_buffer_timeout: float = 15.0
    fsr_radii: tuple = (2, math.inf)
    fsr_intervals: tuple = (5.0, 15.0)
    olsr_hello: float = 1.0
    olsr_tc: float = 2.0

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.nodes < 1:
            raise ValueError("nodes must be >= 1")
        if self.area_x <= 0 or self.area_y <= 0:
            raise ValueError("area extents must be positive")
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if self.flows < 0 or self.flow_rate <= 0:
            raise ValueError("flows must be >= 0 and flow_rate positive")
        if not (0 <= self.loss_prob < 1):
            raise ValueError("loss_prob must be in [0, 1)")

    @property
    def effective_ttl(self) -> int:
        return self.ttl if self.ttl is not None else self.nodes

    @property
    def effective_flow_stop(self) -> float:
        if self.flow_stop is not None:
            return self.flow_stop
        return max(self.flow_start, self.duration - 5.0)


def _parse_number_list(value: str) -> tuple:
    out = []
    for part in value.split(","):
        part = part.strip()
        if part.lower() in ("inf", "infinity"):
            out.append(math.inf)
        else:
            out.append(float(part))
    return tuple(out)


_PARSERS = {
    "protocol": str,
    "nodes": int,
    "packet_size": int,
    "flows": int,
    "seed": int,
    "ttl": int,
    "dsdv_full_dump_every": int,
    "fsr_radii": _parse_number_list,
    "fsr_intervals": _parse_number_list,
}


def load_config(path: str, overrides: dict | None = None) -> ScenarioConfig:
    """Parse a line-based `key = value` file; unknown keys and bad values are errors."""
    known = {f.name for f in fields(ScenarioConfig)}
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected `key = value`, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            parser = _PARSERS.get(key, float)
            try:
                values[key] = parser(value)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    if overrides:
        values.update(overrides)
    return ScenarioConfig(**values)
