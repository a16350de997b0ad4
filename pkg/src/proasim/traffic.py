"""CBR traffic generation."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CbrFlow:
    src: int
    dst: int
    rate: float  # packets per second
    size: int = 512
    start: float = 0.0
    stop: float = 0.0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("flow source and destination must differ")
        if self.rate <= 0:
            raise ValueError("flow rate must be positive")


def schedule_flows(flows: list[CbrFlow]) -> list[tuple[float, int, int]]:
    """Exact-interval send times: (time, flow index, packet seq), time-ordered.

    Each flow emits at start, start + 1/rate, ... strictly before stop.
    """
    sends = []
    for i, flow in enumerate(flows):
        interval = 1.0 / flow.rate
        k = 0
        while True:
            t = flow.start + k * interval
            if t >= flow.stop:
                break
            sends.append((t, i, k))
            k += 1
    sends.sort(key=lambda s: (s[0], s[1], s[2]))
    return sends


def pick_flow_pairs(n_nodes: int, n_flows: int, rng) -> list[tuple[int, int]]:
    """Distinct random (src, dst) pairs with src != dst."""
    if n_nodes < 2 or n_flows <= 0:
        return []
    pairs: list[tuple[int, int]] = []
    seen = set()
    limit = min(n_flows, n_nodes * (n_nodes - 1))
    while len(pairs) < limit:
        src = rng.randrange(n_nodes)
        dst = rng.randrange(n_nodes)
        if src != dst and (src, dst) not in seen:
            seen.add((src, dst))
            pairs.append((src, dst))
    return pairs
