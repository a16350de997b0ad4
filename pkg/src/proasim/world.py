"""Node placement, random-waypoint mobility, unit-disk connectivity, broadcast delay."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .kernel import RngStream


@dataclass(frozen=True)
class MobilityConfig:
    """Random-waypoint parameters; speeds in m/s, pause in seconds."""

    speed_min: float = 1.0
    speed_max: float = 10.0
    pause: float = 0.0

    def __post_init__(self):
        if not (0 <= self.speed_min <= self.speed_max):
            raise ValueError(f"need 0 <= speed_min <= speed_max, got {self.speed_min}, {self.speed_max}")
        if self.pause < 0:
            raise ValueError("pause must be >= 0")


@dataclass(frozen=True)
class RadioParams:
    """Unit-disk radio: range in meters, bandwidth in bit/s, control sizing in bytes."""

    range: float = 250.0
    bandwidth: float = 2e6
    ctrl_header: int = 20
    ctrl_entry: int = 12

    def __post_init__(self):
        if self.range <= 0 or self.bandwidth <= 0:
            raise ValueError("radio range and bandwidth must be positive")


def tx_delay(size_bytes: float, bandwidth: float) -> float:
    """Serialization delay in seconds for a packet of `size_bytes` at `bandwidth` bit/s."""
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    return size_bytes * 8.0 / bandwidth


def init_positions(n: int, area: tuple[float, float], rng: RngStream) -> list[tuple[float, float]]:
    """n independent uniform positions inside the rectangle area = (x_max, y_max)."""
    if n < 1:
        raise ValueError("need at least one node")
    ax, ay = area
    if ax <= 0 or ay <= 0:
        raise ValueError(f"area must have positive extent, got {area}")
    return [(rng.uniform(0, ax), rng.uniform(0, ay)) for _ in range(n)]


@dataclass
class Trajectory:
    """Piecewise-linear motion: legs of (t_start, t_end, x0, y0, vx, vy).

    Legs tile [0, horizon]; pauses are zero-velocity legs, so position is
    continuous in time and constant while pausing.
    """

    legs: list[tuple[float, float, float, float, float, float]]
    horizon: float
    _starts: list[float] = field(init=False, repr=False)

    def __post_init__(self):
        self._starts = [leg[0] for leg in self.legs]

    @property
    def is_static(self) -> bool:
        return all(vx == 0.0 and vy == 0.0 for _, _, _, _, vx, vy in self.legs)

    def position_at(self, t: float) -> tuple[float, float]:
        if t < 0 or t > self.horizon + 1e-9:
            raise ValueError(f"t={t} outside simulated horizon [0, {self.horizon}]")
        i = bisect_right(self._starts, t) - 1
        if i < 0:
            i = 0
        t0, t1, x0, y0, vx, vy = self.legs[i]
        dt = min(t, t1) - t0
        return (x0 + vx * dt, y0 + vy * dt)


def build_trajectory(
    start: tuple[float, float],
    area: tuple[float, float],
    mobility: MobilityConfig,
    horizon: float,
    rng: RngStream,
) -> Trajectory:
    """Random-waypoint path over [0, horizon]: pause, travel to a waypoint, repeat."""
    x, y = start
    legs = []
    t = 0.0
    if mobility.speed_max <= 0:
        legs.append((0.0, horizon, x, y, 0.0, 0.0))
        return Trajectory(legs, horizon)
    while t < horizon:
        if mobility.pause > 0:
            t_end = min(t + mobility.pause, horizon)
            legs.append((t, t_end, x, y, 0.0, 0.0))
            t = t_end
            if t >= horizon:
                break
        wx, wy = rng.uniform(0, area[0]), rng.uniform(0, area[1])
        speed = rng.uniform(mobility.speed_min, mobility.speed_max)
        dist = ((wx - x) ** 2 + (wy - y) ** 2) ** 0.5
        if speed <= 0 or dist == 0:
            # degenerate draw: sit out the rest of the run
            legs.append((t, horizon, x, y, 0.0, 0.0))
            t = horizon
            break
        travel = dist / speed
        t_end = min(t + travel, horizon)
        vx, vy = (wx - x) / travel, (wy - y) / travel
        legs.append((t, t_end, x, y, vx, vy))
        if t_end >= horizon:
            x, y = x + vx * (t_end - t), y + vy * (t_end - t)
            t = t_end
            break
        x, y = wx, wy
        t = t_end
    if not legs:
        legs.append((0.0, horizon, x, y, 0.0, 0.0))
    return Trajectory(legs, horizon)


def neighbors(positions, node: int, radio_range: float) -> set[int]:
    """All other nodes within Euclidean distance <= range of `node`."""
    px, py = positions[node]
    r2 = radio_range * radio_range
    out = set()
    for j, (qx, qy) in enumerate(positions):
        if j != node and (qx - px) ** 2 + (qy - py) ** 2 <= r2:
            out.add(j)
    return out


def link_events(prev: set[frozenset], curr: set[frozenset]) -> tuple[set[frozenset], set[frozenset]]:
    """(up, down) edge sets between two adjacency snapshots; each pair reported once."""
    return (curr - prev, prev - curr)


class World:
    """Positions over time, unit-disk adjacency, and counted broadcast transmissions."""

    def __init__(self, trajectories: list[Trajectory], radio: RadioParams, loss_prob: float = 0.0,
                 loss_rng: RngStream | None = None):
        self.trajectories = trajectories
        self.radio = radio
        self.n = len(trajectories)
        self.tx_count = [0] * self.n
        self.loss_prob = loss_prob
        self.loss_rng = loss_rng
        self.static = all(tr.is_static for tr in trajectories)
        self._pos_cache_t = -1.0
        self._pos_cache: np.ndarray | None = None

    def positions_at(self, t: float) -> np.ndarray:
        if t != self._pos_cache_t:
            self._pos_cache = np.array([tr.position_at(t) for tr in self.trajectories])
            self._pos_cache_t = t
        return self._pos_cache

    def neighbors_at(self, t: float, node: int) -> list[int]:
        """Current neighbors of `node`, sorted by id (membership at exactly time t)."""
        pos = self.positions_at(t)
        d2 = ((pos - pos[node]) ** 2).sum(axis=1)
        r2 = self.radio.range * self.radio.range
        return [int(j) for j in np.nonzero(d2 <= r2)[0] if j != node]

    def edges_at(self, t: float) -> set[frozenset]:
        """Unit-disk edge set at time t, as frozenset pairs."""
        pos = self.positions_at(t)
        diff = pos[:, None, :] - pos[None, :, :]
        d2 = (diff ** 2).sum(axis=2)
        r2 = self.radio.range * self.radio.range
        ii, jj = np.nonzero(d2 <= r2)
        return {frozenset((int(a), int(b))) for a, b in zip(ii, jj) if a < b}

    def broadcast(self, sender: int, size_bytes: int, t: float) -> list[tuple[int, float]]:
        """One transmission: arrivals (receiver, time) for each current neighbor.

        The per-node transmit counter increments exactly once whether or not
        anyone is in range.
        """
        self.tx_count[sender] += 1
        arrival = t + tx_delay(size_bytes, self.radio.bandwidth)
        receivers = self.neighbors_at(t, sender)
        if self.loss_prob > 0.0 and self.loss_rng is not None:
            receivers = [r for r in receivers if self.loss_rng.random() >= self.loss_prob]
        return [(r, arrival) for r in receivers]
