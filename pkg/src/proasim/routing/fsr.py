"""Fisheye State Routing: per-node link-state database exchanged with neighbors
only, refreshed at frequencies graded by hop-distance scope bands."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .base import FSR_LINKSTATE, ControlPacket, Protocol, RouteEntry, shortest_paths

INF_HOPS = math.inf


@dataclass
class LinkStateEntry:
    origin: int
    neighbor_list: frozenset[int]
    seq: int
    heard_at: float


@dataclass(frozen=True)
class FsrConfig:
    scope_radii: tuple[float, ...] = (2, INF_HOPS)
    scope_intervals: tuple[float, ...] = (5.0, 15.0)
    expiry_factor: float = 3.0

    def __post_init__(self):
        if len(self.scope_radii) != len(self.scope_intervals):
            raise ValueError("scope_radii and scope_intervals must have equal length")
        if list(self.scope_radii) != sorted(set(self.scope_radii)):
            raise ValueError("scope_radii must be strictly ascending")
        if list(self.scope_intervals) != sorted(set(self.scope_intervals)):
            raise ValueError("scope_intervals must be strictly ascending")
        if self.scope_radii[-1] != INF_HOPS:
            raise ValueError("last scope radius must be unbounded")


def scope_index(hop_distance: float, radii) -> int:
    """Smallest band index whose radius covers the hop distance (inclusive)."""
    for i, r in enumerate(radii):
        if hop_distance <= r:
            return i
    return len(radii) - 1


def fsr_merge(lsdb: dict[int, LinkStateEntry], entries, now: float) -> None:
    """Adopt incoming link-state rows that are strictly newer than stored ones."""
    for origin, seq, neigh in entries:
        stored = lsdb.get(origin)
        if stored is None or seq > stored.seq:
            lsdb[origin] = LinkStateEntry(origin, frozenset(neigh), seq, now)


def fsr_graph(lsdb: dict[int, LinkStateEntry]) -> dict[int, set[int]]:
    """Union graph of advertised neighbor lists; one endpoint's word suffices."""
    adj: dict[int, set[int]] = {}
    for e in lsdb.values():
        adj.setdefault(e.origin, set())
        for v in e.neighbor_list:
            adj[e.origin].add(v)
            adj.setdefault(v, set()).add(e.origin)
    return adj


def fsr_routes(lsdb: dict[int, LinkStateEntry], self_id: int) -> dict[int, RouteEntry]:
    table = {}
    for dest, (nh, metric) in shortest_paths(fsr_graph(lsdb), self_id).items():
        stored = lsdb.get(dest)
        seq = stored.seq if stored is not None else 0
        heard = stored.heard_at if stored is not None else lsdb[self_id].heard_at
        table[dest] = RouteEntry(dest, nh, metric, seq, heard)
    return table


class FsrProtocol(Protocol):
    name = "fsr"

    def __init__(self, node: int, env, n_nodes: int, config: FsrConfig | None = None):
        super().__init__(node, env, n_nodes)
        self.config = config or FsrConfig()
        self.own_seq = 0
        self.lsdb: dict[int, LinkStateEntry] = {
            node: LinkStateEntry(node, frozenset(), 0, 0.0)
        }
        self.heard: dict[int, float] = {}
        self._table: dict[int, RouteEntry] | None = None

    def on_start(self):
        for i in range(len(self.config.scope_radii)):
            self.env.schedule(0.0, f"scope-{i}")

    def on_timer(self, label: str):
        if not label.startswith("scope-"):
            return
        scope = int(label.split("-", 1)[1])
        self._refresh_neighbors()
        dist = self._distances()
        self._expire(dist)
        if scope == 0:
            self.own_seq += 1
            self.lsdb[self.node] = LinkStateEntry(
                self.node, frozenset(self.heard), self.own_seq, self.env.now())
            self._table = None
            dist = self._distances()
        entries = []
        for origin in sorted(self.lsdb):
            if scope_index(dist.get(origin, INF_HOPS), self.config.scope_radii) == scope:
                e = self.lsdb[origin]
                entries.append((e.origin, e.seq, tuple(sorted(e.neighbor_list))))
        if entries:
            # one row per origin plus one per advertised link
            n_units = sum(1 + len(neigh) for _, _, neigh in entries)
            pkt = ControlPacket(self.node, FSR_LINKSTATE, self.own_seq, tuple(entries),
                                self.env.packet_size(n_units))
            self.env.send_control(pkt)
        self.env.schedule(self.config.scope_intervals[scope], f"scope-{scope}")

    def on_control(self, packet: ControlPacket, sender: int):
        if packet.kind != FSR_LINKSTATE:
            return
        now = self.env.now()
        self.heard[sender] = now
        incoming = [row for row in packet.payload if row[0] != self.node]
        fsr_merge(self.lsdb, incoming, now)
        self._table = None

    def on_link_down(self, neighbor: int):
        # purely periodic protocol: broken links age out of the database
        pass

    # -- internals ----------------------------------------------------------

    def _refresh_neighbors(self):
        horizon = self.env.now() - self.config.expiry_factor * self.config.scope_intervals[0]
        stale = [n for n, t in self.heard.items() if t < horizon]
        for n in stale:
            del self.heard[n]

    def _distances(self) -> dict[int, float]:
        adj = fsr_graph(self.lsdb)
        dist = {self.node: 0}
        frontier = [self.node]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj.get(u, ()):
                    if v not in dist:
                        dist[v] = d
                        nxt.append(v)
            frontier = nxt
        return dist

    def _expire(self, dist: dict[int, float]):
        now = self.env.now()
        stale = []
        for origin, e in self.lsdb.items():
            if origin == self.node:
                continue
            band = scope_index(dist.get(origin, INF_HOPS), self.config.scope_radii)
            if now - e.heard_at > self.config.expiry_factor * self.config.scope_intervals[band]:
                stale.append(origin)
        for origin in stale:
            del self.lsdb[origin]
        if stale:
            self._table = None

    def routing_table(self):
        if self._table is None:
            self._table = fsr_routes(self.lsdb, self.node)
        return self._table
