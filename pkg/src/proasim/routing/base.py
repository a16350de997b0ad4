"""Shared protocol contract: routing-table schema, control envelope, data forwarding."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping

INF_METRIC = float("inf")

# control packet kinds
DSDV_UPDATE = "dsdv-update"
FSR_LINKSTATE = "fsr-linkstate"
OLSR_HELLO = "olsr-hello"
OLSR_TC = "olsr-tc"

# drop reasons
NO_ROUTE = "no-route"
NEXT_HOP_UNREACHABLE = "next-hop-unreachable"
TTL_EXPIRED = "ttl-expired"
BUFFERED_TIMEOUT = "buffered-timeout"
CHANNEL_LOSS = "channel-loss"


@dataclass
class RouteEntry:
    """One routing-table row: destination, next hop, hop metric, sequence, install time."""

    dest: int
    next_hop: int
    metric: float
    seq: int
    install_time: float


@dataclass
class ControlPacket:
    """Typed control message envelope with byte size for overhead accounting.

    size = header + per-entry cost * entries; `entries` is the kind's natural
    unit (route triples, hello pairs, TC selectors, link-state rows).
    """

    origin: int
    kind: str
    seq: int
    payload: Any
    size: int


def control_packet_size(entries: int, header: int = 20, per_entry: int = 12) -> int:
    return header + per_entry * entries


@dataclass
class DataPacket:
    src: int
    dst: int
    size: int
    ttl: int
    send_time: float
    flow: int = 0
    seq: int = 0


# ForwardDecision actions
DELIVER = "deliver"
FORWARD = "forward"
DROP = "drop"
BUFFER = "buffer"


@dataclass(frozen=True)
class ForwardDecision:
    action: str
    next_hop: int | None = None
    reason: str | None = None


def lookup_next_hop(table: Mapping[int, RouteEntry], dest: int) -> int | None:
    """Next hop of the unique entry for dest, or None."""
    entry = table.get(dest)
    return entry.next_hop if entry is not None else None


def forward_data(node: int, packet: DataPacket, table: Mapping[int, RouteEntry],
                 neighbors, allow_buffer: bool = False) -> ForwardDecision:
    """Per-hop forwarding decision against the node's current table and radio truth."""
    if packet.dst == node:
        return ForwardDecision(DELIVER)
    if packet.ttl <= 1:
        # decrementing would strand the packet before it can reach anyone
        return ForwardDecision(DROP, reason=TTL_EXPIRED)
    nh = lookup_next_hop(table, packet.dst)
    if nh is None:
        if allow_buffer:
            return ForwardDecision(BUFFER)
        return ForwardDecision(DROP, reason=NO_ROUTE)
    if nh not in neighbors:
        return ForwardDecision(DROP, reason=NEXT_HOP_UNREACHABLE)
    return ForwardDecision(FORWARD, next_hop=nh)


def shortest_paths(adj: Mapping[int, set[int]], source: int) -> dict[int, tuple[int, int]]:
    """BFS next hops and hop counts from `source` over an undirected adjacency map.

    Among equal-length paths the lowest next-hop id wins, so results are
    deterministic regardless of adjacency iteration order.
    """
    dist = {source: 0}
    order = [source]
    q = deque([source])
    while q:
        u = q.popleft()
        for v in sorted(adj.get(u, ())):
            if v not in dist:
                dist[v] = dist[u] + 1
                order.append(v)
                q.append(v)
    next_hop: dict[int, int] = {}
    for v in order:
        if v == source:
            continue
        if dist[v] == 1:
            next_hop[v] = v
            continue
        best = None
        for u in adj.get(v, ()):
            if dist.get(u) == dist[v] - 1:
                cand = next_hop.get(u)
                if cand is not None and (best is None or cand < best):
                    best = cand
        next_hop[v] = best
    return {v: (next_hop[v], dist[v]) for v in order if v != source and next_hop[v] is not None}


class Protocol:
    """Lifecycle hooks every routing protocol implements.

    Hooks touch world state only through `env` (send, timers); each node owns
    its protocol instance for the whole run.
    """

    name = "base"
    buffers_data = False

    def __init__(self, node: int, env, n_nodes: int):
        self.node = node
        self.env = env
        self.n_nodes = n_nodes

    def on_start(self):
        pass

    def on_timer(self, label: str):
        pass

    def on_control(self, packet: ControlPacket, sender: int):
        pass

    def on_link_down(self, neighbor: int):
        pass

    def next_hop(self, dest: int) -> int | None:
        return lookup_next_hop(self.routing_table(), dest)

    def routing_table(self) -> Mapping[int, RouteEntry]:
        raise NotImplementedError


def dump_routes(t: float, node: int, table: Mapping[int, RouteEntry]) -> list[str]:
    """Table snapshot as `t node dest next_hop metric seq` lines, sorted by dest."""
    lines = []
    for dest in sorted(table):
        e = table[dest]
        lines.append(f"{t:g} {node} {dest} {e.next_hop} {e.metric:g} {e.seq}")
    return lines
