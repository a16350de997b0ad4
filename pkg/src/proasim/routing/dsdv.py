"""DSDV: destination-originated even sequence numbers, periodic full/incremental
dumps, triggered updates on link breakage, settling-time gating of advertisements."""

from __future__ import annotations

from dataclasses import dataclass

from .base import DSDV_UPDATE, INF_METRIC, ControlPacket, Protocol, RouteEntry

KEEP = "keep"
REPLACE = "replace"


@dataclass
class DsdvEntry:
    dest: int
    next_hop: int
    metric: float
    seq: int
    install_time: float
    settle_deadline: float | None = None

    @property
    def valid(self) -> bool:
        # even sequence number means the route is usable; odd means broken
        return self.seq % 2 == 0 and self.metric < INF_METRIC


@dataclass(frozen=True)
class DsdvConfig:
    periodic_interval: float = 15.0
    settling_time: float = 5.0
    full_dump_every: int = 4
    buffer_timeout: float = 15.0

    def __post_init__(self):
        if self.periodic_interval <= 0 or self.settling_time <= 0 or self.full_dump_every <= 0:
            raise ValueError("DSDV timers must be positive")


def dsdv_compare(candidate: DsdvEntry, existing: DsdvEntry | None) -> str:
    """Freshness first: higher seq wins; at equal seq a lower metric wins."""
    if existing is None:
        return REPLACE
    if candidate.seq > existing.seq:
        return REPLACE
    if candidate.seq == existing.seq and candidate.metric < existing.metric:
        return REPLACE
    return KEEP


class DsdvProtocol(Protocol):
    name = "dsdv"
    buffers_data = True

    def __init__(self, node: int, env, n_nodes: int, config: DsdvConfig | None = None):
        super().__init__(node, env, n_nodes)
        self.config = config or DsdvConfig()
        self.own_seq = 0
        self.round = 0
        self.pkt_seq = 0
        self.table: dict[int, DsdvEntry] = {
            node: DsdvEntry(node, node, 0, 0, 0.0)
        }
        self.changed: set[int] = set()
        self._route_view: dict[int, RouteEntry] | None = None

    # -- lifecycle ---------------------------------------------------------

    def on_start(self):
        self.env.schedule(0.0, "periodic")

    def on_timer(self, label: str):
        if label != "periodic":
            return
        self.round += 1
        self._advertise(full=(self.round % self.config.full_dump_every == 0))
        self.env.schedule(self.config.periodic_interval, "periodic")

    def on_control(self, packet: ControlPacket, sender: int):
        if packet.kind != DSDV_UPDATE:
            return
        now = self.env.now()
        triggered: list[tuple[int, float, int]] = []
        for dest, metric, seq in packet.payload:
            if dest == self.node:
                continue
            existing = self.table.get(dest)
            if seq % 2 == 1:
                # breakage news concerns us only if our route runs through the
                # advertiser; disjoint paths stay up, and a strictly fresher
                # valid route is answered back so the cut subtree can re-attach
                if existing is None or not existing.valid:
                    continue
                if existing.seq > seq:
                    triggered.append((dest, existing.metric, existing.seq))
                    continue
                if existing.next_hop != sender:
                    continue
                existing.metric = INF_METRIC
                existing.seq = seq
                existing.install_time = now
                existing.settle_deadline = None
                self.changed.add(dest)
                self._route_view = None
                triggered.append((dest, INF_METRIC, seq))
                continue
            cand_metric = metric if metric == INF_METRIC else metric + 1
            cand = DsdvEntry(dest, sender, cand_metric, seq, now)
            if dsdv_compare(cand, existing) is not REPLACE:
                continue
            if existing is not None and seq == existing.seq:
                # same-seq metric improvement: forward on it now, advertise
                # only once it has stayed best for the settling window
                cand.settle_deadline = now + self.config.settling_time
            elif existing is not None and not existing.valid:
                # a broken destination came back: spread the repair at once
                triggered.append((dest, cand.metric, cand.seq))
            self.table[dest] = cand
            self.changed.add(dest)
            self._route_view = None
        if triggered:
            self._send_triggered(triggered)

    def on_link_down(self, neighbor: int):
        now = self.env.now()
        broken: list[tuple[int, float, int]] = []
        for entry in self.table.values():
            if entry.next_hop == neighbor and entry.dest != self.node and entry.valid:
                entry.metric = INF_METRIC
                entry.seq += 1
                entry.install_time = now
                entry.settle_deadline = None
                broken.append((entry.dest, INF_METRIC, entry.seq))
                self.changed.add(entry.dest)
        if broken:
            self._route_view = None
            self._send_triggered(broken)

    # -- advertisement -----------------------------------------------------

    def _advertisable(self, dest: int, now: float) -> bool:
        entry = self.table[dest]
        if entry.settle_deadline is not None:
            if now < entry.settle_deadline:
                return False
            entry.settle_deadline = None
        return True

    def _advertise(self, full: bool):
        now = self.env.now()
        self.own_seq += 2
        own = self.table[self.node]
        own.seq = self.own_seq
        own.install_time = now
        dests = sorted(self.table) if full else sorted(self.changed | {self.node})
        entries = []
        for dest in dests:
            if dest != self.node and not self._advertisable(dest, now):
                continue
            e = self.table[dest]
            entries.append((dest, e.metric, e.seq))
            self.changed.discard(dest)
        self.pkt_seq += 1
        pkt = ControlPacket(self.node, DSDV_UPDATE, self.pkt_seq, tuple(entries),
                            self.env.packet_size(len(entries)))
        self.env.send_control(pkt)

    def _send_triggered(self, broken):
        self.pkt_seq += 1
        pkt = ControlPacket(self.node, DSDV_UPDATE, self.pkt_seq, tuple(sorted(broken)),
                            self.env.packet_size(len(broken)))
        self.env.send_control(pkt)

    # -- routing -----------------------------------------------------------

    def routing_table(self):
        if self._route_view is None:
            self._route_view = {
                e.dest: RouteEntry(e.dest, e.next_hop, e.metric, e.seq, e.install_time)
                for e in self.table.values()
                if e.valid
            }
        return self._route_view
