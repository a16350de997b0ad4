"""OLSR: HELLO link sensing with 2-hop discovery, greedy multipoint-relay
selection, TC generation by selected relays only, and MPR-restricted flooding."""

from __future__ import annotations

from dataclasses import dataclass

from .base import OLSR_HELLO, OLSR_TC, ControlPacket, Protocol, RouteEntry, shortest_paths

ASYM = "asym"
SYM = "sym"
MPR = "mpr"  # symmetric neighbor the sender has picked as relay

DEFAULT_WILLINGNESS = 3


@dataclass
class NeighborRecord:
    id: int
    status: str
    willingness: int
    last_heard: float


@dataclass(frozen=True)
class OlsrConfig:
    hello_interval: float = 1.0
    tc_interval: float = 2.0
    hold_factor: float = 3.0  # validity = hold_factor * originating interval

    def __post_init__(self):
        if self.hello_interval <= 0 or self.tc_interval <= 0:
            raise ValueError("OLSR intervals must be positive")


def select_mprs(sym_neighbors: dict[int, int], two_hop: dict[int, set[int]]) -> set[int]:
    """Greedy cover of the 2-hop neighborhood.

    sym_neighbors maps neighbor id -> willingness; two_hop maps neighbor id ->
    the 2-hop nodes reachable through it.  Willingness-0 neighbors are never
    picked; sole-access neighbors always are; remaining ties break by higher
    willingness, then higher 2-hop degree, then lower id.
    """
    willing = {n for n, w in sym_neighbors.items() if w > 0}
    cover = {n: set(two_hop.get(n, ())) - set(sym_neighbors) for n in willing}
    uncovered = set().union(*cover.values()) if cover else set()
    mpr: set[int] = set()

    for target in sorted(uncovered):
        reachers = [n for n in willing if target in cover[n]]
        if len(reachers) == 1:
            mpr.add(reachers[0])
    for n in mpr:
        uncovered -= cover[n]

    while uncovered:
        best = max(
            willing - mpr,
            key=lambda n: (len(cover[n] & uncovered), sym_neighbors[n], len(cover[n]), -n),
        )
        gained = cover[best] & uncovered
        assert gained, "greedy step must always cover something new"
        mpr.add(best)
        uncovered -= gained
    return mpr


def olsr_routes(sym_neighbors, topology_edges, self_id: int) -> dict[int, RouteEntry]:
    """Shortest hops over own symmetric links plus advertised relay->selector edges."""
    adj: dict[int, set[int]] = {self_id: set()}
    for n in sym_neighbors:
        adj[self_id].add(n)
        adj.setdefault(n, set()).add(self_id)
    for last_hop, dest in topology_edges:
        adj.setdefault(last_hop, set()).add(dest)
        adj.setdefault(dest, set()).add(last_hop)
    return {
        dest: RouteEntry(dest, nh, metric, 0, 0.0)
        for dest, (nh, metric) in shortest_paths(adj, self_id).items()
    }


class OlsrProtocol(Protocol):
    name = "olsr"

    def __init__(self, node: int, env, n_nodes: int, config: OlsrConfig | None = None,
                 willingness: int = DEFAULT_WILLINGNESS):
        super().__init__(node, env, n_nodes)
        self.config = config or OlsrConfig()
        self.willingness = willingness
        self.neighbors: dict[int, NeighborRecord] = {}
        self.two_hop: dict[int, tuple[set[int], float]] = {}
        self.selectors: dict[int, float] = {}
        self.mpr_set: set[int] = set()
        # topology: (last_hop, dest) -> heard_at; ansn freshness per origin
        self.topology: dict[tuple[int, int], float] = {}
        self.origin_ansn: dict[int, int] = {}
        self.duplicates: set[tuple[int, int]] = set()
        self.ansn = 0
        self.tc_seq = 0
        self.hello_seq = 0
        self._last_tc_at = -1e18
        self._table: dict[int, RouteEntry] | None = None

    # -- lifecycle ---------------------------------------------------------

    def on_start(self):
        self.env.schedule(0.0, "hello")
        self.env.schedule(0.0, "tc")

    def on_timer(self, label: str):
        if label == "hello":
            self._purge()
            self._send_hello()
            self.env.schedule(self.config.hello_interval, "hello")
        elif label == "tc":
            self._purge()
            self._send_tc()
            self.env.schedule(self.config.tc_interval, "tc")

    def on_control(self, packet: ControlPacket, sender: int):
        if packet.kind == OLSR_HELLO:
            self._on_hello(packet, sender)
        elif packet.kind == OLSR_TC:
            self._on_tc(packet, sender)

    def on_link_down(self, neighbor: int):
        # no link-layer feedback: broken links surface through HELLO hold
        # expiry, and TCs are only ever triggered by selector-set changes
        pass

    # -- HELLO -------------------------------------------------------------

    def _send_hello(self):
        now = self.env.now()
        entries = []
        for nid in sorted(self.neighbors):
            rec = self.neighbors[nid]
            if rec.status == SYM and nid in self.mpr_set:
                entries.append((nid, MPR))
            else:
                entries.append((nid, rec.status))
        self.hello_seq += 1
        pkt = ControlPacket(self.node, OLSR_HELLO, self.hello_seq, tuple(entries),
                            self.env.packet_size(len(entries)))
        self.env.send_control(pkt)

    def _on_hello(self, packet: ControlPacket, sender: int):
        now = self.env.now()
        listed = {nid: status for nid, status in packet.payload}
        status = SYM if self.node in listed else ASYM
        self.neighbors[sender] = NeighborRecord(sender, status, DEFAULT_WILLINGNESS, now)
        if listed.get(self.node) == MPR:
            selector_change = sender not in self.selectors
            self.selectors[sender] = now
        else:
            selector_change = self.selectors.pop(sender, None) is not None
        two = {nid for nid, st in listed.items() if st in (SYM, MPR) and nid != self.node}
        self.two_hop[sender] = (two, now)
        self._reselect_mprs()
        self._table = None
        if selector_change:
            self._triggered_tc()

    # -- TC ----------------------------------------------------------------

    def _send_tc(self, now: float | None = None):
        if not self.selectors:
            return
        now = self.env.now() if now is None else now
        self.ansn += 1
        self.tc_seq += 1
        selectors = tuple(sorted(self.selectors))
        pkt = ControlPacket(self.node, OLSR_TC, self.tc_seq, (self.ansn, selectors),
                            self.env.packet_size(len(selectors)))
        self._last_tc_at = now
        self.duplicates.add((self.node, self.tc_seq))  # never re-forward an echo
        self.env.send_control(pkt)

    def _triggered_tc(self):
        # immediate TC on selector-set change, at most one per tc_interval/2
        now = self.env.now()
        if now - self._last_tc_at >= self.config.tc_interval / 2:
            self._send_tc(now)

    def _on_tc(self, packet: ControlPacket, sender: int):
        now = self.env.now()
        origin = packet.origin
        key = (origin, packet.seq)
        fresh = key not in self.duplicates
        self.duplicates.add(key)
        if origin != self.node:
            ansn, listed = packet.payload
            stored = self.origin_ansn.get(origin)
            if stored is None or ansn > stored:
                self.origin_ansn[origin] = ansn
                for edge in [e for e in self.topology if e[0] == origin]:
                    del self.topology[edge]
                for dest in listed:
                    self.topology[(origin, dest)] = now
                self._table = None
            elif ansn == stored:
                for dest in listed:
                    self.topology[(origin, dest)] = now
        if fresh and sender in self.selectors:
            # the sender picked us as MPR: we owe the flood one retransmission
            self.env.send_control(packet)

    # -- state upkeep ------------------------------------------------------

    def _purge(self):
        now = self.env.now()
        hold = self.config.hold_factor * self.config.hello_interval
        stale = [n for n, rec in self.neighbors.items() if now - rec.last_heard > hold]
        changed = bool(stale)
        for n in stale:
            del self.neighbors[n]
            self.two_hop.pop(n, None)
        for n in [n for n, t in self.two_hop.items() if now - t[1] > hold]:
            self.two_hop.pop(n, None)
            changed = True
        for n in [n for n, t in self.selectors.items() if now - t > hold]:
            del self.selectors[n]
        tc_hold = self.config.hold_factor * self.config.tc_interval
        dead = [e for e, t in self.topology.items() if now - t > tc_hold]
        for e in dead:
            del self.topology[e]
        if changed:
            self._reselect_mprs()
        if changed or dead:
            self._table = None

    def _reselect_mprs(self):
        sym = {n: rec.willingness for n, rec in self.neighbors.items()
               if rec.status == SYM}
        reach = {n: nodes for n, (nodes, _) in self.two_hop.items() if n in sym}
        self.mpr_set = select_mprs(sym, reach)

    def routing_table(self):
        if self._table is None:
            sym = [n for n, rec in self.neighbors.items() if rec.status == SYM]
            self._table = olsr_routes(sym, list(self.topology), self.node)
        return self._table
