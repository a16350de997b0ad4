"""Simulation engine: wires the event queue, world, protocols, traffic and ledger."""

from __future__ import annotations

from .config import ScenarioConfig
from .kernel import EventQueue, RngStream
from .metrics import MetricsLedger
from .routing.base import (
    BUFFER,
    BUFFERED_TIMEOUT,
    CHANNEL_LOSS,
    DELIVER,
    DROP,
    FORWARD,
    DataPacket,
    dump_routes,
    forward_data,
)
from .routing.dsdv import DsdvConfig, DsdvProtocol
from .routing.fsr import FsrConfig, FsrProtocol
from .routing.olsr import OlsrConfig, OlsrProtocol
from .traffic import CbrFlow, pick_flow_pairs, schedule_flows
from .world import MobilityConfig, RadioParams, World, build_trajectory, init_positions, tx_delay


class NodeEnv:
    """Per-node handle protocols use to reach the world: clock, timers, broadcast."""

    def __init__(self, sim: "Simulation", node: int):
        self.sim = sim
        self.node = node

    def now(self) -> float:
        return self.sim.queue.now

    def schedule(self, delay: float, label: str):
        return self.sim.queue.schedule(self.sim.queue.now + delay, ("timer", self.node, label))

    def cancel(self, handle) -> bool:
        return self.sim.queue.cancel(handle)

    def packet_size(self, entries: int) -> int:
        radio = self.sim.world.radio
        return radio.ctrl_header + radio.ctrl_entry * entries

    def send_control(self, packet):
        self.sim.broadcast_control(self.node, packet)


def _make_protocol(config: ScenarioConfig, node: int, env: NodeEnv):
    if config.protocol == "dsdv":
        return DsdvProtocol(node, env, config.nodes, DsdvConfig(
            periodic_interval=config.dsdv_periodic,
            settling_time=config.dsdv_settling,
            full_dump_every=config.dsdv_full_dump_every,
            buffer_timeout=config.dsdv_buffer_timeout))
    if config.protocol == "fsr":
        return FsrProtocol(node, env, config.nodes, FsrConfig(
            scope_radii=tuple(config.fsr_radii),
            scope_intervals=tuple(config.fsr_intervals)))
    if config.protocol == "olsr":
        return OlsrProtocol(node, env, config.nodes, OlsrConfig(
            hello_interval=config.olsr_hello, tc_interval=config.olsr_tc))
    raise ValueError(f"unknown protocol {config.protocol!r}")


class Simulation:
    """One deterministic run of a scenario.

    All randomness comes from named streams seeded by (config.seed, label), so
    identical configs replay identical event traces.
    """

    def __init__(self, config: ScenarioConfig, positions=None, flows=None):
        self.config = config
        self.queue = EventQueue()
        self.ledger = MetricsLedger()
        area = (config.area_x, config.area_y)
        horizon = config.duration + 1.0

        if positions is None:
            positions = init_positions(config.nodes, area, RngStream(config.seed, "placement"))
        mobility = MobilityConfig(config.speed_min, config.speed_max, config.pause)
        mob_rng = RngStream(config.seed, "mobility")
        trajectories = [build_trajectory(p, area, mobility, horizon, mob_rng) for p in positions]
        radio = RadioParams(range=config.range, bandwidth=config.bandwidth)
        loss_rng = RngStream(config.seed, "loss") if config.loss_prob > 0 else None
        self.world = World(trajectories, radio, config.loss_prob, loss_rng)

        self.protocols = [_make_protocol(config, i, NodeEnv(self, i)) for i in range(config.nodes)]
        self.buffers: dict[int, dict[int, list[DataPacket]]] = {}

        if flows is None:
            pairs = pick_flow_pairs(config.nodes, config.flows, RngStream(config.seed, "traffic"))
            flows = [CbrFlow(src, dst, config.flow_rate, config.packet_size,
                             config.flow_start, config.effective_flow_stop)
                     for src, dst in pairs]
        self.flows = flows
        for t, flow_idx, seq in schedule_flows(flows):
            self.queue.schedule(t, ("traffic", flow_idx, seq))

        self._prev_edges = None
        if not self.world.static:
            self.queue.schedule(config.link_sample_interval, ("link-sample",))
        self.trace_tables: list[str] = []
        self.trace_positions: list[str] = []
        self._trajectory_dump = False
        for proto in self.protocols:
            proto.on_start()

    # -- event plumbing ------------------------------------------------------

    def dispatch(self, payload):
        kind = payload[0]
        if kind == "ctrl":
            _, receivers, packet, sender = payload
            for r in receivers:
                self.protocols[r].on_control(packet, sender)
                self._release_buffers(r)
        elif kind == "data":
            node, packet = payload[1], payload[2]
            if self.world.loss_prob > 0 and self.world.loss_rng.random() < self.world.loss_prob:
                self.ledger.record_drop(packet, CHANNEL_LOSS)
            else:
                self._handle_data(node, packet)
        elif kind == "timer":
            _, node, label = payload
            self.protocols[node].on_timer(label)
            self._release_buffers(node)
        elif kind == "traffic":
            _, flow_idx, seq = payload
            flow = self.flows[flow_idx]
            pkt = DataPacket(flow.src, flow.dst, flow.size, self.config.effective_ttl,
                             self.queue.now, flow_idx, seq)
            self.ledger.record_sent(pkt)
            self._handle_data(flow.src, pkt)
        elif kind == "link-sample":
            self._sample_links()
        elif kind == "buffer-timeout":
            self._buffer_timeout(payload[1], payload[2])
        elif kind == "trajectory-dump":
            self._dump_positions()

    def broadcast_control(self, node: int, packet):
        now = self.queue.now
        self.ledger.record_control(packet.kind, packet.size)
        arrivals = self.world.broadcast(node, packet.size, now)
        if arrivals:
            receivers = tuple(r for r, _ in arrivals)
            self.queue.schedule(arrivals[0][1], ("ctrl", receivers, packet, node))

    def _handle_data(self, node: int, packet: DataPacket):
        proto = self.protocols[node]
        neighbors = self.world.neighbors_at(self.queue.now, node)
        decision = forward_data(node, packet, proto.routing_table(), neighbors,
                                allow_buffer=proto.buffers_data)
        if decision.action == DELIVER:
            self.ledger.record_delivered(packet, self.queue.now)
        elif decision.action == FORWARD:
            packet.ttl -= 1
            delay = tx_delay(packet.size, self.world.radio.bandwidth)
            self.queue.schedule(self.queue.now + delay, ("data", decision.next_hop, packet))
        elif decision.action == BUFFER:
            self.buffers.setdefault(node, {}).setdefault(packet.dst, []).append(packet)
            timeout = getattr(proto.config, "buffer_timeout", 5.0)
            self.queue.schedule(self.queue.now + timeout, ("buffer-timeout", node, packet))
        else:
            self.ledger.record_drop(packet, decision.reason)

    def _release_buffers(self, node: int):
        buf = self.buffers.get(node)
        if not buf:
            return
        proto = self.protocols[node]
        for dest in [d for d in buf if proto.next_hop(d) is not None]:
            for pkt in buf.pop(dest):
                self._handle_data(node, pkt)

    def _buffer_timeout(self, node: int, packet: DataPacket):
        queue = self.buffers.get(node, {}).get(packet.dst)
        if queue and packet in queue:
            queue.remove(packet)
            self.ledger.record_drop(packet, BUFFERED_TIMEOUT)

    def _sample_links(self):
        now = self.queue.now
        edges = self.world.edges_at(now)
        if self._prev_edges is not None:
            down = self._prev_edges - edges
            for pair in sorted(down, key=sorted):
                a, b = sorted(pair)
                self.protocols[a].on_link_down(b)
                self.protocols[b].on_link_down(a)
                self._release_buffers(a)
                self._release_buffers(b)
        self._prev_edges = edges
        nxt = now + self.config.link_sample_interval
        if nxt <= self.config.duration:
            self.queue.schedule(nxt, ("link-sample",))

    # -- dumps ---------------------------------------------------------------

    def enable_trajectory_dump(self, period: float = 1.0):
        self._trajectory_dump = True
        self._dump_period = period
        self.queue.schedule(self.queue.now, ("trajectory-dump",))

    def _dump_positions(self):
        t = self.queue.now
        pos = self.world.positions_at(t)
        for i, (x, y) in enumerate(pos):
            self.trace_positions.append(f"{t:g} {i} {x:.3f} {y:.3f}")
        nxt = t + self._dump_period
        if nxt <= self.config.duration:
            self.queue.schedule(nxt, ("trajectory-dump",))

    def dump_tables(self) -> list[str]:
        lines = []
        for i, proto in enumerate(self.protocols):
            lines.extend(dump_routes(self.queue.now, i, proto.routing_table()))
        return lines

    # -- running -------------------------------------------------------------

    def run_until(self, t: float) -> int:
        self._prev_edges = self._prev_edges if self._prev_edges is not None \
            else self.world.edges_at(0.0)
        return self.queue.run(t, self.dispatch)

    def run(self) -> int:
        return self.run_until(self.config.duration)

    def in_flight(self) -> int:
        pending_data = sum(1 for ev in self.queue.pending() if ev.payload[0] == "data")
        buffered = sum(len(q) for buf in self.buffers.values() for q in buf.values())
        return pending_data + buffered

    def control_tx_total(self) -> int:
        return sum(self.world.tx_count)
