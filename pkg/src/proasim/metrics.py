"""Run accounting and the three reported metrics: throughput, delay, routing load."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class MetricsLedger:
    """Counts of data and control traffic; conservation:
    data_sent == data_delivered + dropped + in_flight at every event boundary."""

    data_sent: int = 0
    data_delivered: int = 0
    delivered_bytes: int = 0
    drops: Counter = field(default_factory=Counter)
    latencies: list = field(default_factory=list)  # (send_time, deliver_time)
    control_count: Counter = field(default_factory=Counter)  # per packet kind
    control_bytes: Counter = field(default_factory=Counter)

    def record_sent(self, packet):
        self.data_sent += 1

    def record_delivered(self, packet, now: float):
        self.data_delivered += 1
        self.delivered_bytes += packet.size
        self.latencies.append((packet.send_time, now))

    def record_drop(self, packet, reason: str):
        self.drops[reason] += 1

    def record_control(self, kind: str, size: int):
        self.control_count[kind] += 1
        self.control_bytes[kind] += size

    @property
    def data_dropped(self) -> int:
        return sum(self.drops.values())

    @property
    def ctrl_pkts(self) -> int:
        return sum(self.control_count.values())

    @property
    def ctrl_bytes(self) -> int:
        return sum(self.control_bytes.values())

    def in_flight(self) -> int:
        return self.data_sent - self.data_delivered - self.data_dropped


@dataclass(frozen=True)
class MetricsReport:
    """None marks a quantity that is undefined for the run (e.g. nothing delivered);
    it is never reported as 0, which would fake a perfect result."""

    throughput_bps: float
    avg_delay_s: float | None
    nrl: float | None
    delivery_ratio: float | None


def report(ledger: MetricsLedger, duration: float) -> MetricsReport:
    if duration <= 0:
        raise ValueError("duration must be positive")
    throughput = ledger.delivered_bytes * 8.0 / duration
    if ledger.data_delivered > 0:
        avg_delay = sum(d - s for s, d in ledger.latencies) / ledger.data_delivered
        nrl = ledger.ctrl_pkts / ledger.data_delivered
    else:
        avg_delay = None
        nrl = None
    ratio = ledger.data_delivered / ledger.data_sent if ledger.data_sent > 0 else None
    return MetricsReport(throughput, avg_delay, nrl, ratio)
