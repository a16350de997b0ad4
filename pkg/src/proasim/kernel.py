"""Deterministic discrete-event core: clock, ordered event queue, seeded RNG streams."""

from __future__ import annotations

import heapq
import random
from typing import Any, Callable


class SchedulingError(ValueError):
    """Raised when an event is scheduled in the past."""


class DispatchError(RuntimeError):
    """Raised when a dispatcher fails; message carries the simulation clock."""


class Event:
    """A queued occurrence, totally ordered by (fire_at, seq).

    seq is a monotone insertion counter, so simultaneous events dispatch
    in the order they were scheduled.
    """

    __slots__ = ("fire_at", "seq", "payload", "cancelled", "fired")

    def __init__(self, fire_at: float, seq: int, payload: Any):
        self.fire_at = fire_at
        self.seq = seq
        self.payload = payload
        self.cancelled = False
        self.fired = False

    def __lt__(self, other: "Event") -> bool:
        return (self.fire_at, self.seq) < (other.fire_at, other.seq)

    def __repr__(self):
        return f"Event(t={self.fire_at}, seq={self.seq}, {self.payload!r})"


class EventQueue:
    """Priority queue of events with a monotonically non-decreasing clock."""

    def __init__(self):
        self.now = 0.0
        self._heap: list[Event] = []
        self._next_seq = 0

    def __len__(self):
        return sum(1 for ev in self._heap if not ev.cancelled)

    def schedule(self, at: float, payload: Any) -> Event:
        """Enqueue an event at time `at` (must not precede the clock)."""
        if at < self.now:
            raise SchedulingError(f"cannot schedule at t={at}: clock is already {self.now}")
        ev = Event(at, self._next_seq, payload)
        self._next_seq += 1
        heapq.heappush(self._heap, ev)
        return ev

    def cancel(self, ev: Event) -> bool:
        """Cancel an event; True iff it existed and had not yet fired. Idempotent."""
        if ev.fired or ev.cancelled:
            return False
        ev.cancelled = True
        return True

    def run(self, until: float, dispatcher: Callable[[Any], None]) -> int:
        """Dispatch every event with fire_at <= until in order; leave clock at `until`."""
        if until < self.now:
            raise SchedulingError(f"cannot run to t={until}: clock is already {self.now}")
        processed = 0
        heap = self._heap
        while heap and heap[0].fire_at <= until:
            ev = heapq.heappop(heap)
            if ev.cancelled:
                continue
            self.now = ev.fire_at
            ev.fired = True
            try:
                dispatcher(ev.payload)
            except Exception as exc:
                raise DispatchError(f"dispatcher failed at t={self.now}: {exc}") from exc
            processed += 1
        self.now = until
        return processed

    def pending(self) -> list[Event]:
        """Snapshot of not-yet-fired, not-cancelled events (unordered)."""
        return [ev for ev in self._heap if not ev.cancelled]


class RngStream(random.Random):
    """Independent random stream derived from (seed, label).

    Identical (seed, label) pairs always yield the same sequence; distinct
    labels never perturb one another.  Seeding goes through the string path
    of random.Random, which hashes with SHA-512 and is stable across
    processes and platforms.
    """

    def __new__(cls, seed: int, label: str):
        return super().__new__(cls, f"{seed}/{label}")

    def __init__(self, seed: int, label: str):
        super().__init__(f"{seed}/{label}")
        self.seed_value = seed
        self.label = label
