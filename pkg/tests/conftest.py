"""Shared test harness: a fake protocol environment and independent graph oracles."""

import itertools
from collections import deque

from proasim.routing.base import ControlPacket


class FakeEnv:
    """Stands in for the engine: records broadcasts and timers, no event loop."""

    def __init__(self):
        self.t = 0.0
        self.sent = []
        self.timers = []

    def now(self):
        return self.t

    def schedule(self, delay, label):
        self.timers.append((self.t + delay, label))
        return (self.t + delay, label)

    def cancel(self, handle):
        return False

    def packet_size(self, entries):
        return 20 + 12 * entries

    def send_control(self, packet: ControlPacket):
        self.sent.append(packet)


def oracle_distances(adj, source):
    """Plain BFS hop counts, kept independent of the package's path helper."""
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for v in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def oracle_min_cover(cover_sets, targets):
    """Exhaustive minimum-cover size over subsets of the candidate neighbors."""
    candidates = sorted(cover_sets)
    if not targets:
        return 0
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            covered = set()
            for c in combo:
                covered |= cover_sets[c]
            if targets <= covered:
                return size
    return None  # not coverable
