"""DSDV: sequence-number comparison, periodic dumps, settling, breakage handling."""

import math

from conftest import FakeEnv

from proasim.routing.base import DSDV_UPDATE, INF_METRIC, ControlPacket
from proasim.routing.dsdv import KEEP, REPLACE, DsdvConfig, DsdvEntry, DsdvProtocol, dsdv_compare


def make(node=0, n=10, **cfg):
    env = FakeEnv()
    proto = DsdvProtocol(node, env, n, DsdvConfig(**cfg) if cfg else None)
    return proto, env


def update(origin, entries, seq=1):
    size = 20 + 12 * len(entries)
    return ControlPacket(origin, DSDV_UPDATE, seq, tuple(entries), size)


def e(dest, nh, metric, seq, settle=None):
    return DsdvEntry(dest, nh, metric, seq, 0.0, settle)


def test_compare_prefers_newer_sequence_even_with_worse_metric():
    assert dsdv_compare(e(9, 1, 5, 102), e(9, 2, 3, 100)) is REPLACE


def test_compare_equal_seq_prefers_fewer_hops():
    assert dsdv_compare(e(9, 1, 2, 100), e(9, 2, 3, 100)) is REPLACE
    assert dsdv_compare(e(9, 1, 3, 100), e(9, 2, 3, 100)) is KEEP
    assert dsdv_compare(e(9, 1, 4, 100), e(9, 2, 3, 100)) is KEEP


def test_compare_no_existing():
    assert dsdv_compare(e(9, 1, 7, 4), None) is REPLACE


def test_compare_breakage_supersedes_lower_seq():
    assert dsdv_compare(e(9, 1, INF_METRIC, 101), e(9, 2, 3, 100)) is REPLACE


def test_periodic_full_dump_includes_all_entries():
    proto, env = make(full_dump_every=4)
    for d in range(1, 5):
        proto.on_control(update(d, [(d, 0, 10)]), sender=d)
    proto.round = 3
    proto.on_timer("periodic")  # round 4: full dump
    pkt = env.sent[-1]
    assert len(pkt.payload) == 5  # 4 learned + self
    assert pkt.size == 20 + 5 * 12


def test_periodic_incremental_refreshes_own_entry_only():
    proto, env = make()
    proto.on_timer("periodic")  # round 1, nothing learned
    pkt = env.sent[-1]
    assert pkt.payload == ((0, 0, 2),)  # own seq bumped by 2
    proto.on_timer("periodic")
    assert env.sent[-1].payload == ((0, 0, 4),)


def test_own_sequence_advances_by_two_per_round():
    proto, env = make()
    for _ in range(3):
        proto.on_timer("periodic")
    assert [p.payload[0][2] for p in env.sent] == [2, 4, 6]
    assert all(s % 2 == 0 for _, _, s in [p.payload[0] for p in env.sent])


def test_link_down_marks_broken_and_triggers():
    proto, env = make()
    proto.on_control(update(1, [(1, 0, 10), (7, 1, 20)]), sender=1)
    env.t = 3.0
    proto.on_link_down(1)
    pkt = env.sent[-1]
    assert pkt.payload == ((1, INF_METRIC, 11), (7, INF_METRIC, 21))
    assert proto.next_hop(7) is None  # broken routes leave the table view


def test_link_down_without_routes_is_silent():
    proto, env = make()
    proto.on_link_down(5)
    assert env.sent == []


def test_settling_defers_advertisement_but_not_forwarding():
    proto, env = make(settling_time=5.0, periodic_interval=15.0)
    proto.on_control(update(1, [(9, 2, 10)]), sender=1)   # metric 3 via 1
    proto.on_control(update(2, [(9, 1, 10)]), sender=2)   # better: metric 2 via 2
    assert proto.next_hop(9) == 2  # installed for forwarding at once
    env.t = 2.0
    proto.on_timer("periodic")  # settling until t=5: withheld
    dests = [d for d, _, _ in env.sent[-1].payload]
    assert 9 not in dests
    env.t = 20.0
    proto.on_timer("periodic")  # deadline passed: advertised now
    assert (9, 2, 10) in env.sent[-1].payload


def test_stale_sequence_is_ignored():
    proto, env = make()
    proto.on_control(update(1, [(9, 2, 10)]), sender=1)
    proto.on_control(update(2, [(9, 1, 8)]), sender=2)  # older seq, better metric
    assert proto.next_hop(9) == 1
    assert proto.table[9].seq == 10


def test_breakage_advert_from_next_hop_invalidates_and_propagates():
    proto, env = make()
    proto.on_control(update(1, [(9, 2, 10)]), sender=1)
    n_sent = len(env.sent)
    proto.on_control(update(1, [(9, INF_METRIC, 11)]), sender=1)
    assert proto.next_hop(9) is None
    pkt = env.sent[-1]
    assert len(env.sent) == n_sent + 1
    assert pkt.payload == ((9, INF_METRIC, 11),)


def test_breakage_advert_from_disjoint_path_is_ignored():
    proto, env = make()
    proto.on_control(update(1, [(9, 2, 10)]), sender=1)  # route via 1
    n_sent = len(env.sent)
    proto.on_control(update(2, [(9, INF_METRIC, 11)]), sender=2)  # not our path
    assert proto.next_hop(9) == 1
    assert len(env.sent) == n_sent


def test_fresher_valid_route_answers_stale_breakage():
    proto, env = make()
    proto.on_control(update(1, [(9, 2, 12)]), sender=1)
    proto.on_control(update(2, [(9, INF_METRIC, 11)]), sender=2)
    pkt = env.sent[-1]
    assert pkt.payload == ((9, 3, 12),)


def test_repair_after_breakage_is_advertised_immediately():
    proto, env = make()
    proto.on_control(update(1, [(9, 2, 10)]), sender=1)
    proto.on_link_down(1)
    n_sent = len(env.sent)
    proto.on_control(update(2, [(9, 4, 12)]), sender=2)  # fresh valid route
    assert proto.next_hop(9) == 2
    assert len(env.sent) == n_sent + 1
    assert env.sent[-1].payload == ((9, 5, 12),)


def test_sequence_monotonicity_per_destination():
    proto, env = make()
    seqs = [4, 2, 8, 6, 9, 3, 12, 10]
    installed = []
    for i, s in enumerate(seqs):
        proto.on_control(update(1, [(9, i % 3 + 1, s)]), sender=1)
        installed.append(proto.table[9].seq)
    assert installed == sorted(installed)


def test_triggered_updates_only_after_breakage_events():
    # periodic rounds and fresh valid routes alone never trigger extra packets
    proto, env = make()
    proto.on_control(update(1, [(9, 2, 10), (7, 1, 6)]), sender=1)
    proto.on_control(update(2, [(9, 1, 12)]), sender=2)
    proto.on_control(update(3, [(5, 3, 4)]), sender=3)
    assert env.sent == []  # installs alone stay quiet until the next round
    proto.on_timer("periodic")
    assert len(env.sent) == 1
