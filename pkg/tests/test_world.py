"""Placement, waypoint interpolation, unit-disk adjacency, and broadcast accounting."""

import math

import pytest

from proasim.kernel import RngStream
from proasim.world import (
    MobilityConfig,
    RadioParams,
    Trajectory,
    World,
    build_trajectory,
    init_positions,
    link_events,
    neighbors,
    tx_delay,
)


def static_world(points, radio_range=250.0, bandwidth=2e6):
    trajs = [Trajectory([(0.0, 1000.0, x, y, 0.0, 0.0)], 1000.0) for x, y in points]
    return World(trajs, RadioParams(range=radio_range, bandwidth=bandwidth))


def test_init_positions_in_bounds():
    rng = RngStream(1, "placement")
    pts = init_positions(50, (1000.0, 1000.0), rng)
    assert len(pts) == 50
    assert all(0 <= x <= 1000 and 0 <= y <= 1000 for x, y in pts)


def test_init_positions_deterministic():
    a = init_positions(10, (1000.0, 1000.0), RngStream(5, "placement"))
    b = init_positions(10, (1000.0, 1000.0), RngStream(5, "placement"))
    assert a == b


def test_init_positions_rejects_zero_area():
    with pytest.raises(ValueError):
        init_positions(3, (0.0, 100.0), RngStream(1, "placement"))


def test_position_interpolates_linearly():
    # leg (0,0) -> (100,0) at 10 m/s: halfway after 5 s
    traj = Trajectory([(0.0, 10.0, 0.0, 0.0, 10.0, 0.0),
                       (10.0, 20.0, 100.0, 0.0, 0.0, 0.0)], 20.0)
    assert traj.position_at(5.0) == (50.0, 0.0)
    assert traj.position_at(10.0) == (100.0, 0.0)  # exactly at arrival


def test_static_when_pause_spans_run():
    mob = MobilityConfig(speed_min=1, speed_max=5, pause=500.0)
    traj = build_trajectory((10.0, 20.0), (100.0, 100.0), mob, 400.0, RngStream(1, "mobility"))
    for t in (0.0, 123.4, 400.0):
        assert traj.position_at(t) == (10.0, 20.0)
    assert traj.is_static


def test_trajectory_continuity_respects_speed_cap():
    mob = MobilityConfig(speed_min=1.0, speed_max=7.0, pause=2.0)
    rng = RngStream(3, "mobility")
    traj = build_trajectory((50.0, 50.0), (500.0, 500.0), mob, 300.0, rng)
    eps = 0.05
    t = 0.0
    while t + eps <= 300.0:
        (x0, y0), (x1, y1) = traj.position_at(t), traj.position_at(t + eps)
        d = math.hypot(x1 - x0, y1 - y0)
        assert d <= 7.0 * eps + 1e-9
        t += 7.13
    assert all(0 <= leg[2] <= 500 and 0 <= leg[3] <= 500 for leg in traj.legs)


def test_neighbors_within_range_only():
    pts = [(0.0, 0.0), (0.0, 100.0), (0.0, 300.0)]
    assert neighbors(pts, 0, 250.0) == {1}
    assert neighbors(pts, 1, 250.0) == {0, 2}
    assert neighbors(pts, 2, 250.0) == {1}


def test_single_node_has_no_neighbors():
    assert neighbors([(5.0, 5.0)], 0, 250.0) == set()


def test_neighbor_relation_is_symmetric():
    rng = RngStream(11, "placement")
    pts = init_positions(30, (800.0, 800.0), rng)
    for a in range(30):
        for b in neighbors(pts, a, 250.0):
            assert a in neighbors(pts, b, 250.0)


def test_tx_delay_values():
    assert tx_delay(512, 2e6) == pytest.approx(0.002048)
    assert tx_delay(0, 2e6) == 0.0
    assert tx_delay(1024, 2e6) == pytest.approx(0.004096)


def test_broadcast_reaches_neighbors_at_equal_time_and_counts_once():
    w = static_world([(0.0, 0.0), (100.0, 0.0), (0.0, 100.0), (600.0, 600.0)])
    arrivals = w.broadcast(0, 512, t=1.0)
    assert [(r, round(at, 6)) for r, at in arrivals] == [(1, 1.002048), (2, 1.002048)]
    assert w.tx_count[0] == 1


def test_isolated_broadcast_still_counts():
    w = static_world([(0.0, 0.0), (900.0, 900.0)])
    assert w.broadcast(0, 64, t=0.0) == []
    assert w.tx_count[0] == 1


def test_broadcast_membership_at_send_time():
    # node 1 walks out of range by t=30: excluded even though it was close earlier
    legs0 = [(0.0, 100.0, 0.0, 0.0, 0.0, 0.0)]
    legs1 = [(0.0, 100.0, 200.0, 0.0, 10.0, 0.0)]  # at t=30 it sits at 500 m
    w = World([Trajectory(legs0, 100.0), Trajectory(legs1, 100.0)], RadioParams())
    assert w.broadcast(0, 64, t=0.0) != []
    assert w.broadcast(0, 64, t=30.0) == []


def test_link_events_are_set_differences():
    e = lambda a, b: frozenset((a, b))
    prev = {e(0, 1), e(1, 2)}
    assert link_events(prev, prev) == (set(), set())
    assert link_events(prev, {e(0, 1)}) == (set(), {e(1, 2)})
    up, down = link_events(prev, {e(0, 1), e(0, 2)})
    assert up == {e(0, 2)} and down == {e(1, 2)}
