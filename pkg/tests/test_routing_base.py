"""Routing-table schema, forwarding decisions, BFS helper, dump format."""

import pytest

from proasim.routing.base import (
    BUFFER,
    DELIVER,
    DROP,
    FORWARD,
    NEXT_HOP_UNREACHABLE,
    NO_ROUTE,
    TTL_EXPIRED,
    DataPacket,
    RouteEntry,
    dump_routes,
    forward_data,
    lookup_next_hop,
    shortest_paths,
)


def entry(dest, nh, metric, seq=0):
    return RouteEntry(dest, nh, metric, seq, 0.0)


def test_lookup_next_hop():
    assert lookup_next_hop({}, 4) is None
    table = {0: entry(0, 0, 0), 2: entry(2, 1, 2)}
    assert lookup_next_hop(table, 0) == 0  # self route: next hop self, metric 0
    assert table[0].metric == 0
    assert lookup_next_hop(table, 2) == 1  # chain S-1-2 seen from S


def packet(dst, ttl=10):
    return DataPacket(src=0, dst=dst, size=512, ttl=ttl, send_time=0.0)


def test_forward_local_delivery():
    d = forward_data(3, packet(3), {}, [])
    assert d.action == DELIVER


def test_forward_no_route_drop_and_buffer():
    d = forward_data(0, packet(5), {}, [1])
    assert (d.action, d.reason) == (DROP, NO_ROUTE)
    d = forward_data(0, packet(5), {}, [1], allow_buffer=True)
    assert d.action == BUFFER


def test_forward_unreachable_next_hop():
    table = {5: entry(5, 2, 3)}
    d = forward_data(0, packet(5), table, [1, 3])  # 2 moved out of range
    assert (d.action, d.reason) == (DROP, NEXT_HOP_UNREACHABLE)


def test_forward_happy_path():
    table = {5: entry(5, 2, 3)}
    d = forward_data(0, packet(5), table, [1, 2])
    assert (d.action, d.next_hop) == (FORWARD, 2)


def test_ttl_expiry_at_intermediate_hop():
    table = {5: entry(5, 2, 3)}
    d = forward_data(1, packet(5, ttl=1), table, [2])
    assert (d.action, d.reason) == (DROP, TTL_EXPIRED)
    d = forward_data(1, packet(5, ttl=0), table, [2])
    assert (d.action, d.reason) == (DROP, TTL_EXPIRED)
    # ttl 1 arriving at the destination itself still delivers
    assert forward_data(5, packet(5, ttl=1), table, []).action == DELIVER


def test_shortest_paths_chain_and_tiebreak():
    adj = {0: {1}, 1: {0, 2}, 2: {1, 3}, 3: {2}}
    got = shortest_paths(adj, 0)
    assert got == {1: (1, 1), 2: (1, 2), 3: (1, 3)}
    # equal-length paths via 2 and 5: lower next hop id wins
    adj = {0: {2, 5}, 2: {0, 9}, 5: {0, 9}, 9: {2, 5}}
    assert shortest_paths(adj, 0)[9] == (2, 2)


def test_shortest_paths_skips_unreachable():
    adj = {0: {1}, 1: {0}, 7: {8}, 8: {7}}
    got = shortest_paths(adj, 0)
    assert 7 not in got and 8 not in got


def test_dump_routes_format():
    table = {2: entry(2, 1, 2, seq=14), 0: entry(0, 0, 0, seq=8)}
    lines = dump_routes(3.5, 7, table)
    assert lines == ["3.5 7 0 0 0 8", "3.5 7 2 1 2 14"]
