import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablenet.route import (
    NO_ROUTE,
    NoRouteError,
    Ordering,
    Route,
    merge,
    merge_all,
    parse_prefix,
    parse_tag,
    route_from_json,
    route_to_json,
)

NODES = ("A", "B", "C", "E")
TAGS = ("1:0", "100:2")
ORDER = Ordering(NODES, TAGS)

routes = st.one_of(
    st.just(NO_ROUTE),
    st.builds(
        Route,
        prefix=st.sampled_from([0, 1, 0x0A000000, 0xFFFFFFFF]),
        lp=st.sampled_from([0, 100, 200, 300]),
        path_len=st.integers(0, 4),
        visited=st.frozensets(st.sampled_from(NODES)),
        comms=st.frozensets(st.sampled_from(TAGS)),
    ),
)


def test_higher_lp_wins():
    a = Route(lp=300, path_len=2)
    b = Route(lp=100, path_len=1)
    assert merge(a, b, ORDER) == a
    assert merge(b, a, ORDER) == a


def test_shorter_path_wins_on_lp_tie():
    a = Route(lp=100, path_len=1)
    b = Route(lp=100, path_len=2)
    assert merge(b, a, ORDER) == a


def test_no_route_is_identity():
    s = Route(lp=7, path_len=3)
    assert merge(NO_ROUTE, s) is s
    assert merge(s, NO_ROUTE) is s
    assert merge(NO_ROUTE, NO_ROUTE) is NO_ROUTE


def test_tiebreak_prefers_smaller_visited_mask():
    # C is bit 2 here, so a path through C loses to one through B (bit 1)
    via_b = Route(lp=100, path_len=1, visited={"B"})
    via_c = Route(lp=100, path_len=1, visited={"C"})
    assert merge(via_c, via_b, ORDER) == via_b


def test_field_access_on_no_route_is_an_error():
    with pytest.raises(NoRouteError):
        NO_ROUTE.lp
    with pytest.raises(AttributeError):
        NO_ROUTE.path_len


def test_route_rejects_negative_fields():
    with pytest.raises(ValueError):
        Route(lp=-1)


def test_tag_and_prefix_parsing():
    assert parse_tag("100:2") == "100:2"
    assert parse_tag(" 01:2".strip()) == "1:2"
    with pytest.raises(ValueError):
        parse_tag("70000:1")
    assert parse_prefix("0x0a000000") == 0x0A000000
    with pytest.raises(ValueError):
        parse_prefix(1 << 32)


@given(routes, routes)
def test_merge_is_selective_and_commutative(a, b):
    m = merge(a, b, ORDER)
    assert m in (a, b)
    assert m == merge(b, a, ORDER)


@given(routes)
def test_merge_idempotent(a):
    assert merge(a, a, ORDER) == a


def test_merge_associative_exhaustive():
    universe = [NO_ROUTE] + [
        Route(prefix=p, lp=lp, path_len=n, visited=frozenset(vis), comms=frozenset(c))
        for p in (0, 1)
        for lp in (100, 300)
        for n in (1, 2)
        for vis in ((), ("A",), ("C",))
        for c in ((), ("1:0",))
    ]
    for a, b, c in itertools.product(universe, repeat=3):
        assert merge(merge(a, b, ORDER), c, ORDER) == merge(a, merge(b, c, ORDER), ORDER)


@given(st.lists(routes, max_size=6))
@settings(max_examples=50)
def test_merge_all_is_order_independent(rs):
    assert merge_all(rs, ORDER) == merge_all(list(reversed(rs)), ORDER)


@given(routes)
def test_json_round_trip(r):
    assert route_from_json(route_to_json(r)) == r
