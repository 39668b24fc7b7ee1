import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablenet.expr import (
    DENY_ALL,
    PERMIT_ALL,
    Action,
    Clause,
    ExprError,
    RawEvaluationError,
    eval_predicate,
    eval_transfer,
    parse_predicate,
    parse_transfer,
    pred,
    predicate_to_json,
    transfer_to_json,
)
from stablenet.route import NO_ROUTE, Route


def test_not_no_route_accepts_live_routes():
    assert eval_predicate(pred(["not", ["isNoRoute"]]), Route(lp=300, path_len=2))


def test_conjunction_with_path_membership():
    q = pred(["and", ["not", ["isNoRoute"]], ["lp", "=", 300], ["len", "=", 2],
              ["not", ["visited", "C"]]])
    assert eval_predicate(q, Route(lp=300, path_len=2, visited={"A", "B"}))
    assert not eval_predicate(q, Route(lp=300, path_len=2, visited={"A", "C"}))


@pytest.mark.parametrize("atom", [["lp", "=", 100], ["len", ">=", 0], ["prefix", "0x0"],
                                  ["comm", "1:0"], ["visited", "A"]])
def test_atoms_false_on_no_route(atom):
    assert not eval_predicate(pred(atom), NO_ROUTE)
    assert eval_predicate(pred(["not", atom]), NO_ROUTE)


def test_dist_bound_resolves_through_table():
    p = parse_predicate(["len", "=", ["dist", "X"]], {"X": 3})
    assert eval_predicate(p, Route(path_len=3))
    with pytest.raises(ExprError):
        parse_predicate(["len", "=", ["dist", "Y"]], {"X": 3})


def test_raw_terms_need_the_solver():
    with pytest.raises(RawEvaluationError):
        eval_predicate(pred(["raw", ["a", "b", "c", "d", "e", "f"], "true"]), NO_ROUTE)


def test_bad_predicates_rejected():
    for bad in (["lp", "~", 1], ["frobnicate"], [], "x", ["not"]):
        with pytest.raises(ExprError):
            parse_predicate(bad)


def test_permit_extends_path():
    t = (Clause(pred(["true"]), (Action("setLp", 100),), True),)
    out = eval_transfer(t, "A", Route(lp=100, path_len=0))
    assert out == Route(lp=100, path_len=1, visited={"A"})


def test_no_route_is_transfer_fixed_point():
    assert eval_transfer(PERMIT_ALL, "A", NO_ROUTE) is NO_ROUTE


def test_implicit_deny():
    assert eval_transfer(DENY_ALL, "A", Route(lp=100, path_len=1)) is NO_ROUTE
    only_300 = (Clause(pred(["lp", "=", 300]), (), True),)
    assert eval_transfer(only_300, "A", Route(lp=100)) is NO_ROUTE


def test_first_match_wins():
    t = parse_transfer([
        {"match": ["comm", "1:0"], "verdict": "deny"},
        {"match": ["true"], "actions": [["addComm", "1:0"]]},
    ])
    assert eval_transfer(t, "A", Route(comms={"1:0"})) is NO_ROUTE
    assert eval_transfer(t, "A", Route()).comms == {"1:0"}


def test_community_actions():
    t = parse_transfer([{"actions": [["addComm", "100:2"], ["removeComm", "1:0"],
                                     ["setPrefix", "0x01"]]}])
    out = eval_transfer(t, "B", Route(comms={"1:0"}))
    assert out.comms == {"100:2"} and out.prefix == 1


leaf = st.sampled_from([
    ["isNoRoute"], ["true"], ["false"], ["lp", "<=", 200], ["len", ">", 1],
    ["prefix", "0x0a000000"], ["comm", "1:0"], ["visited", "B"],
])
predicates = st.recursive(
    leaf,
    lambda ch: st.one_of(
        st.lists(ch, min_size=1, max_size=3).map(lambda xs: ["and", *xs]),
        st.lists(ch, min_size=1, max_size=3).map(lambda xs: ["or", *xs]),
        ch.map(lambda x: ["not", x]),
        st.tuples(ch, ch).map(lambda ab: ["implies", *ab]),
    ),
    max_leaves=8,
)


@given(predicates)
def test_predicate_json_round_trip(obj):
    p = parse_predicate(obj)
    assert parse_predicate(predicate_to_json(p)) == p


def test_transfer_json_round_trip():
    for t in (PERMIT_ALL, DENY_ALL, parse_transfer([
            {"match": ["comm", "1:0"], "verdict": "deny"},
            {"match": ["true"], "actions": [["setLp", 300], ["setPrefix", "0x0a000000"]]}])):
        assert parse_transfer(transfer_to_json(t)) == t
