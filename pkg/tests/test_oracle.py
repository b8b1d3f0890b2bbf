import pytest
from hypothesis import given, strategies as st

from conway_mk.board import GameParams, check_claim, count_at, max_row_occupied, replay
from conway_mk.bounds import max_row_1d, row1_cap
from conway_mk.oracle import MAX_COUNT_AT, SearchConfig, bfs_optimum, default_depth, dominance_prune


def test_dominance_examples():
    a = (1, 0, 2)
    b = (1, 1, 2)
    assert dominance_prune([a, b]) == [b]
    anti = [(1, 0), (0, 1)]
    assert sorted(dominance_prune(anti)) == sorted(anti)
    assert dominance_prune([a, a]) == [a]


@given(st.lists(st.tuples(*[st.integers(0, 3)] * 3), max_size=12))
def test_dominance_keeps_an_antichain_covering_input(states):
    kept = dominance_prune(states)
    for s in states:
        assert any(all(x <= y for x, y in zip(s, t)) for t in kept)
    for s in kept:
        for t in kept:
            if s != t:
                assert not all(x <= y for x, y in zip(s, t))


def test_config_validation():
    p = GameParams(1, 2, 1)
    with pytest.raises(ValueError):
        SearchConfig(p, depth=-1)
    with pytest.raises(ValueError):
        SearchConfig(p, max_states=0)
    with pytest.raises(ValueError):
        SearchConfig(p, objective="nope")
    with pytest.raises(ValueError):
        SearchConfig(p, objective=MAX_COUNT_AT)
    with pytest.raises(ValueError):
        bfs_optimum(SearchConfig(p, depth=2, top=2, objective=MAX_COUNT_AT, at=(9,)))


def test_classic_one_dimension_only_first_row():
    r = bfs_optimum(SearchConfig(GameParams(1, 2, 1), depth=8))
    assert r.value == 1 and r.exhausted


def test_m2_reaches_row_3():
    r = bfs_optimum(SearchConfig(GameParams(2, 2, 1), depth=8))
    assert r.value == 3 == max_row_1d(2, 2) and r.exhausted


def test_count_at_row_one():
    r = bfs_optimum(SearchConfig(GameParams(1, 2, 1), depth=8, objective=MAX_COUNT_AT, at=(1,)))
    assert r.value == 1 == row1_cap(1, 2)


def test_pruning_keeps_optimum():
    for m in (1, 2):
        base = SearchConfig(GameParams(m, 2, 1), depth=5)
        pruned = bfs_optimum(base)
        full = bfs_optimum(SearchConfig(GameParams(m, 2, 1), depth=5, prune=False))
        assert pruned.value == full.value
        assert pruned.states <= full.states


def test_budget_reports_not_exhausted():
    r = bfs_optimum(SearchConfig(GameParams(3, 2, 1), depth=6, max_states=100))
    assert not r.exhausted and r.value >= 1


@pytest.mark.parametrize("m", [2, 3])
def test_depth_monotone(m):
    values = [bfs_optimum(SearchConfig(GameParams(m, 2, 1), depth=d, top=6)).value for d in range(1, 6)]
    assert values == sorted(values)
    assert values[-1] == max_row_1d(m, 2)


@pytest.mark.parametrize("k,m", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_witness_replays(k, m):
    params = GameParams(m, k, 1)
    r = bfs_optimum(SearchConfig(params, depth=default_depth(params)))
    end = replay(r.witness)
    assert max_row_occupied(end) == r.value
    assert check_claim(end, r.witness.claim)
    c = bfs_optimum(SearchConfig(params, depth=default_depth(params, MAX_COUNT_AT), objective=MAX_COUNT_AT, at=(1,)))
    assert count_at(replay(c.witness), (1,)) == c.value


def test_tiny_two_dimensional_window():
    # m=1, k=2: rows up to 2 are reachable within a 3-wide, 3-deep box
    r = bfs_optimum(SearchConfig(GameParams(1, 2, 2), depth=2, top=2, radius=1))
    assert r.exhausted and r.value == 2
    assert max_row_occupied(replay(r.witness)) == 2


def test_default_depth():
    assert default_depth(GameParams(3, 2, 1)) == 6
    with pytest.raises(ValueError):
        default_depth(GameParams(3, 2, 2))
