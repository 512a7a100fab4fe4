import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepchoose import lists as li
from sepchoose import solver as sv
from sepchoose.errors import BudgetExceeded, PinnedConflict


def adj_of(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return tuple(frozenset(s) for s in adj)


def cycle_adj(n):
    return adj_of(n, [(i, (i + 1) % n) for i in range(n)])


TRIANGLE = cycle_adj(3)
K4 = adj_of(4, list(itertools.combinations(range(4), 2)))


# -- l_color -------------------------------------------------------------------

def test_triangle_colorable():
    L = li.from_lists([[1, 2], [2, 3], [1, 3]])
    res = sv.l_color(TRIANGLE, L)
    assert res is not None and sv.verify_coloring(TRIANGLE, L, res)


def test_odd_cycle_identical_2lists_uncolorable():
    for n in (3, 5, 7):
        L = li.from_lists([[1, 2]] * n)
        assert sv.l_color(cycle_adj(n), L) is None


def test_even_cycle_identical_2lists_colorable():
    for n in (4, 6, 8):
        L = li.from_lists([[1, 2]] * n)
        res = sv.l_color(cycle_adj(n), L)
        assert res is not None and sv.verify_coloring(cycle_adj(n), L, res)


def test_k4_all_123_uncolorable():
    L = li.from_lists([[1, 2, 3]] * 4)
    assert sv.l_color(K4, L) is None


def test_pinned_respected_and_conflicts_raise():
    L = li.from_lists([[1, 2], [1, 2], [1, 2, 3]])
    res = sv.l_color(PATH3 := adj_of(3, [(0, 1), (1, 2)]), L, pinned={0: 1})
    assert res.colors[0] == 1
    with pytest.raises(PinnedConflict):
        sv.l_color(PATH3, L, pinned={0: 7})
    with pytest.raises(PinnedConflict):
        sv.l_color(PATH3, L, pinned={0: 1, 1: 1})


def test_budget_exceeded():
    n = 12
    L = li.from_lists([[1, 2]] * n)
    with pytest.raises(BudgetExceeded):
        sv.l_color(cycle_adj(n), L, node_budget=2)


def test_verify_coloring_examples():
    L = li.from_lists([[1, 2], [2, 3], [1, 3]])
    assert sv.verify_coloring(TRIANGLE, L, sv.Coloring((1, 2, 3), True))
    assert not sv.verify_coloring(TRIANGLE, L, sv.Coloring((2, 2, 3), True))   # monochromatic
    assert not sv.verify_coloring(TRIANGLE, L, sv.Coloring((4, 2, 3), True))   # off-list
    assert not sv.verify_coloring(TRIANGLE, L, sv.Coloring((1, None, 3), False))


def naive_colorable(adj, L, pinned=None):
    """Oracle: full product enumeration."""
    pinned = pinned or {}
    domains = [[pinned[v]] if v in pinned else sorted(L[v]) for v in range(len(adj))]
    for combo in itertools.product(*domains):
        ok = all(combo[u] != combo[v] for u in range(len(adj)) for v in adj[u] if u < v)
        if ok:
            return True
    return False


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_l_color_agrees_with_enumeration(data):
    n = data.draw(st.integers(min_value=2, max_value=5))
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.sets(st.sampled_from(pairs)))
    adj = adj_of(n, edges)
    L = li.from_lists([
        sorted(data.draw(st.sets(st.integers(min_value=1, max_value=5), min_size=1, max_size=3)))
        for _ in range(n)
    ])
    got = sv.l_color(adj, L)
    assert (got is not None) == naive_colorable(adj, L)
    if got is not None:
        assert sv.verify_coloring(adj, L, got)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_monotone_under_list_augmentation(data):
    n = data.draw(st.integers(min_value=2, max_value=5))
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.sets(st.sampled_from(pairs)))
    adj = adj_of(n, edges)
    L = li.from_lists([
        sorted(data.draw(st.sets(st.integers(min_value=1, max_value=4), min_size=1, max_size=2)))
        for _ in range(n)
    ])
    if sv.l_color(adj, L) is None:
        return
    extra = data.draw(st.integers(min_value=5, max_value=9))
    which = data.draw(st.integers(min_value=0, max_value=n - 1))
    L2 = tuple(s | {extra} if v == which else s for v, s in enumerate(L))
    assert sv.l_color(adj, L2) is not None


# -- choosability -------------------------------------------------------------------

def test_triangle_31_choosable_both_methods():
    for method in ("structures", "assignments"):
        v = sv.is_kd_choosable(TRIANGLE, 3, 1, method=method)
        assert v.status == "choosable", method


def test_c4_22_choosable():
    v = sv.is_kd_choosable(cycle_adj(4), 2, 2, method="assignments")
    assert v.status == "choosable"


def test_odd_cycle_not_22_choosable_with_witness():
    v = sv.is_kd_choosable(cycle_adj(3), 2, 2, method="assignments")
    assert v.status == "not_choosable"
    assert sv.l_color(cycle_adj(3), v.witness) is None


def test_k4_not_31_choosable():
    # K4 needs 4 colors when all lists agree on 3 colors... but (3,1) forbids
    # identical lists on edges; the decision must still be 'choosable' or find
    # a real witness - verify whatever it reports
    v = sv.is_kd_choosable(K4, 3, 1)
    if v.status == "not_choosable":
        assert sv.l_color(K4, v.witness) is None
    else:
        assert v.status == "choosable"


@pytest.mark.parametrize("adj", [cycle_adj(3), cycle_adj(4), adj_of(2, [(0, 1)]),
                                 adj_of(4, [(0, 1), (1, 2), (2, 3)])])
@pytest.mark.parametrize("k", [1, 2])
def test_methods_agree_small(adj, k):
    a = sv.is_kd_choosable(adj, k, 1, method="assignments")
    s = sv.is_kd_choosable(adj, k, 1, method="structures")
    assert a.status == s.status


def test_monotone_in_k_and_d():
    graphs = [cycle_adj(n) for n in (3, 4, 5)] + [K4, adj_of(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])]
    for adj in graphs:
        for k, d in [(1, 1), (2, 1)]:
            if sv.is_kd_choosable(adj, k, d).status == "choosable":
                assert sv.is_kd_choosable(adj, k + 1, d).status == "choosable"
                if d > 0:
                    assert sv.is_kd_choosable(adj, k, d - 1).status == "choosable"


def test_unknown_on_budget_with_cursor():
    v = sv.is_kd_choosable(cycle_adj(4), 2, 2, method="assignments", enum_budget=40)
    assert v.status == "unknown"
