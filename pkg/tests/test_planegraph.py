import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepchoose import planegraph as pg
from sepchoose.errors import (
    BudgetExceeded,
    InconsistentRotation,
    NotACycle,
    QNotInterior,
)

# -- fixture graphs ----------------------------------------------------------

TRIANGLE = [[1, 2], [2, 0], [0, 1]]
K4 = [[1, 2, 3], [2, 0, 3], [0, 1, 3], [0, 2, 1]]
CUBE = [[1, 3, 4], [0, 5, 2], [1, 6, 3], [2, 7, 0], [0, 7, 5], [1, 4, 6], [2, 5, 7], [3, 6, 4]]
# wheel W5: hub 5, rim 0..4
W5 = [[1, 5, 4], [2, 5, 0], [3, 5, 1], [4, 5, 2], [0, 5, 3], [0, 1, 2, 3, 4]]
# octahedron as 3-antiprism: top triangle 0,1,2; bottom 3,4,5
OCTA = [
    [2, 1, 5, 4], [0, 2, 3, 5], [1, 0, 4, 3],
    [1, 2, 4, 5], [2, 0, 5, 3], [4, 0, 1, 3],
]


def cycle_graph(n):
    return [[(i - 1) % n, (i + 1) % n] for i in range(n)]


# -- build -------------------------------------------------------------------

def test_build_triangle():
    G = pg.build(3, TRIANGLE)
    assert len(G.faces) == 2
    assert all(f.length == 3 for f in G.faces)
    assert G.n - G.m + len(G.faces) == 2


def test_build_cube():
    G = pg.build(8, CUBE)
    assert len(G.faces) == 6
    assert all(f.length == 4 for f in G.faces)


def test_build_path2_one_face_of_length_2():
    G = pg.build(2, [[1], [0]])
    assert len(G.faces) == 1
    assert G.faces[0].length == 2


def test_build_rejects_loops_and_parallels():
    with pytest.raises(InconsistentRotation):
        pg.build(1, [[0]])
    with pytest.raises(InconsistentRotation):
        pg.build(2, [[1, 1], [0, 0]])
    with pytest.raises(InconsistentRotation):
        pg.build(2, [[1], []])


def test_disconnected_flagged_not_rejected():
    G = pg.build(6, TRIANGLE + [[4, 5], [5, 3], [3, 4]])
    assert not G.connected


def test_outer_face_hint():
    G = pg.build(4, K4, outer_face_hint=[0, 1, 2])
    assert set(G.outer_face.vertices()) == {0, 1, 2}
    with pytest.raises(pg.OuterFaceNotFound):
        pg.build(4, K4, outer_face_hint=[0, 1])


# -- serialization round trips -------------------------------------------------

def test_json_roundtrip():
    G = pg.build(8, CUBE)
    H = pg.PlaneGraph.from_json(G.to_json())
    assert H.rotation == G.rotation
    assert H.outer_face_id == G.outer_face_id


def test_planar_code_roundtrip_bit_exact():
    G = pg.build(6, W5)
    text = G.to_planar_code()
    H = pg.PlaneGraph.from_planar_code(text)
    assert H.to_planar_code() == text
    assert H.rotation == G.rotation


def test_planar_code_letters():
    H = pg.PlaneGraph.from_planar_code("3\nb c,c a,a b\n")
    assert H.rotation == pg.build(3, TRIANGLE).rotation


def test_dot_export_mentions_faces():
    G = pg.build(3, TRIANGLE)
    dot = G.to_dot()
    assert "face 0" in dot and "0 -- 1;" in dot


# -- cycle search ----------------------------------------------------------------

def test_has_cycle_examples():
    cube = pg.build(8, CUBE)
    assert pg.has_cycle_of_length(cube, 4)
    assert not pg.has_cycle_of_length(cube, 3)
    k4 = pg.build(4, K4)
    assert not pg.has_cycle_of_length(k4, 5)


def test_cycle_budget_explicit():
    cube = pg.build(8, CUBE)
    with pytest.raises(BudgetExceeded):
        pg.has_cycle_of_length(cube, 6, node_budget=3)


def naive_has_cycle(G, k):
    """Oracle: check all k-subsets for a spanning cycle."""
    for sub in itertools.combinations(range(G.n), k):
        rest = list(sub[1:])
        for perm in itertools.permutations(rest):
            seq = (sub[0],) + perm
            if all(seq[(i + 1) % k] in G.adj[seq[i]] for i in range(k)):
                return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=3, max_value=6), st.data())
def test_has_cycle_agrees_with_naive(k, data):
    graphs = [TRIANGLE, K4, CUBE, W5, OCTA, cycle_graph(6)]
    rot = data.draw(st.sampled_from(graphs))
    G = pg.build(len(rot), rot)
    if k > G.n:
        assert not pg.has_cycle_of_length(G, k)
    else:
        assert pg.has_cycle_of_length(G, k) == naive_has_cycle(G, k)


# -- chords / k-chords --------------------------------------------------------------

def test_chords_examples():
    k4 = pg.build(4, K4)
    assert pg.chords(k4, pg.CycleRef((0, 1, 2))) == []
    c4_chord = pg.build(4, [[3, 2, 1], [0, 2], [1, 0, 3], [2, 0]])
    assert pg.chords(c4_chord, pg.CycleRef((0, 1, 2, 3))) == [(0, 2)]
    w5 = pg.build(6, W5)
    assert pg.chords(w5, pg.CycleRef((0, 1, 2, 3, 4))) == []


def naive_k_chords(G, K, k):
    """Oracle: enumerate all vertex sequences of length k+1."""
    on = set(K.vertices)
    out = set()
    for seq in itertools.permutations(range(G.n), k + 1):
        if seq[0] > seq[-1]:
            continue
        if seq[0] not in on or seq[-1] not in on:
            continue
        if any(v in on for v in seq[1:-1]):
            continue
        if all(seq[i + 1] in G.adj[seq[i]] for i in range(k)):
            out.add(seq)
    return sorted(out)


def test_k_chords_wheel_frozen():
    w5 = pg.build(6, W5)
    K = pg.CycleRef((0, 1, 2, 3, 4))
    got = pg.k_chords(w5, K, 2)
    # oracle value: ten hub paths, one per rim pair (5 choose 2)
    assert got == naive_k_chords(w5, K, 2)
    assert len(got) == 10
    assert all(p[1] == 5 for p in got)


def test_k_chords_c4_with_chord_none():
    G = pg.build(4, [[3, 2, 1], [0, 2], [1, 0, 3], [2, 0]])
    assert pg.k_chords(G, pg.CycleRef((0, 1, 2, 3)), 2) == []


def test_k_chords_k4():
    k4 = pg.build(4, K4, outer_face_hint=[0, 1, 2])
    got = pg.k_chords(k4, pg.CycleRef((0, 1, 2)), 2)
    assert got == [(0, 3, 1), (0, 3, 2), (1, 3, 2)]


# -- int/ext and q-components ----------------------------------------------------------

def test_int_ext_k4_outer_triangle():
    k4 = pg.build(4, K4, outer_face_hint=[0, 1, 2])
    K = k4.outer_cycle()
    (gi, mi), (ge, me) = pg.int_ext(k4, K)
    assert gi.n == 4 and gi.m == 6          # Int = whole K4
    assert ge.n == 3 and ge.m == 3          # Ext = the triangle K
    assert set(me) == {0, 1, 2}


def test_int_ext_k4_inner_face():
    k4 = pg.build(4, K4, outer_face_hint=[0, 1, 2])
    inner = next(f for f in k4.faces if f.id != k4.outer_face_id)
    K = pg.CycleRef(inner.vertices())
    (gi, mi), (ge, me) = pg.int_ext(k4, K)
    assert gi.n == 3 and ge.n == 4


def test_int_ext_octahedron_equator():
    # spec's 4/4 split is realized by the equatorial 4-cycle (see ledger);
    # oracle: each half has V=5, E=8, hence 2-5+8-1 = 4 bounded faces.
    G = pg.build(6, OCTA)
    assert len(G.faces) == 8
    equator = None
    for cyc in pg.all_cycles(G, max_len=4):
        if len(cyc) == 4 and not pg.chords(G, pg.CycleRef(cyc)):
            equator = pg.CycleRef(cyc)
            break
    assert equator is not None
    (gi, mi), (ge, me) = pg.int_ext(G, equator)
    for g in (gi, ge):
        bounded = len(g.faces) - 1
        assert bounded == 4
        assert g.n == 5 and g.m == 8


def test_q_components_chord():
    G = pg.build(4, [[3, 2, 1], [0, 2], [1, 0, 3], [2, 0]], outer_face_hint=[0, 1, 2, 3])
    K = G.outer_cycle()
    (g1, m1), (g2, m2) = pg.q_components(G, K, (0, 2))
    sides = sorted([sorted(m1), sorted(m2)])
    assert sides == [[0, 1, 2], [0, 2, 3]]
    # vertex count identity
    assert g1.n + g2.n == G.n + 2


def test_q_components_two_chord_hexagon():
    # hexagon 0..5 plus 2-chord 0-6-3
    rot = [[1, 6, 5], [2, 0], [3, 1], [4, 6, 2], [5, 3], [0, 4], [3, 0]]
    G = pg.build(7, rot, outer_face_hint=[0, 1, 2, 3, 4, 5])
    (g1, m1), (g2, m2) = pg.q_components(G, G.outer_cycle(), (0, 6, 3))
    assert g1.n == g2.n == 5
    assert set(m1) & set(m2) == {0, 3, 6}


def test_q_components_errors():
    G = pg.build(3, TRIANGLE)
    K = G.outer_cycle()
    with pytest.raises(QNotInterior):
        pg.q_components(G, K, (0, 1))      # an edge of K is not a chord
    with pytest.raises(QNotInterior):
        pg.q_components(G, K, (0, 9, 1))


def test_q_component_vertex_identity_wheel():
    w5 = pg.build(6, W5, outer_face_hint=[0, 1, 2, 3, 4])
    K = w5.outer_cycle()
    for q in pg.k_chords(w5, K, 2):
        (g1, m1), (g2, m2) = pg.q_components(w5, K, q)
        assert g1.n + g2.n == w5.n + len(q)
        assert set(m1) & set(m2) == set(q)


# -- connectivity -----------------------------------------------------------------------

def test_cut_vertices_examples():
    bowtie = pg.build(5, [[1, 2], [2, 3, 4, 0], [0, 1], [4, 1], [1, 3]])
    assert pg.cut_vertices(bowtie) == {1}
    assert not pg.is_2connected(bowtie)
    assert pg.is_2connected(pg.build(8, CUBE))
    p3 = pg.build(3, [[1], [0, 2], [1]])
    assert pg.cut_vertices(p3) == {1}


# -- triangle clusters ---------------------------------------------------------------------

def test_clusters_k4_is_one_facial_k4():
    k4 = pg.build(4, K4, outer_face_hint=[0, 1, 2])
    cl = pg.triangle_clusters(k4)
    assert len(cl) == 1
    assert cl[0].kind == "facial_K4"
    assert len(cl[0].faces) == 3
    assert cl[0].roles["hub"] == 3


def test_clusters_k4_sphere_semantics():
    k4 = pg.build(4, K4)
    cl = pg.triangle_clusters(k4, include_outer=True)
    assert len(cl) == 1 and cl[0].kind == "tetrahedron"


def test_clusters_diamond():
    # two triangles sharing edge 0-1 inside a 4-cycle boundary
    rot = [[2, 1, 3], [3, 0, 2], [1, 0], [0, 1]]
    G = pg.build(4, rot, outer_face_hint=[0, 2, 1, 3])
    cl = pg.triangle_clusters(G)
    assert len(cl) == 1
    assert cl[0].kind == "diamond"
    assert cl[0].roles["shared_edge"] == (0, 1)
    assert cl[0].roles["tips"] == (2, 3)


def test_clusters_isolated():
    G = pg.build(3, TRIANGLE)
    cl = pg.triangle_clusters(G)
    assert len(cl) == 1 and cl[0].kind == "isolated"


def test_clusters_reject_c5():
    c5 = pg.build(5, cycle_graph(5))
    with pytest.raises(pg.ForbiddenCyclePresent):
        pg.triangle_clusters(c5)


# -- invariants ---------------------------------------------------------------------------

ALL_FIXTURES = [TRIANGLE, K4, CUBE, W5, OCTA, cycle_graph(7)]


@pytest.mark.parametrize("rot", ALL_FIXTURES)
def test_euler_and_dart_partition(rot):
    G = pg.build(len(rot), rot)
    assert G.n - G.m + len(G.faces) == 2
    assert sum(f.length for f in G.faces) == 2 * G.m


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_rotations_dart_partition(data):
    """Any consistent rotation system partitions darts into faces."""
    n = data.draw(st.integers(min_value=3, max_value=6))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = data.draw(st.sets(st.sampled_from(pairs), min_size=n - 1))
    rot = [[] for _ in range(n)]
    for u, v in sorted(chosen):
        rot[u].append(v)
        rot[v].append(u)
    for lst in rot:
        data.draw(st.randoms(use_true_random=False)).shuffle(lst)
    G = pg.build(n, rot)
    assert sum(f.length for f in G.faces) == 2 * G.m
    if G.connected:
        # genus may be positive for arbitrary rotations, but Euler count is even
        assert (2 - G.n + G.m - len(G.faces)) % 2 == 0


def test_canonical_certificate_invariance():
    G = pg.build(8, CUBE)
    # relabel the cube by a nontrivial automorphism-ish permutation
    perm = [3, 0, 1, 2, 7, 4, 5, 6]
    rot2 = [None] * 8
    for u, nbrs in enumerate(CUBE):
        rot2[perm[u]] = [perm[v] for v in nbrs]
    H = pg.build(8, rot2)
    assert G.canonical_certificate() == H.canonical_certificate()
    assert G.canonical_certificate() != pg.build(4, K4).canonical_certificate()
