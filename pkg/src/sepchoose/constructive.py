"""Executable versions of the inductive colorings for triangle-free and
C4-free plane graphs with a precolored outer subpath.

Each call performs the first applicable reduction from the argument's case
analysis and recurses; every recursive instance is re-validated against the
theorem hypotheses.  A hypothesis failing *inside* the recursion is raised as
InternalProofMismatch with a serialized reproduction payload - on such an
instance the argument would be wrong, which is a first-class, loudly reported
outcome.  The recursion strictly decreases (|V|+|E|, sum of list sizes).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from . import planegraph as pg
from .errors import HypothesisViolated, InternalProofMismatch, XSelectionFailed
from .solver import Coloring

MISMATCH_DIR = None   # set by the CLI; reproductions written here when not None


@dataclass(frozen=True)
class PrecoloredInstance:
    graph: pg.PlaneGraph
    lists: tuple          # frozensets
    path: tuple           # P, consecutive on the outer face

    def payload(self):
        return {"graph": json.loads(self.graph.to_json()),
                "lists": [sorted(s) for s in self.lists],
                "path": list(self.path)}


def _mismatch(step, G, L, P, variant, **extra):
    payload = {"step": step, "variant": variant,
               "graph": json.loads(G.to_json()),
               "lists": [sorted(s) for s in L], "path": list(P)}
    payload.update(extra)
    if MISMATCH_DIR is not None:
        os.makedirs(MISMATCH_DIR, exist_ok=True)
        fname = os.path.join(MISMATCH_DIR, f"mismatch_{step}_{abs(hash(json.dumps(payload, sort_keys=True))) % 10**8}.json")
        with open(fname, "w") as fh:
            json.dump(payload, fh, indent=1)
    if step == "x-selection":
        raise XSelectionFailed(step, payload)
    raise InternalProofMismatch(step, payload)


# -- hypothesis validation ---------------------------------------------------------


def violations(G, L, P, variant):
    """Tags of failed hypotheses; empty iff the instance is admissible."""
    out = []
    maxp = 2 if variant == "trianglefree" else 3
    if len(L) != G.n or any(not s for s in L):
        return ["lists"]
    if not G.connected:
        out.append("connected")
    if not G.euler_genus_zero() and G.connected:
        out.append("planar")
    forbidden = 3 if variant == "trianglefree" else 4
    if G.n >= forbidden and pg.has_cycle_of_length(G, forbidden):
        out.append("forbidden-cycle")
    for u, v in G.edges():
        if len(L[u] & L[v]) > 1:
            out.append("separation")
            break
    P = tuple(P)
    outer = set(G.outer_face.vertices()) if G.faces else set(range(G.n))
    if len(P) > maxp or len(set(P)) != len(P):
        out.append("path")
    elif P:
        if any(v not in outer for v in P):
            out.append("path")
        elif len(P) > 1:
            if any(P[i + 1] not in G.adj[P[i]] for i in range(len(P) - 1)):
                out.append("path")
            elif G.faces:
                walk = G.outer_face.vertices()
                if len(set(walk)) == len(walk):
                    idx = {v: i for i, v in enumerate(walk)}
                    pos = [idx[v] for v in P]
                    n = len(walk)
                    fwd = all((pos[i + 1] - pos[i]) % n == 1 for i in range(len(P) - 1))
                    bwd = all((pos[i] - pos[i + 1]) % n == 1 for i in range(len(P) - 1))
                    if not (fwd or bwd):
                        out.append("path")
    pset = set(P)
    if any(len(L[v]) < 3 for v in range(G.n) if v not in outer):
        out.append("i")
    if any(len(L[v]) < 2 for v in outer - pset):
        out.append("ii")
    if any(len(L[v]) != 1 for v in pset):
        out.append("iii")
    if any(len(L[u]) == 2 and len(L[v]) == 2 for u, v in G.edges()):
        out.append("iv")
    if not _path_colorable(G, L, P):
        out.append("v")
    if variant == "c4free":
        for v in range(G.n):
            if len(L[v]) == 2 and sum(1 for w in G.adj[v] if w in pset) >= 2:
                out.append("vi")
                break
    return out


def _path_colorable(G, L, P):
    for i, u in enumerate(P):
        for v in P[i + 1:]:
            if G.has_edge(u, v) and L[u] == L[v] and len(L[u]) == 1:
                return False
    return True


def validate_hypotheses(inst, variant):
    return violations(inst.graph, inst.lists, inst.path, variant)


# -- public entry points ---------------------------------------------------------------


def color_triangle_free(inst):
    bad = validate_hypotheses(inst, "trianglefree")
    if bad:
        raise HypothesisViolated(bad)
    phi = _solve(inst.graph, inst.lists, tuple(inst.path), "trianglefree", None)
    return _as_coloring(inst.graph, inst.lists, phi, "trianglefree")


def color_c4_free(inst):
    bad = validate_hypotheses(inst, "c4free")
    if bad:
        raise HypothesisViolated(bad)
    phi = _solve(inst.graph, inst.lists, tuple(inst.path), "c4free", None)
    return _as_coloring(inst.graph, inst.lists, phi, "c4free")


def _as_coloring(G, L, phi, variant):
    colors = tuple(phi[v] for v in range(G.n))
    for v in range(G.n):
        if colors[v] not in L[v]:
            _mismatch("final-off-list", G, L, (), variant, coloring=list(colors))
    for u, v in G.edges():
        if colors[u] == colors[v]:
            _mismatch("final-improper", G, L, (), variant, coloring=list(colors))
    return Coloring(colors, True)


# -- recursion ---------------------------------------------------------------------------


def _recurse(G, L, P, variant, parent_measure):
    """Validate a child instance, check progress, and solve it."""
    bad = violations(G, L, P, variant)
    if bad:
        _mismatch("child-hypotheses:" + ",".join(bad), G, L, P, variant)
    measure = (G.n + G.m, sum(len(s) for s in L))
    if parent_measure is not None and measure >= parent_measure:
        _mismatch("no-progress", G, L, P, variant, measure=list(measure))
    return _solve(G, L, P, variant, measure)


def _solve(G, L, P, variant, measure):
    n = G.n
    pset = set(P)
    pedges = {frozenset((P[i], P[i + 1])) for i in range(len(P) - 1)}

    # 1. an edge outside P with disjoint endpoint lists can be removed
    for u, v in G.edges():
        if frozenset((u, v)) not in pedges and not (L[u] & L[v]):
            return _delete_edge_step(G, L, P, variant, measure, u, v)

    # 2. list-size minimality (C4-free variant has the second measure)
    if variant == "c4free":
        outer = set(G.outer_face.vertices())
        for v in range(n):
            if v not in pset and len(L[v]) > 3:
                L2 = tuple(frozenset(sorted(s)[:3]) if w == v else s for w, s in enumerate(L))
                phi = _recurse(G, L2, P, variant, measure)
                return phi

    # 3. components
    if not G.connected:
        return _components_step(G, L, P, variant, measure)

    # 4. tiny graphs (a 3-vertex plane graph has no interior vertex)
    if n <= 3:
        return _tiny_solve(G, L, P, variant)

    # 5. cut vertices
    cuts = pg.cut_vertices(G)
    if cuts:
        return _cut_step(G, L, P, variant, measure, min(cuts))

    # 2-connected from here on; outer face is a cycle
    K = G.outer_cycle()

    if variant == "c4free":
        sep = _separating_triangle(G)
        if sep is not None:
            return _separating_triangle_step(G, L, P, variant, measure, sep)

    chordlist = pg.chords(G, K)
    if variant == "trianglefree":
        if chordlist:
            return _chord_split_tf(G, L, P, variant, measure, K, chordlist[0])
        return _good_vertex_step(G, L, P, variant, measure, K)

    # C4-free chain
    good, bad_at_p = _classify_chords(G, L, P, K, chordlist)
    if good:
        return _good_chord_step(G, L, P, variant, measure, K, good)
    if bad_at_p:
        return _bad_chord_at_p_step(G, L, P, variant, measure, bad_at_p[0])
    step = _separating_two_chord(G, L, P, K)
    if step is not None:
        return _two_chord_step(G, L, P, variant, measure, K, step)
    step = _claim6_site(G, L, P, K)
    if step is not None:
        return _claim6_step(G, L, P, variant, measure, step)
    step = _claim7_site(G, L, P, K)
    if step is not None:
        kind, data = step
        if kind == "drop-color":
            v1 = data
            L2 = tuple(frozenset(sorted(s)[1:]) if w == v1 else s for w, s in enumerate(L))
            return _recurse(G, L2, P, variant, measure)
        return _claim7b_step(G, L, P, variant, measure, *data)
    return _x_step(G, L, P, variant, measure, K)


# -- shared steps ----------------------------------------------------------------------


def _surviving_outer_dart_face(H, to_parent, G):
    """Child face holding the outer region: first surviving old outer dart."""
    idx = {old: new for new, old in enumerate(to_parent)}
    for (a, b) in G.outer_face.darts:
        if a in idx and b in idx:
            d = (idx[a], idx[b])
            if d in H.dart_face:
                return H.dart_face[d]
    return None


def _choose_outer(H, LH, PH, variant, preferred, allow_scan, G, L, P, step):
    cands = [f for f in preferred if f is not None]
    if allow_scan:
        cands += [f.id for f in sorted(H.faces, key=lambda f: (-f.length, f.id))]
    seen = set()
    for fid in cands:
        if fid in seen:
            continue
        seen.add(fid)
        H2 = H.with_outer(fid)
        if not violations(H2, LH, PH, variant):
            return H2
    _mismatch(step + ":no-admissible-outer-face", G, L, P, variant)


def _delete_edge_step(G, L, P, variant, measure, u, v):
    edges = [e for e in G.edges() if set(e) != {u, v}]
    H, to_parent = pg.subgraph_by_edges(G, edges, keep_vertices=range(G.n))
    fid = _surviving_outer_dart_face(H, to_parent, G)
    H = H.with_outer(fid) if fid is not None else H
    if not H.connected:
        # deletion may disconnect; hand to the components step with same labels
        phi = _components_step(H, L, P, variant, measure)
    else:
        H = _choose_outer(H, L, P, variant, [H.outer_face_id], True, G, L, P, "delete-edge")
        phi = _recurse(H, L, P, variant, measure)
    return phi


def _components_step(G, L, P, variant, measure):
    comps = _component_sets(G)
    phi = {}
    for comp in comps:
        if len(comp) == 1:
            phi[comp[0]] = min(L[comp[0]])
            continue
        edges = [e for e in G.edges() if e[0] in comp]
        H, to_parent = pg.subgraph_by_edges(G, edges, keep_vertices=comp)
        LH = tuple(L[old] for old in to_parent)
        PH = tuple(_map_new(to_parent, v) for v in P if v in comp)
        pref = [_surviving_outer_dart_face(H, to_parent, G)]
        H = _choose_outer(H, LH, PH, variant, pref, True, G, L, P, "components")
        sub = _recurse(H, LH, PH, variant, measure)
        for new, old in enumerate(to_parent):
            phi[old] = sub[new]
    return phi


def _component_sets(G):
    seen = set()
    comps = []
    for s in range(G.n):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in G.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _map_new(to_parent, old):
    return to_parent.index(old)


def _induced_sub(G, vertices):
    vset = set(vertices)
    edges = [e for e in G.edges() if e[0] in vset and e[1] in vset]
    return pg.subgraph_by_edges(G, edges, keep_vertices=sorted(vset))


def _cut_step(G, L, P, variant, measure, v):
    comps = _component_sets_minus(G, v)
    prest = set(P) - {v}
    side = None
    for comp in comps:
        if not (set(comp) & prest):
            side = comp
            break
    if side is not None:
        g2verts = sorted(set(side) | {v})
        g1verts = sorted((set(range(G.n)) - set(side)))
        H1, m1 = _induced_sub(G, g1verts)
        L1 = tuple(L[o] for o in m1)
        P1 = tuple(_map_new(m1, x) for x in P)
        pref = [_surviving_outer_dart_face(H1, m1, G)]
        H1 = _choose_outer(H1, L1, P1, variant, pref, True, G, L, P, "cut-split-g1")
        phi1 = _recurse(H1, L1, P1, variant, measure)
        col_v = phi1[_map_new(m1, v)]
        H2, m2 = _induced_sub(G, g2verts)
        L2 = tuple(frozenset((col_v,)) if o == v else L[o] for o in m2)
        P2 = (_map_new(m2, v),)
        pref = [_surviving_outer_dart_face(H2, m2, G)]
        H2 = _choose_outer(H2, L2, P2, variant, pref, True, G, L, P, "cut-split-g2")
        phi2 = _recurse(H2, L2, P2, variant, measure)
        phi = {}
        for new, old in enumerate(m1):
            phi[old] = phi1[new]
        for new, old in enumerate(m2):
            phi[old] = phi2[new]
        return phi
    # v is interior to P: both sides carry their P piece and agree on v
    if v not in set(P):
        _mismatch("cut-split:no-free-side", G, L, P, variant, cut=v)
    phi = {}
    for comp in comps:
        verts = sorted(set(comp) | {v})
        H, m = _induced_sub(G, verts)
        LH = tuple(L[o] for o in m)
        PH = tuple(_map_new(m, x) for x in P if x in set(verts))
        pref = [_surviving_outer_dart_face(H, m, G)]
        H = _choose_outer(H, LH, PH, variant, pref, True, G, L, P, "cut-split-p")
        sub = _recurse(H, LH, PH, variant, measure)
        for new, old in enumerate(m):
            phi[old] = sub[new]
    return phi


def _component_sets_minus(G, v):
    seen = {v}
    comps = []
    for s in range(G.n):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in G.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _tiny_solve(G, L, P, variant):
    """Exhaustive coloring of a <=3-vertex instance; failure falsifies the base case."""
    import itertools
    pinned = {v: min(L[v]) for v in P}
    domains = [sorted(L[v]) if v not in pinned else [pinned[v]] for v in range(G.n)]
    for combo in itertools.product(*domains):
        if all(combo[u] != combo[v] for u, v in G.edges()):
            return {v: combo[v] for v in range(G.n)}
    _mismatch("tiny-base-case", G, L, P, variant)


# -- triangle-free specific ------------------------------------------------------------


def _chord_split_tf(G, L, P, variant, measure, K, chord):
    u, v = chord
    (g1, m1), (g2, m2) = pg.q_components(G, K, (u, v))
    prest = set(P) - {u, v}
    if prest <= (set(m1) - {u, v}) or not prest:
        pass
    elif prest <= (set(m2) - {u, v}):
        (g1, m1), (g2, m2) = (g2, m2), (g1, m1)
    else:
        _mismatch("chord-split:P-straddles", G, L, P, variant, chord=[u, v])
    L1 = tuple(L[o] for o in m1)
    P1 = tuple(_map_new(m1, x) for x in P)
    phi1 = _recurse(g1, L1, P1, variant, measure)
    col = {u: phi1[_map_new(m1, u)], v: phi1[_map_new(m1, v)]}
    L2 = tuple(frozenset((col[o],)) if o in col else L[o] for o in m2)
    P2 = _pinned_path_of(g2, m2, L2, G, L, P, variant, "chord-split")
    phi2 = _recurse(g2, L2, P2, variant, measure)
    phi = {}
    for new, old in enumerate(m1):
        phi[old] = phi1[new]
    for new, old in enumerate(m2):
        phi[old] = phi2[new]
    return phi


def _pinned_path_of(H, to_parent, LH, G, L, P, variant, step):
    """The L1-vertices of a pinned side, as a path along its outer face."""
    ones = [v for v in range(H.n) if len(LH[v]) == 1]
    if len(ones) <= 1:
        return tuple(ones)
    walk = H.outer_face.vertices()
    if len(set(walk)) != len(walk):
        _mismatch(step + ":pinned-side-outer-not-cycle", G, L, P, variant)
    oset = set(ones)
    if not oset <= set(walk) or len(ones) > 3:
        _mismatch(step + ":pinned-vertices-not-a-path", G, L, P, variant)
    n = len(walk)
    idx = {v: i for i, v in enumerate(walk)}
    pos = sorted(idx[v] for v in ones)
    # find a rotation where they are consecutive
    for start in pos:
        seq = [(start + i) % n for i in range(len(ones))]
        if set(seq) == set(pos):
            return tuple(walk[i] for i in seq)
    _mismatch(step + ":pinned-vertices-not-consecutive", G, L, P, variant)


def _good_vertex_step(G, L, P, variant, measure, K):
    bad_members = set()
    for q in pg.k_chords(G, K, 2):
        a, mid, b = q
        if len(L[a]) == 2 or len(L[b]) == 2:
            bad_members.update((a, b))
    pset = set(P)
    good = [v for v in K.vertices if v not in pset and len(L[v]) >= 3 and v not in bad_members]
    if not good:
        _mismatch("good-vertex-missing", G, L, P, variant)
    v1 = min(good)
    walk = K.vertices
    i = walk.index(v1)
    v0, v2 = walk[i - 1], walk[(i + 1) % len(walk)]
    free = sorted(L[v1] - (L[v0] | L[v2]))
    if not free:
        _mismatch("good-vertex-no-color", G, L, P, variant, vertex=v1)
    c = free[0]
    edges = [e for e in G.edges() if v1 not in e]
    H, m = pg.subgraph_by_edges(G, edges, keep_vertices=[x for x in range(G.n) if x != v1])
    LH = tuple(L[o] - {c} if o in G.adj[v1] else L[o] for o in m)
    PH = tuple(_map_new(m, x) for x in P)
    pref = [_surviving_outer_dart_face(H, m, G)]
    H = _choose_outer(H, LH, PH, variant, pref, False, G, L, P, "good-vertex")
    sub = _recurse(H, LH, PH, variant, measure)
    phi = {old: sub[new] for new, old in enumerate(m)}
    phi[v1] = c
    return phi


# -- C4-free specific --------------------------------------------------------------------


def _separating_triangle(G):
    for cyc in pg.all_cycles(G, max_len=3):
        if len(cyc) != 3:
            continue
        K = pg.CycleRef(cyc)
        (gi, mi), _ = pg.int_ext(G, K)
        if gi.n > 3:
            return cyc
    return None


def _separating_triangle_step(G, L, P, variant, measure, tri):
    t0, t1, t2 = sorted(tri)
    if not (G.has_edge(t0, t1) and G.has_edge(t1, t2) and G.has_edge(t0, t2)):
        _mismatch("separating-triangle:not-a-triangle", G, L, P, variant)
    K = pg.CycleRef(tuple(tri))
    (gi, mi), (ge, me) = pg.int_ext(G, K)
    Le = tuple(L[o] for o in me)
    Pe = tuple(_map_new(me, x) for x in P)
    pref = [_surviving_outer_dart_face(ge, me, G)]
    ge2 = _choose_outer(ge, Le, Pe, variant, pref, False, G, L, P, "separating-triangle-ext")
    phie = _recurse(ge2, Le, Pe, variant, measure)
    col = {o: phie[_map_new(me, o)] for o in (t0, t1, t2)}
    # interior side: drop edge t0-t2, pin the triangle as a 3-path
    edges = [e for e in gi.edges()
             if {mi[e[0]], mi[e[1]]} != {t0, t2}]
    Hi, m2 = pg.subgraph_by_edges(gi, edges, keep_vertices=range(gi.n))
    to_parent = tuple(mi[o] for o in m2)
    Li = tuple(frozenset((col[o],)) if o in col else L[o] for o in to_parent)
    Pi = tuple(_map_new(to_parent, x) for x in (t0, t1, t2))
    fid = None
    for f in Hi.faces:
        vs = set(f.vertices())
        if {_map_new(to_parent, t0), _map_new(to_parent, t1), _map_new(to_parent, t2)} <= vs:
            fid = f.id
            break
    Hi = _choose_outer(Hi, Li, Pi, variant, [fid], False, G, L, P, "separating-triangle-int")
    phii = _recurse(Hi, Li, Pi, variant, measure)
    phi = {}
    for new, old in enumerate(me):
        phi[old] = phie[new]
    for new, old in enumerate(to_parent):
        phi[old] = phii[new]
    return phi


def _classify_chords(G, L, P, K, chordlist):
    good, bad_at_p = [], []
    pset = set(P)
    for (u, v) in chordlist:
        sides = pg.q_components(G, K, (u, v))
        bad = False
        for (g, m) in sides:
            if g.n == 3:
                x = next(o for o in m if o not in (u, v))
                if len(L[x]) == 2:
                    bad = True
                    z = x
        if bad:
            if u in pset or v in pset:
                bad_at_p.append((u, v, z))
        else:
            good.append((u, v, sides))
    return good, bad_at_p


def _good_chord_step(G, L, P, variant, measure, K, good):
    pset = set(P)
    best = None
    for (u, v, sides) in good:
        for which in (0, 1):
            g2, m2 = sides[which]
            g1, m1 = sides[1 - which]
            p1 = len(pset & set(m1))
            p2 = len(pset & set(m2))
            if p1 < p2:
                continue
            key = (g2.n, (u, v), which)
            if best is None or key < best[0]:
                best = (key, u, v, g1, m1, g2, m2)
    if best is None:
        _mismatch("good-chord:no-orientation", G, L, P, variant)
    _, u, v, g1, m1, g2, m2 = best
    L1 = tuple(L[o] for o in m1)
    P1 = _pinned_path_of(g1, m1, L1, G, L, P, variant, "good-chord-g1")
    phi1 = _recurse(g1, L1, P1, variant, measure)
    col = {u: phi1[_map_new(m1, u)], v: phi1[_map_new(m1, v)]}
    L2 = tuple(frozenset((col[o],)) if o in col else L[o] for o in m2)
    P2 = _pinned_path_of(g2, m2, L2, G, L, P, variant, "good-chord")
    phi2 = _recurse(g2, L2, P2, variant, measure)
    phi = {}
    for new, old in enumerate(m1):
        phi[old] = phi1[new]
    for new, old in enumerate(m2):
        phi[old] = phi2[new]
    return phi


def _bad_chord_at_p_step(G, L, P, variant, measure, site):
    u, v, z = site
    if u not in set(P):
        u, v = v, u
    if u not in set(P):
        _mismatch("bad-chord-at-p:no-p-endpoint", G, L, P, variant)
    # L(v) and L(z) meet exactly in L(u); the edge vz never binds
    if not (L[u] <= L[v] and L[u] <= L[z] and (L[v] & L[z]) == L[u]):
        _mismatch("bad-chord-at-p:intersection", G, L, P, variant, site=[u, v, z])
    return _delete_edge_step(G, L, P, variant, measure, v, z)


def _separating_two_chord(G, L, P, K):
    pset = set(P)
    middles = {x for x in pset if sum(1 for y in pset if G.has_edge(x, y)) == 2}
    kedges = K.edge_set()
    cands = []
    for q in pg.k_chords(G, K, 2):
        a, mid, b = q
        if frozenset((a, b)) in kedges:
            continue
        for (v0, v1, v2) in ((a, mid, b), (b, mid, a)):
            if len(L[v2]) == 2 and v0 not in middles:
                cands.append(("claim4", (v0, v1, v2)))
            if len(L[v2]) == 3 and v0 in pset and v0 not in middles:
                cands.append(("claim5", (v0, v1, v2)))
    if not cands:
        return None
    # extremal choice: minimize the non-P side, claims 4 before 5
    best = None
    for tag, (v0, v1, v2) in cands:
        sides = pg.q_components(G, K, (v0, v1, v2))
        for which in (0, 1):
            g2, m2 = sides[which]
            g1, m1 = sides[1 - which]
            if not set(P) <= set(m1):
                continue
            if set(P) & (set(m2) - {v0, v1, v2}):
                continue
            key = (0 if tag == "claim4" else 1, g2.n, (v0, v1, v2), which)
            if best is None or key < best[0]:
                best = (key, tag, (v0, v1, v2), g1, m1, g2, m2)
    if best is None:
        return None
    return best[1:]


def _two_chord_step(G, L, P, variant, measure, K, step):
    tag, (v0, v1, v2), g1, m1, g2, m2 = step
    L1 = tuple(L[o] for o in m1)
    P1 = tuple(_map_new(m1, x) for x in P)
    phi1 = _recurse(g1, L1, P1, variant, measure)
    col = {o: phi1[_map_new(m1, o)] for o in (v0, v1, v2)}
    L2 = tuple(frozenset((col[o],)) if o in col else L[o] for o in m2)
    P2 = _pinned_path_of(g2, m2, L2, G, L, P, variant, tag)
    phi2 = _recurse(g2, L2, P2, variant, measure)
    phi = {}
    for new, old in enumerate(m1):
        phi[old] = phi1[new]
    for new, old in enumerate(m2):
        phi[old] = phi2[new]
    return phi


def _claim6_site(G, L, P, K):
    walk = K.vertices
    n = len(walk)
    for i in range(n):
        v0, v1, v2 = walk[i - 1], walk[i], walk[(i + 1) % n]
        if len(L[v1]) != 2:
            continue
        a0 = L[v1] & L[v0]
        a2 = L[v1] & L[v2]
        if a0 and a0 == a2:
            return (v0, v1, v2, next(iter(a0)))
    return None


def _claim6_step(G, L, P, variant, measure, site):
    v0, v1, v2, a = site
    b = next(iter(L[v1] - {a}))
    nbrs = set(G.adj[v1])
    edges = [e for e in G.edges() if v1 not in e]
    H, m = pg.subgraph_by_edges(G, edges, keep_vertices=[x for x in range(G.n) if x != v1])
    LH = tuple(L[o] - {b} if o in nbrs else L[o] for o in m)
    # remove edges between the new size-2 vertices with disjoint lists
    pedges = {frozenset((P[i], P[i + 1])) for i in range(len(P) - 1)}
    keep = []
    for (x, y) in H.edges():
        ox, oy = m[x], m[y]
        if frozenset((ox, oy)) in pedges:
            keep.append((x, y))
            continue
        if len(LH[x]) == 2 and len(LH[y]) == 2 and not (LH[x] & LH[y]):
            continue
        keep.append((x, y))
    H2, m2 = pg.subgraph_by_edges(H, keep, keep_vertices=range(H.n))
    to_parent = tuple(m[o] for o in m2)
    LH2 = tuple(LH[o] for o in m2)
    PH = tuple(_map_new(to_parent, x) for x in P)
    pref = [_surviving_outer_dart_face(H2, to_parent, G)]
    H3 = _choose_outer(H2, LH2, PH, variant, pref, True, G, L, P, "claim6")
    sub = _recurse(H3, LH2, PH, variant, measure)
    phi = {old: sub[new] for new, old in enumerate(to_parent)}
    phi[v1] = b
    return phi


def _claim7_site(G, L, P, K):
    walk = K.vertices
    n = len(walk)
    for i in range(n):
        v0, v1, v2 = walk[i - 1], walk[i], walk[(i + 1) % n]
        if len(L[v1]) != 3 or v1 in set(P):
            continue
        s0, s2 = len(L[v0]), len(L[v2])
        if s0 != 2 and s2 != 2:
            return ("drop-color", v1)
        if (s0 == 2) != (s2 == 2):
            if s0 == 2:
                v0, v2 = v2, v0
            return ("edge-drop", (v1, v2))
    return None


def _claim7b_step(G, L, P, variant, measure, v1, v2):
    inter = L[v1] & L[v2]
    if len(inter) != 1:
        _mismatch("claim7b:intersection", G, L, P, variant, pair=[v1, v2])
    a = next(iter(inter))
    edges = [e for e in G.edges() if set(e) != {v1, v2}]
    H, m = pg.subgraph_by_edges(G, edges, keep_vertices=range(G.n))
    LH = tuple(L[o] - {a} if o == v1 else L[o] for o in m)
    fid = _surviving_outer_dart_face(H, m, G)
    H = _choose_outer(H, LH, P, variant, [fid], True, G, L, P, "claim7b")
    sub = _recurse(H, LH, tuple(P), variant, measure)
    return {old: sub[new] for new, old in enumerate(m)}


def _x_step(G, L, P, variant, measure, K):
    if not P:
        v = min(K.vertices)
        L2 = tuple(frozenset((min(s),)) if w == v else s for w, s in enumerate(L))
        return _recurse(G, L2, (v,), variant, measure)
    walk = list(K.vertices)
    n = len(walk)
    pset = set(P)
    p0 = None
    for i, v in enumerate(walk):
        if v in pset and walk[(i + 1) % n] not in pset:
            p0 = i
            break
    if p0 is None:
        _mismatch("x-step:outer-face-all-P", G, L, P, variant)
    seq = [walk[(p0 + i) % n] for i in range(n)]
    vs = [seq[0]]
    t = 0
    for v in seq[1:]:
        if v in pset:
            break
        vs.append(v)
        t += 1
    vnext = seq[t + 1] if t + 1 < n else seq[0]
    if vnext not in pset:
        _mismatch("x-step:labeling", G, L, P, variant)
    label = {i: vs[i] for i in range(1, t + 1)}
    label[0] = vs[0]
    label[t + 1] = vnext
    for i in range(1, t + 1):
        want = 2 if i % 2 == 1 else 3
        if len(L[label[i]]) != want:
            _mismatch("x-step:alternation", G, L, P, variant,
                      sizes=[len(L[label[i]]) for i in range(1, t + 1)])
    if t % 2 == 0:
        _mismatch("x-step:parity", G, L, P, variant, t=t)
    if t < 3:
        _mismatch("x-step:too-short", G, L, P, variant, t=t)
    v1, v2, v3 = label[1], label[2], label[3]
    v4 = label[4] if t >= 4 else label[t + 1]
    bad_chord = G.has_edge(v2, v4)
    if bad_chord:
        gi, mi = pg.int_ext(G, pg.CycleRef((v2, v3, v4)))[0]
        if gi.n != 3:
            _mismatch("x-step:v2v4-chord-interior", G, L, P, variant)
    X, phiX = _select_x(G, L, P, variant, label, t, bad_chord)
    # build G' and L'
    Xset = set(X)
    LH_parent = {}
    for v in range(G.n):
        if v in Xset:
            continue
        drop = {phiX[x] for x in Xset if G.has_edge(x, v)}
        LH_parent[v] = L[v] - drop
        if not LH_parent[v]:
            _mismatch("x-step:emptied-list", G, L, P, variant, vertex=v)
    pedges = {frozenset((P[i], P[i + 1])) for i in range(len(P) - 1)}
    edges = []
    for (a, b) in G.edges():
        if a in Xset or b in Xset:
            continue
        if frozenset((a, b)) not in pedges and not (LH_parent[a] & LH_parent[b]):
            continue
        edges.append((a, b))
    H, m = pg.subgraph_by_edges(G, edges, keep_vertices=[v for v in range(G.n) if v not in Xset])
    LH = tuple(frozenset(LH_parent[o]) for o in m)
    PH = tuple(_map_new(m, x) for x in P)
    pref = [_surviving_outer_dart_face(H, m, G)]
    H = _choose_outer(H, LH, PH, variant, pref, True, G, L, P, "x-step")
    sub = _recurse(H, LH, PH, variant, measure)
    phi = {old: sub[new] for new, old in enumerate(m)}
    phi.update(phiX)
    return phi


def _select_x(G, L, P, variant, label, t, bad_chord):
    v1, v2, v3 = label[1], label[2], label[3]
    v4 = label[4] if t >= 4 else label[t + 1]
    if not bad_chord:
        free = sorted(L[v2] - (L[v1] | L[v3]))
        if not free:
            _mismatch("x-selection", G, L, P, variant, rule="X1:no-color")
        c = free[0]
        w = _common_neighbor(G, v2, v3)
        if w is None or c not in L[w]:
            return (v2,), {v2: c}
        bset = L[v3] - L[v4]
        if len(bset) != 1:
            _mismatch("x-selection", G, L, P, variant, rule="X1b:no-unique-b")
        return (v2, v3), {v2: c, v3: next(iter(bset))}
    v5 = label[5] if t >= 5 else label[t + 1]
    w = _common_neighbor(G, v4, v5)
    forbidden4 = L[v5] | (L[w] if w is not None else frozenset())
    for c4 in sorted(L[v4] - forbidden4):
        for c2 in sorted(L[v2] - (L[v1] | {c4})):
            for c3 in sorted(L[v3] - {c4}):
                if c2 != c3:
                    return (v2, v3, v4), {v2: c2, v3: c3, v4: c4}
    _mismatch("x-selection", G, L, P, variant, rule="X2")


def _common_neighbor(G, a, b):
    common = sorted((G.adj[a] & G.adj[b]))
    return common[0] if common else None
