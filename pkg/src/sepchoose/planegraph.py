"""Plane graphs as rotation systems, with the structural queries the proofs use.

A plane graph is stored as one rotation per vertex: the cyclic counterclockwise
order of its neighbors.  Faces are derived, never supplied: the facial walk
containing dart (u, v) continues with (v, w) where w follows u in the rotation
of v.  With counterclockwise rotations this traces every bounded face
counterclockwise and the outer face clockwise; each dart lies on exactly one
facial walk, so for a connected graph |V| - |E| + |F| = 2.

Vertices are 0..n-1.  Subgraph operations return a new dense graph plus a
`to_parent` tuple mapping new indices to old ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    BudgetExceeded,
    DisconnectedGraph,
    ForbiddenCyclePresent,
    InconsistentRotation,
    NotACycle,
    OuterFaceNotFound,
    QNotInterior,
)

Dart = tuple  # (tail, head)


def _canonical_cycle(seq):
    """Lexicographically least rotation of seq (orientation preserved)."""
    n = len(seq)
    best = None
    for i in range(n):
        rot = tuple(seq[i:]) + tuple(seq[:i])
        if best is None or rot < best:
            best = rot
    return best


@dataclass(frozen=True)
class CycleRef:
    """A cycle given by its vertex sequence; optionally flagged as the outer face."""

    vertices: tuple
    bounds_outer: bool = False

    def __len__(self):
        return len(self.vertices)

    def edge_set(self):
        vs = self.vertices
        return {frozenset((vs[i], vs[(i + 1) % len(vs)])) for i in range(len(vs))}


@dataclass(frozen=True)
class Face:
    id: int
    darts: tuple

    @property
    def length(self):
        return len(self.darts)

    def vertices(self):
        return tuple(d[0] for d in self.darts)


class PlaneGraph:
    """Immutable plane graph; all queries are read-only."""

    def __init__(self, rotation, outer_face_hint=None, _allow_disconnected=True):
        rotation = tuple(tuple(nbrs) for nbrs in rotation)
        self.n = len(rotation)
        self.rotation = rotation
        self._validate()
        self._nbr_pos = {}
        for u, nbrs in enumerate(rotation):
            for i, v in enumerate(nbrs):
                self._nbr_pos[(u, v)] = i
        self.adj = tuple(frozenset(nbrs) for nbrs in rotation)
        self.m = sum(len(nb) for nb in rotation) // 2
        self.faces = self._trace_faces()
        self.dart_face = {}
        for f in self.faces:
            for d in f.darts:
                self.dart_face[d] = f.id
        self.connected = self._check_connected()
        if not self.connected and not _allow_disconnected:
            raise DisconnectedGraph("graph is disconnected")
        self.outer_face_id = self._pick_outer(outer_face_hint)

    # -- construction internals ----------------------------------------------

    def _validate(self):
        for u, nbrs in enumerate(self.rotation):
            seen = set()
            for v in nbrs:
                if not (0 <= v < self.n):
                    raise InconsistentRotation(f"vertex {u} lists out-of-range neighbor {v}")
                if v == u:
                    raise InconsistentRotation(f"loop at vertex {u}")
                if v in seen:
                    raise InconsistentRotation(f"parallel edge {u}-{v}")
                seen.add(v)
        for u, nbrs in enumerate(self.rotation):
            for v in nbrs:
                if u not in self.rotation[v]:
                    raise InconsistentRotation(f"dart {u}->{v} has no reverse")

    def _next_dart(self, dart):
        u, v = dart
        pos = self._nbr_pos[(v, u)]
        w = self.rotation[v][(pos + 1) % len(self.rotation[v])]
        return (v, w)

    def _trace_faces(self):
        seen = set()
        faces = []
        for u in range(self.n):
            for v in self.rotation[u]:
                d = (u, v)
                if d in seen:
                    continue
                walk = []
                cur = d
                while cur not in seen:
                    seen.add(cur)
                    walk.append(cur)
                    cur = self._next_dart(cur)
                if cur != d:
                    raise InconsistentRotation("face tracing did not close")
                faces.append(Face(len(faces), tuple(walk)))
        return tuple(faces)

    def _check_connected(self):
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self.rotation[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def _pick_outer(self, hint):
        if not self.faces:
            return None
        if hint is not None:
            want = tuple(hint)
            for f in self.faces:
                vs = f.vertices()
                if len(vs) != len(want):
                    continue
                if _canonical_cycle(vs) == _canonical_cycle(want):
                    return f.id
                if _canonical_cycle(vs) == _canonical_cycle(tuple(reversed(want))):
                    return f.id
            raise OuterFaceNotFound(f"no facial walk matches hint {want}")
        best = None
        for f in self.faces:
            key = (-f.length, _canonical_cycle(f.vertices()))
            if best is None or key < best[0]:
                best = (key, f.id)
        return best[1]

    # -- basic queries ---------------------------------------------------------

    def with_outer(self, face_id):
        """Copy of this graph with a different face designated outer."""
        if not (0 <= face_id < len(self.faces)):
            raise OuterFaceNotFound(f"no face {face_id}")
        other = object.__new__(PlaneGraph)
        other.__dict__.update(self.__dict__)
        other.outer_face_id = face_id
        return other

    def degree(self, v):
        return len(self.rotation[v])

    def edges(self):
        return sorted({(min(u, v), max(u, v)) for u in range(self.n) for v in self.rotation[u]})

    def has_edge(self, u, v):
        return v in self.adj[u]

    @property
    def outer_face(self):
        return self.faces[self.outer_face_id]

    def outer_cycle(self) -> CycleRef:
        """The outer face as a CycleRef; requires the walk to be a cycle."""
        vs = self.outer_face.vertices()
        if len(set(vs)) != len(vs):
            raise NotACycle("outer face walk revisits a vertex")
        return CycleRef(vs, bounds_outer=True)

    def euler_genus_zero(self):
        return self.connected and self.n - self.m + len(self.faces) == 2

    def check_cycle(self, K: CycleRef):
        vs = K.vertices
        if len(vs) < 3 or len(set(vs)) != len(vs):
            raise NotACycle(f"{vs} is not a cycle")
        for i, u in enumerate(vs):
            if vs[(i + 1) % len(vs)] not in self.adj[u]:
                raise NotACycle(f"{vs} misses edge {u}-{vs[(i + 1) % len(vs)]}")

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        data = {"n": self.n, "rotation": [list(nb) for nb in self.rotation]}
        if self.outer_face_id is not None:
            data["outer_face"] = list(self.outer_face.vertices())
        return json.dumps(data)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["rotation"], outer_face_hint=data.get("outer_face"))

    def to_planar_code(self):
        """plantri-style ASCII: first line n, then neighbor lists in rotation order."""
        body = ",".join(" ".join(str(v) for v in nbrs) for nbrs in self.rotation)
        return f"{self.n}\n{body}\n"

    @classmethod
    def from_planar_code(cls, text):
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) < 2:
            raise InconsistentRotation("planar code needs a header line and a body line")
        n = int(lines[0])
        groups = lines[1].split(",")
        if len(groups) != n:
            raise InconsistentRotation(f"expected {n} neighbor groups, got {len(groups)}")
        rotation = []
        for grp in groups:
            toks = grp.split()
            if toks and all(t.isalpha() for t in toks):
                rotation.append([ord(t.lower()) - ord("a") for t in toks])
            else:
                rotation.append([int(t) for t in toks])
        return cls(rotation)

    def to_dot(self):
        lines = ["graph G {"]
        for f in self.faces:
            tag = " (outer)" if f.id == self.outer_face_id else ""
            lines.append(f"  // face {f.id}{tag}: {' '.join(str(v) for v in f.vertices())}")
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines)

    # -- canonical form ----------------------------------------------------------

    def canonical_certificate(self):
        """Canonical form under plane isomorphism (rotation + reflection).

        BFS codes from every starting dart at a minimum-degree vertex (the
        first code row is (1..deg), so no other start can win), with
        row-by-row abandonment against the best code so far.
        """
        cached = getattr(self, "_cert", None)
        if cached is not None:
            return cached
        if self.n == 1 or self.m == 0:
            cert = (self.n,)
            self._cert = cert
            return cert
        mindeg = min(len(nb) for nb in self.rotation if nb)
        best = None
        for reflect in (False, True):
            rot = self.rotation if not reflect else tuple(tuple(reversed(nb)) for nb in self.rotation)
            pos = {}
            for u, nbrs in enumerate(rot):
                for i, v in enumerate(nbrs):
                    pos[(u, v)] = i
            for s in range(self.n):
                if len(rot[s]) != mindeg:
                    continue
                for t in rot[s]:
                    code = _bfs_code_pruned(rot, pos, s, t, best)
                    if code is not None:
                        best = code
        cert = tuple(best)
        self._cert = cert
        return cert

    def __repr__(self):
        return f"PlaneGraph(n={self.n}, m={self.m}, faces={len(self.faces)})"


def _bfs_code_pruned(rot, pos, s, t, best):
    """Traversal code from dart (s, t), or None once it exceeds `best`."""
    order = {s: 0}
    queue = [(s, t)]
    code = [len(rot)]
    qi = 0
    improved = best is None
    while qi < len(queue):
        u, first = queue[qi]
        qi += 1
        nbrs = rot[u]
        k = pos[(u, first)]
        deg = len(nbrs)
        row = []
        for i in range(deg):
            v = nbrs[(k + i) % deg]
            ov = order.get(v)
            if ov is None:
                ov = order[v] = len(order)
                queue.append((v, u))
            row.append(ov)
        row = tuple(row)
        code.append(row)
        if not improved:
            idx = len(code) - 1
            if idx < len(best):
                ref = best[idx]
                if row > ref:
                    return None
                if row < ref:
                    improved = True
            else:
                return None
    code.append((len(order),))
    if not improved and len(code) >= len(best):
        return None
    return code


def build(n, rotation, outer_face_hint=None):
    """Construct a PlaneGraph, checking the rotation is consistent."""
    if len(rotation) != n:
        raise InconsistentRotation(f"expected {n} rotation lists, got {len(rotation)}")
    return PlaneGraph(rotation, outer_face_hint=outer_face_hint)


# -- cycle search -------------------------------------------------------------


def has_cycle_of_length(G, k, node_budget=10_000_000):
    """True iff G has a (not necessarily facial) cycle on exactly k vertices.

    Length-bounded DFS; exceeding node_budget raises, never returns False.
    """
    if k < 3:
        raise ValueError("cycle length must be >= 3")
    nodes = 0
    adj = G.adj
    for s in range(G.n):
        stack = [(s, (s,))]
        while stack:
            u, path = stack.pop()
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("cycle search budget exhausted", nodes=nodes)
            if len(path) == k:
                if s in adj[u]:
                    return True
                continue
            for v in adj[u]:
                # only cycles whose least vertex is s, each found once
                if v > s and v not in path:
                    stack.append((v, path + (v,)))
    return False


def all_cycles(G, max_len=None):
    """Every cycle as a canonical vertex tuple (naive; for small graphs/tests)."""
    out = set()
    adj = G.adj
    limit = max_len if max_len is not None else G.n
    for s in range(G.n):
        stack = [(s, (s,))]
        while stack:
            u, path = stack.pop()
            if len(path) >= 3 and s in adj[u]:
                rev = (path[0],) + tuple(reversed(path[1:]))
                out.add(min(_canonical_cycle(path), _canonical_cycle(rev)))
            if len(path) == limit:
                continue
            for v in adj[u]:
                if v > s and v not in path:
                    stack.append((v, path + (v,)))
    return sorted(out, key=lambda c: (len(c), c))


# -- chords and k-chords --------------------------------------------------------


def chords(G, K: CycleRef):
    """Edges with both ends on K that are not edges of K."""
    G.check_cycle(K)
    on = set(K.vertices)
    kedges = K.edge_set()
    out = []
    for u, v in G.edges():
        if u in on and v in on and frozenset((u, v)) not in kedges:
            out.append((u, v))
    return out


def k_chords(G, K: CycleRef, k):
    """All paths of length k with endpoints on K and interior off K."""
    if k < 2:
        raise ValueError("k-chords need k >= 2")
    G.check_cycle(K)
    on = set(K.vertices)
    out = set()
    for a in sorted(on):
        stack = [(a, (a,))]
        while stack:
            u, path = stack.pop()
            if len(path) == k + 1:
                continue
            for v in G.adj[u]:
                if v in path:
                    continue
                if v in on:
                    if len(path) == k:
                        b = v
                        if a < b:
                            out.add(path + (b,))
                        else:
                            out.add(tuple(reversed(path + (b,))))
                    continue
                stack.append((v, path + (v,)))
    return sorted(out)


# -- subgraphs with induced rotation ---------------------------------------------


def subgraph_by_edges(G, edges, keep_vertices=(), outer_face_hint=None):
    """Plane subgraph on the given edge set (plus isolated keep_vertices).

    Returns (PlaneGraph, to_parent) where to_parent[new] = old index.
    """
    eset = {frozenset(e) for e in edges}
    verts = set(keep_vertices)
    for e in eset:
        verts.update(e)
    to_parent = tuple(sorted(verts))
    idx = {old: new for new, old in enumerate(to_parent)}
    rotation = []
    for old in to_parent:
        rotation.append([idx[v] for v in G.rotation[old] if frozenset((old, v)) in eset])
    hint = None
    if outer_face_hint is not None:
        hint = [idx[v] for v in outer_face_hint]
    return PlaneGraph(rotation, outer_face_hint=hint), to_parent


def _region_split(G, K: CycleRef):
    """Faces of G on each side of cycle K; returns (inside_faces, outside_faces)."""
    G.check_cycle(K)
    kedges = K.edge_set()
    # dual graph minus edges crossing K
    comp = [None] * len(G.faces)
    for f in G.faces:
        if comp[f.id] is not None:
            continue
        comp[f.id] = f.id
        stack = [f.id]
        while stack:
            fid = stack.pop()
            for d in G.faces[fid].darts:
                if frozenset(d) in kedges:
                    continue
                g = G.dart_face[(d[1], d[0])]
                if comp[g] is None:
                    comp[g] = f.id
                    stack.append(g)
    outer_comp = comp[G.outer_face_id]
    comps = set(comp)
    if len(comps) != 2:
        raise NotACycle(f"cycle {K.vertices} does not bound a disc region")
    inside = [f for f in G.faces if comp[f.id] != outer_comp]
    outside = [f for f in G.faces if comp[f.id] == outer_comp]
    return inside, outside


def _side_subgraph(G, K, faces, outer_hint):
    edges = set()
    for f in faces:
        for d in f.darts:
            edges.add(frozenset(d))
    edges.update(K.edge_set())
    return subgraph_by_edges(G, edges, keep_vertices=K.vertices, outer_face_hint=outer_hint)


def int_ext(G, K: CycleRef):
    """(Int_K(G), Ext_K(G)) as (graph, to_parent) pairs; Int ∩ Ext = K."""
    if not G.connected:
        raise DisconnectedGraph("int_ext needs a connected graph")
    inside, outside = _region_split(G, K)
    interior = _side_subgraph(G, K, inside, outer_hint=K.vertices)
    ext_hint = G.outer_face.vertices()
    if len(set(ext_hint)) != len(ext_hint):
        ext_hint = K.vertices
    exterior = _side_subgraph(G, K, outside, outer_hint=ext_hint)
    return interior, exterior


def q_components(G, K: CycleRef, Q):
    """Split along a chord or k-chord Q of the outer cycle K.

    Returns two (graph, to_parent) pairs, each with outer face C_i = Q + arc.
    """
    G.check_cycle(K)
    outer = G.outer_cycle()
    if _canonical_cycle(outer.vertices) != _canonical_cycle(K.vertices) and \
       _canonical_cycle(tuple(reversed(outer.vertices))) != _canonical_cycle(K.vertices):
        raise QNotInterior("K must bound the outer face")
    Q = tuple(Q)
    if len(Q) < 2:
        raise QNotInterior("Q must be a chord or k-chord")
    on = set(K.vertices)
    if Q[0] not in on or Q[-1] not in on:
        raise QNotInterior("Q endpoints must lie on K")
    if any(v in on for v in Q[1:-1]):
        raise QNotInterior("Q interior must avoid K")
    for x, y in zip(Q, Q[1:]):
        if y not in G.adj[x]:
            raise QNotInterior(f"Q misses edge {x}-{y}")
    if len(Q) == 2 and frozenset(Q) in K.edge_set():
        raise QNotInterior("a chord may not be an edge of K")
    vs = K.vertices
    ia, ib = vs.index(Q[0]), vs.index(Q[-1])
    arc1, arc2 = [], []
    i = ia
    while i != ib:
        arc1.append(vs[i])
        i = (i + 1) % len(vs)
    arc1.append(vs[ib])
    i = ib
    while i != ia:
        arc2.append(vs[i])
        i = (i + 1) % len(vs)
    arc2.append(vs[ia])
    qback = tuple(reversed(Q))
    c1 = CycleRef(tuple(arc1) + qback[1:-1])
    c2 = CycleRef(tuple(arc2) + tuple(Q[1:-1]))
    g1 = int_ext(G, c1)[0]
    g2 = int_ext(G, c2)[0]
    return g1, g2


# -- connectivity ------------------------------------------------------------------


def cut_vertices(G):
    """Articulation points, by iterative lowpoint DFS."""
    n = G.n
    num = [-1] * n
    low = [0] * n
    parent = [-1] * n
    out = set()
    counter = 0
    for root in range(n):
        if num[root] != -1:
            continue
        stack = [(root, iter(G.rotation[root]))]
        num[root] = counter
        low[root] = counter
        counter += 1
        root_children = 0
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if num[v] == -1:
                    parent[v] = u
                    num[v] = counter
                    low[v] = counter
                    counter += 1
                    if u == root:
                        root_children += 1
                    stack.append((v, iter(G.rotation[v])))
                    advanced = True
                    break
                elif v != parent[u]:
                    low[u] = min(low[u], num[v])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if p != root and low[u] >= num[p]:
                        out.add(p)
        if root_children >= 2:
            out.add(root)
    return out


def is_2connected(G):
    return G.connected and G.n >= 3 and not cut_vertices(G)


# -- triangle clusters ----------------------------------------------------------------


@dataclass(frozen=True)
class TriangleCluster:
    kind: str               # isolated | diamond | facial_K4 | tetrahedron
    faces: tuple            # face ids
    roles: dict

    def __iter__(self):
        return iter(self.faces)


def triangle_clusters(G, include_outer=False, check_forbidden=True):
    """Maximal dual-connected sets of 3-faces, tagged per the charge argument.

    By default the outer face is excluded, matching the plane reading of the
    tags; with include_outer the sphere reading is used and the whole-graph K4
    is tagged 'tetrahedron'.
    """
    if check_forbidden:
        if has_cycle_of_length(G, 5) or has_cycle_of_length(G, 6):
            raise ForbiddenCyclePresent("triangle clustering needs a C5/C6-free graph")
    tri = [f for f in G.faces if f.length == 3
           and (include_outer or f.id != G.outer_face_id)]
    tri_ids = {f.id for f in tri}
    # adjacency among 3-faces via shared edges
    adj = {f.id: set() for f in tri}
    for f in tri:
        for d in f.darts:
            g = G.dart_face[(d[1], d[0])]
            if g in tri_ids and g != f.id:
                adj[f.id].add(g)
    seen = set()
    clusters = []
    for f in tri:
        if f.id in seen:
            continue
        comp = [f.id]
        seen.add(f.id)
        stack = [f.id]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comp.sort()
        clusters.append(_tag_cluster(G, comp))
    clusters.sort(key=lambda c: c.faces)
    return clusters


def _tag_cluster(G, comp):
    faces = [G.faces[i] for i in comp]
    if len(comp) == 1:
        return TriangleCluster("isolated", tuple(comp), {"vertices": faces[0].vertices()})
    if len(comp) == 2:
        a, b = (set(f.vertices()) for f in faces)
        shared = tuple(sorted(a & b))
        tips = tuple(sorted(a ^ b))
        return TriangleCluster("diamond", tuple(comp),
                               {"shared_edge": shared, "tips": tips})
    if len(comp) == 3:
        common = set(faces[0].vertices())
        for f in faces[1:]:
            common &= set(f.vertices())
        if len(common) != 1:
            raise ForbiddenCyclePresent("3-face triple without a hub; input not C5/C6-free")
        hub = common.pop()
        rim = sorted(set().union(*(f.vertices() for f in faces)) - {hub})
        return TriangleCluster("facial_K4", tuple(comp), {"hub": hub, "rim": tuple(rim)})
    if len(comp) == 4 and G.n == 4:
        # whole-graph K4 on the sphere; only possible 4-cluster
        return TriangleCluster("tetrahedron", tuple(comp), {})
    raise ForbiddenCyclePresent("triangle cluster larger than three faces; input not C5/C6-free")
