"""Exact-rational discharging: charges, vertex rules R0-R4, face rules R5-R7,
configuration detection C1-C16, primality, and the full audit.

All charge arithmetic is fractions.Fraction; floating point is forbidden here
(the rules move sevenths and halves).  Faces are treated sphere-style: the
outer face carries charge and joins clusters like any other face.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import planegraph as pg
from .errors import BadHypothesis, PreconditionViolated
from .errors import DisconnectedGraph as Disconnected


@dataclass(frozen=True)
class Transfer:
    source: tuple
    sink: tuple
    amount: Fraction
    rule: str


@dataclass
class ChargeState:
    vertex: dict
    face: dict
    ledger: list = field(default_factory=list)

    def total(self):
        return sum(self.vertex.values()) + sum(self.face.values())

    def send(self, source, sink, amount, rule):
        kind, i = source
        (self.vertex if kind == "v" else self.face)[i] -= amount
        kind, i = sink
        (self.vertex if kind == "v" else self.face)[i] += amount
        self.ledger.append(Transfer(source, sink, amount, rule))

    def copy(self):
        return ChargeState(dict(self.vertex), dict(self.face), list(self.ledger))


def initial_charges(G, p):
    """mu(v) = 2d(v)-6 except mu(p) = 2d(p); mu(f) = d(f)-6; total -6."""
    if not G.connected:
        raise Disconnected("initial charges need a connected plane graph")
    if not (0 <= p < G.n):
        raise BadHypothesis(f"no vertex {p}")
    vertex = {}
    for v in range(G.n):
        d = G.degree(v)
        vertex[v] = Fraction(2 * d if v == p else 2 * d - 6)
    face = {f.id: Fraction(f.length - 6) for f in G.faces}
    st = ChargeState(vertex, face)
    if st.total() != Fraction(-6):
        raise PreconditionViolated(f"initial total is {st.total()}, not -6")
    return st


# -- structural classification ------------------------------------------------------


def is_low(G, v):
    return G.degree(v) == 3


def is_high(G, v):
    return not is_low(G, v)


@dataclass
class FaceClass:
    """Per-face tags used by the rules."""

    length: dict
    small: set
    large: set
    special4: set
    normal4: set
    bad3: set
    good3: set
    three: set
    clusters: list
    cluster_of: dict
    hungry: set = field(default_factory=set)

    def is_hungry(self, fid):
        return fid in self.hungry


def classify_faces(G, p):
    three, four, special4, normal4, bad3, good3, small, large = (set() for _ in range(8))
    length = {}
    for f in G.faces:
        length[f.id] = f.length
        if f.length == 3:
            three.add(f.id)
            small.add(f.id)
            if any(is_low(G, v) for v in f.vertices()):
                bad3.add(f.id)
            else:
                good3.add(f.id)
        elif f.length == 4:
            small.add(f.id)
            (special4 if p in f.vertices() else normal4).add(f.id)
        elif f.length >= 7:
            large.add(f.id)
    clusters = pg.triangle_clusters(G, include_outer=True, check_forbidden=False)
    cluster_of = {}
    for ci, cl in enumerate(clusters):
        for fid in cl.faces:
            cluster_of[fid] = ci
    return FaceClass(length, small, large, special4, normal4, bad3, good3,
                     three, clusters, cluster_of)


def check_rule_preconditions(G, p):
    if not G.connected:
        raise Disconnected("rules need a connected graph")
    if not pg.is_2connected(G):
        raise PreconditionViolated("rules need a 2-connected graph")
    if pg.has_cycle_of_length(G, 5) or pg.has_cycle_of_length(G, 6):
        raise PreconditionViolated("rules need a C5/C6-free graph")
    if any(G.degree(v) < 3 for v in range(G.n) if v != p):
        raise PreconditionViolated("a vertex other than p has degree < 3")
    if G.degree(p) < 2:
        raise PreconditionViolated("p has degree < 2")
    for f in G.faces:
        if f.length in (5, 6):
            raise PreconditionViolated("5- or 6-face present")
    # a 4-face sharing exactly one edge (and nothing else) with a small face
    # closes a 5- or 6-cycle, so this can only fire on inconsistent input;
    # degenerate sharings (two edges through a degree-2 p) are legitimate
    for f in G.faces:
        if f.length != 4:
            continue
        for d in f.darts:
            g = G.dart_face[(d[1], d[0])]
            if G.faces[g].length <= 4 and g != f.id:
                shared_edges = sum(1 for e in f.darts if (e[1], e[0]) in G.faces[g].darts)
                shared_verts = len(_face_vertices(G, f.id) & _face_vertices(G, g))
                if shared_edges == 1 and shared_verts == 2:
                    raise PreconditionViolated("a 4-face is adjacent to a small face")


def _faces_at(G, v):
    """Face ids incident to v, in rotation order (each once: 2-connected)."""
    out = []
    for w in G.rotation[v]:
        out.append(G.dart_face[(v, w)])
    return out


# -- vertex rules -------------------------------------------------------------------


def apply_vertex_rules(G, p, charges, fc=None):
    """Apply R0-R4; exactly one rule per vertex of positive initial charge."""
    check_rule_preconditions(G, p)
    fc = fc or classify_faces(G, p)
    st = charges.copy()
    # R0
    for fid in sorted(_faces_at(G, p)):
        if fc.length[fid] == 4:
            st.send(("v", p), ("f", fid), Fraction(2), "R0")
    for v in range(G.n):
        if v == p:
            continue
        d = G.degree(v)
        if d < 4:
            continue
        incident = _faces_at(G, v)
        inc3 = [f for f in incident if f in fc.three]
        incn4 = [f for f in incident if f in fc.normal4]
        if d == 4:
            _rule_d4(G, v, st, fc, inc3, incn4)
        elif d == 5:
            _rule_d5(G, v, st, fc, inc3, incn4)
        else:
            for f in sorted(incn4):
                st.send(("v", v), ("f", f), Fraction(1), "R4")
            for f in sorted(inc3):
                st.send(("v", v), ("f", f), Fraction(3, 2), "R4")
    fc.hungry = _hungry_faces(st, fc)
    return st, fc


def _rule_d4(G, v, st, fc, inc3, incn4):
    if inc3 and incn4:
        if len(inc3) != 1 or len(incn4) != 1:
            raise PreconditionViolated(
                f"degree-4 vertex {v} sees {len(inc3)} 3-faces and {len(incn4)} normal 4-faces")
        t, f = inc3[0], incn4[0]
        nhigh = sum(1 for x in G.faces[f].vertices() if is_high(G, x))
        if nhigh == 1:
            st.send(("v", v), ("f", f), Fraction(1), "R2A")
            st.send(("v", v), ("f", t), Fraction(1), "R2A")
        else:
            st.send(("v", v), ("f", f), Fraction(4, 7), "R2B")
            st.send(("v", v), ("f", t), Fraction(10, 7), "R2B")
        return
    receivers = sorted(inc3 + incn4)
    if receivers:
        share = Fraction(2, len(receivers))
        for f in receivers:
            st.send(("v", v), ("f", f), share, "R1")


def _adjacent_face_pairs(G, fids):
    """Pairs among fids sharing an edge."""
    out = []
    for a, b in itertools.combinations(sorted(set(fids)), 2):
        darts_b = set(G.faces[b].darts)
        if any((d[1], d[0]) in darts_b for d in G.faces[a].darts):
            out.append((a, b))
    return out


def _rule_d5(G, v, st, fc, inc3, incn4):
    bad = [f for f in inc3 if f in fc.bad3]
    if incn4:
        for f in sorted(incn4):
            st.send(("v", v), ("f", f), Fraction(1), "R3A")
        if inc3:
            share = Fraction(4 - len(incn4), len(inc3))
            for f in sorted(inc3):
                st.send(("v", v), ("f", f), share, "R3A")
        return
    if len(bad) == 3:
        pairs = _adjacent_face_pairs(G, bad)
        if len(pairs) != 1:
            raise PreconditionViolated(
                f"three bad 3-faces at vertex {v} do not split into diamond + single")
        dia = set(pairs[0])
        lone = next(f for f in bad if f not in dia)
        st.send(("v", v), ("f", lone), Fraction(10, 7), "R3B")
        for f in sorted(dia):
            st.send(("v", v), ("f", f), Fraction(9, 7), "R3B")
        return
    if len(bad) == 1:
        partner = None
        cl = fc.clusters[fc.cluster_of[bad[0]]]
        if cl.kind == "diamond":
            other = next(f for f in cl.faces if f != bad[0])
            if other in inc3:
                partner = other
        if partner is not None:
            st.send(("v", v), ("f", bad[0]), Fraction(3, 2), "R3C")
            st.send(("v", v), ("f", partner), Fraction(3, 2), "R3C")
            rest = [f for f in inc3 if f not in (bad[0], partner)]
            for f in sorted(rest):
                st.send(("v", v), ("f", f), Fraction(1), "R3C")
            return
    # R3D
    for f in sorted(bad):
        st.send(("v", v), ("f", f), Fraction(3, 2), "R3D")
    nonbad = [f for f in inc3 if f not in bad]
    if nonbad:
        share = Fraction(4 - Fraction(3, 2) * len(bad), len(nonbad))
        for f in sorted(nonbad):
            st.send(("v", v), ("f", f), share, "R3D")


def _hungry_faces(st, fc):
    """Negatively charged small faces, and 3-faces of negatively charged diamonds."""
    hungry = {fid for fid in fc.small if st.face[fid] < 0}
    for cl in fc.clusters:
        if cl.kind == "diamond" and sum(st.face[f] for f in cl.faces) < 0:
            hungry.update(cl.faces)
    return hungry


# -- face rules ----------------------------------------------------------------------


def apply_face_rules(G, charges, fc):
    """R5-R7 from each large face; at most one rule per boundary slot."""
    st = charges.copy()
    overlaps = []
    for f in G.faces:
        if f.length < 7:
            continue
        darts = f.darts
        L = len(darts)
        nbr = [G.dart_face[(d[1], d[0])] for d in darts]
        for i in range(L):
            fi = nbr[i]
            fprev = nbr[(i - 1) % L]
            fnext = nbr[(i + 1) % L]
            v_next = darts[i][1]     # vertex shared by f, f_i, f_{i+1}
            v_prev = darts[i][0]     # vertex shared by f, f_{i-1}, f_i
            fired = []
            if fc.is_hungry(fi):
                fired.append(("R5", fi))
            else:
                if fc.is_hungry(fnext) and G.degree(v_next) <= 4:
                    fired.append(("R6", fnext))
                if fc.is_hungry(fprev) and G.degree(v_prev) <= 4 and (
                        G.degree(v_next) >= 5 or not fc.is_hungry(fnext)):
                    fired.append(("R7", fprev))
            if len(fired) > 1:
                overlaps.append((f.id, i, [r for r, _ in fired]))
            if fired:
                rule, sink = fired[0]
                st.send(("f", f.id), ("f", sink), Fraction(1, 7),
                        f"{rule}[slot {i}]")
    return st, overlaps


# -- configurations -------------------------------------------------------------------


@dataclass(frozen=True)
class ConfigMatch:
    config: str
    roles: tuple       # sorted (name, vertex) pairs
    faces: tuple

    def role(self, name):
        return dict(self.roles)[name]

    def vertices(self):
        return tuple(sorted({v for _, v in self.roles}))


def _diamonds(G, fc):
    out = []
    for cl in fc.clusters:
        if cl.kind == "diamond":
            out.append((cl.roles["shared_edge"], cl.roles["tips"], cl.faces))
    return out


def _facial_k4s(G, fc):
    out = []
    for cl in fc.clusters:
        if cl.kind == "facial_K4":
            out.append((cl.roles["hub"], cl.roles["rim"], cl.faces))
        elif cl.kind == "tetrahedron":
            # whole-graph K4: every vertex is a hub of the three faces at it
            for hub in range(G.n):
                faces = tuple(sorted({G.dart_face[(hub, w)] for w in G.rotation[hub]}))
                rim = tuple(sorted(set(range(G.n)) - {hub}))
                out.append((hub, rim, faces))
    return out


def _bad_faces_at(G, fc, v, exclude=()):
    return [f for f in _faces_at(G, v) if f in fc.bad3 and f not in exclude]


def _face_vertices(G, fid):
    return set(G.faces[fid].vertices())


def find_configurations(G, p, fc=None):
    """All matches of (C1)-(C16); deterministic order."""
    fc = fc or classify_faces(G, p)
    deg = G.degree
    matches = []

    def add(config, roles, faces):
        matches.append(ConfigMatch(config, tuple(sorted(roles.items())),
                                   tuple(sorted(faces))))

    for fid in sorted(fc.three):
        vs = sorted(_face_vertices(G, fid))
        if p in vs:
            others = [v for v in vs if v != p]
            add("C1", {"p": p, "u": others[0], "v": others[1]}, (fid,))
        if sum(1 for v in vs if is_high(G, v)) <= 1:
            add("C3", {"x": vs[0], "y": vs[1], "z": vs[2]}, (fid,))
    for fid in sorted(fc.normal4):
        vs = sorted(_face_vertices(G, fid))
        if all(is_low(G, v) for v in vs):
            add("C2", dict(zip("abcd", vs)), (fid,))

    diamonds = _diamonds(G, fc)
    for (shared, tips, faces) in diamonds:
        for x, y in itertools.permutations(shared):
            z1, z2 = tips
            if deg(z1) == 3 and deg(z2) == 3 and deg(x) == 4 and deg(y) == 4 and x < y:
                add("C4", {"x": x, "y": y, "z1": z1, "z2": z2}, faces)
            if deg(x) == 3 and deg(y) == 4:
                add("C5", {"x": x, "y": y, "z1": z1, "z2": z2}, faces)
            # C8 / C9: pendant bad face at the degree-5 shared vertex
            if deg(y) == 5:
                rest = sorted(set(G.adj[y]) - {x, *tips})
                pend = _pendant_bad_face(G, fc, y, rest, faces)
                if pend is not None:
                    u, v, pf = pend
                    if deg(x) == 4 and deg(tips[0]) == 3 and deg(tips[1]) == 3:
                        add("C8", {"x": x, "y": y, "z1": tips[0], "z2": tips[1],
                                   "u": u, "v": v}, faces + (pf,))
                    if deg(x) == 3:
                        add("C9", {"x": x, "y": y, "z1": tips[0], "z2": tips[1],
                                   "u": u, "v": v}, faces + (pf,))
        # C10: pendant bad face at a degree-4 tip, everything else degree 4
        for z1, z2 in itertools.permutations(tips):
            x, y = shared
            if deg(z2) == 3 and deg(x) == 4 and deg(y) == 4 and deg(z1) == 4:
                rest = sorted(set(G.adj[z1]) - {x, y})
                pend = _pendant_bad_face(G, fc, z1, rest, faces)
                if pend is not None:
                    u, v, pf = pend
                    add("C10", {"x": x, "y": y, "z1": z1, "z2": z2, "u": u, "v": v},
                        faces + (pf,))
        _match_chain_diamonds(G, fc, shared, tips, faces, add)

    for (hub, rim, faces) in _facial_k4s(G, fc):
        if min(deg(r) for r in rim) <= 4:
            x, y, z = rim
            add("C6", {"w": hub, "x": x, "y": y, "z": z}, faces)
        for zstar in rim:
            if deg(zstar) != 5:
                continue
            rest = sorted(set(G.adj[zstar]) - {hub, *rim})
            pend = _pendant_bad_face(G, fc, zstar, rest, faces)
            if pend is not None:
                u, v, pf = pend
                others = sorted(set(rim) - {zstar})
                add("C7", {"w": hub, "x": others[0], "y": others[1], "z": zstar,
                           "u": u, "v": v}, faces + (pf,))

    _match_c11(G, fc, add)
    _match_c12_c13(G, fc, add)
    matches.sort(key=lambda m: (int(m.config[1:]), m.roles))
    return matches


def _pendant_bad_face(G, fc, v, rest, exclude):
    """A bad 3-face v-rest[0]-rest[1] not among `exclude`."""
    if len(rest) != 2:
        return None
    u, w = rest
    if not G.has_edge(u, w):
        return None
    fid = _face_of_triangle(G, v, u, w)
    if fid is None or fid in exclude or fid not in fc.bad3:
        return None
    return u, w, fid


def _face_of_triangle(G, a, b, c):
    for fid in _faces_at(G, a):
        if G.faces[fid].length == 3 and _face_vertices(G, fid) == {a, b, c}:
            return fid
    return None


def _match_c11(G, fc, add):
    for t in sorted(fc.bad3):
        for x in sorted(_face_vertices(G, t)):
            if G.degree(x) != 4:
                continue
            for f4 in sorted(fc.normal4):
                if f4 == t or x not in _face_vertices(G, f4):
                    continue
                others = _face_vertices(G, f4) - {x}
                if all(is_low(G, v) for v in others):
                    tri = sorted(_face_vertices(G, t))
                    quad = sorted(others)
                    add("C11", {"x": x, "y": tri[0] if tri[0] != x else tri[1],
                                "z": tri[-1] if tri[-1] != x else tri[-2],
                                "w": quad[0], "u": quad[1], "v": quad[2]},
                        (t, f4))


def _match_c12_c13(G, fc, add):
    threes = sorted(fc.three)
    for f1, f2 in itertools.permutations(threes, 2):
        inter = _face_vertices(G, f1) & _face_vertices(G, f2)
        if len(inter) != 1:
            continue
        x = inter.pop()
        if G.degree(x) != 4:
            continue
        lows1 = [v for v in _face_vertices(G, f1) - {x} if is_low(G, v)]
        lows2 = [v for v in _face_vertices(G, f2) - {x} if is_low(G, v)]
        if lows1 and lows2 and f1 < f2:
            add("C12", {"x": x, "y": min(lows1), "v": min(lows2),
                        "z": min(_face_vertices(G, f1) - {x, min(lows1)}),
                        "u": min(_face_vertices(G, f2) - {x, min(lows2)})},
                (f1, f2))
        # C13: chain f1 -x- f2 -v- f3
        if not lows1:
            continue
        for v in sorted(_face_vertices(G, f2) - {x}):
            if G.degree(v) != 4:
                continue
            for f3 in threes:
                if f3 in (f1, f2):
                    continue
                i23 = _face_vertices(G, f2) & _face_vertices(G, f3)
                if i23 != {v}:
                    continue
                lows3 = [w for w in _face_vertices(G, f3) - {v} if is_low(G, w)]
                if lows3:
                    add("C13", {"x": x, "v": v, "y": min(lows1), "p": min(lows3),
                                "z": min(_face_vertices(G, f1) - {x, min(lows1)}),
                                "u": min(_face_vertices(G, f2) - {x, v}),
                                "q": min(_face_vertices(G, f3) - {v, min(lows3)})},
                        (f1, f2, f3))


def _match_chain_diamonds(G, fc, shared, tips, faces, add):
    deg = G.degree
    for x, y in itertools.permutations(shared):
        for z1, z2 in itertools.permutations(tips):
            if deg(z1) != 3:
                continue
            # C14: d(x)=5, d(y)=4, d(z2)=4, bad faces at x and at z2
            if deg(x) == 5 and deg(y) == 4 and deg(z2) == 4:
                bx = _bad_faces_at(G, fc, x, exclude=faces)
                bz = _bad_faces_at(G, fc, z2, exclude=faces)
                if bx and bz:
                    add("C14", {"x": x, "y": y, "z1": z1, "z2": z2},
                        faces + (min(bx), min(bz)))
            # C15: x,y,z2 all degree 4, chain via a good face at z2
            if deg(x) == 4 and deg(y) == 4 and deg(z2) == 4:
                for gf, v in _good_chain_at(G, fc, z2, faces):
                    add("C15", {"x": x, "y": y, "z1": z1, "z2": z2, "v": v},
                        faces + gf)
            # C16: d(x)=5 with its own bad face, plus the C15 chain
            if deg(x) == 5 and deg(y) == 4 and deg(z2) == 4:
                bx = _bad_faces_at(G, fc, x, exclude=faces)
                if bx:
                    for gf, v in _good_chain_at(G, fc, z2, faces):
                        add("C16", {"x": x, "y": y, "z1": z1, "z2": z2, "v": v},
                            faces + (min(bx),) + gf)


def _good_chain_at(G, fc, z2, exclude):
    """Good 3-faces z2-u-v with d(v)=4 and another bad 3-face at v."""
    out = []
    for gf in _faces_at(G, z2):
        if gf in exclude or gf not in fc.good3:
            continue
        for v in sorted(_face_vertices(G, gf) - {z2}):
            if G.degree(v) != 4:
                continue
            more = _bad_faces_at(G, fc, v, exclude=(gf,) + tuple(exclude))
            if more:
                out.append(((gf, min(more)), v))
    return out


# -- primality --------------------------------------------------------------------------


def is_prime_structural(G, p):
    """(prime?, reasons).  Reasons name every failing condition / configuration."""
    reasons = []
    if not pg.is_2connected(G):
        reasons.append("not-2-connected")
    if any(G.degree(v) < 3 for v in range(G.n) if v != p):
        reasons.append("degree<3-off-p")
    if G.degree(p) < 2:
        reasons.append("degree(p)<2")
    fc = classify_faces(G, p)
    for m in find_configurations(G, p, fc):
        reasons.append(f"{m.config}:{m.vertices()}")
    return (not reasons), reasons


def is_prime(G, L, p):
    if len(L) != G.n or len(L[p]) != 1 or any(len(L[v]) != 3 for v in range(G.n) if v != p):
        raise BadHypothesis("lists must be size 3 everywhere and size 1 at p")
    for u, v in G.edges():
        if len(L[u] & L[v]) > 1:
            raise BadHypothesis("not a (*,1) assignment")
    prime, reasons = is_prime_structural(G, p)
    return {"prime": prime, "reasons": reasons}


# -- audit ------------------------------------------------------------------------------


@dataclass
class AuditReport:
    p: int
    totals: dict
    conserved: bool
    config_matches: list
    vertex_rows: list
    face_rows: list
    cluster_rows: list
    failures: list
    rule_overlaps: list
    config_free: bool
    all_claims_hold: bool
    ledger: list
    rules_skipped: str = ""

    @property
    def consistent(self):
        """A report must exhibit a configuration or a claim violation."""
        return (not self.config_free) or (not self.all_claims_hold)

    def to_dict(self):
        return {
            "p": self.p,
            "totals": {k: str(v) for k, v in self.totals.items()},
            "conserved": self.conserved,
            "config_matches": [{"config": m.config, "roles": dict(m.roles),
                                "faces": list(m.faces)} for m in self.config_matches],
            "vertex_rows": self.vertex_rows,
            "face_rows": self.face_rows,
            "cluster_rows": self.cluster_rows,
            "failures": self.failures,
            "rule_overlaps": self.rule_overlaps,
            "config_free": self.config_free,
            "all_claims_hold": self.all_claims_hold,
            "consistent": self.consistent,
            "rules_skipped": self.rules_skipped,
            "ledger": [{"source": list(t.source), "sink": list(t.sink),
                        "amount": str(t.amount), "rule": t.rule} for t in self.ledger],
        }


def _ball(G, verts, radius=3):
    seen = set(verts)
    frontier = set(verts)
    for _ in range(radius):
        nxt = set()
        for v in frontier:
            nxt.update(G.adj[v])
        nxt -= seen
        seen |= nxt
        frontier = nxt
    return seen


def audit(G, p):
    """Run both discharging phases and evaluate every claim of the argument.

    On configuration-free inputs all claims must hold, which contradicts the
    conserved total of -6; real inputs therefore always exhibit a
    configuration or a claim failure, and the report records which.
    """
    st0 = initial_charges(G, p)
    fc = classify_faces(G, p)
    rules_skipped = ""
    try:
        check_rule_preconditions(G, p)
    except PreconditionViolated as exc:
        rules_skipped = str(exc)
    if rules_skipped:
        st2 = st0
        overlaps = []
        totals = {"initial": st0.total()}
    else:
        st1, fc = apply_vertex_rules(G, p, st0, fc)
        st2, overlaps = apply_face_rules(G, st1, fc)
        totals = {"initial": st0.total(), "after_vertex_rules": st1.total(),
                  "after_face_rules": st2.total()}
    conserved = all(t == Fraction(-6) for t in totals.values())
    matches = find_configurations(G, p, fc)

    failures = []

    def near(verts):
        ball = _ball(G, verts)
        return [f"{m.config}:{m.vertices()}" for m in matches
                if set(m.vertices()) & ball]

    vertex_rows = []
    for v in range(G.n):
        ok = st2.vertex[v] >= 0
        vertex_rows.append({"vertex": v, "degree": G.degree(v),
                            "mu_star": str(st2.vertex[v]), "ok": ok})
        if not ok:
            failures.append({"claim": "vertex", "element": v,
                             "mu_star": str(st2.vertex[v]), "nearby": near({v})})

    face_rows = []
    for f in G.faces:
        kind = ("large" if f.id in fc.large else
                "special4" if f.id in fc.special4 else
                "normal4" if f.id in fc.normal4 else
                "three" if f.id in fc.three else "other")
        claimed = kind in ("large", "special4", "normal4")
        ok = st2.face[f.id] >= 0 if claimed else None
        row = {"face": f.id, "length": f.length, "kind": kind,
               "mu_star": str(st2.face[f.id]), "ok": ok}
        if kind == "normal4":
            row["high_count"] = sum(1 for v in f.vertices() if is_high(G, v))
            row["received"] = _receipt_breakdown(st2, f.id)
        face_rows.append(row)
        if claimed and not ok:
            failures.append({"claim": kind, "element": f.id,
                             "mu_star": str(st2.face[f.id]),
                             "nearby": near(_face_vertices(G, f.id))})

    cluster_rows = []
    for cl in fc.clusters:
        s = sum(st2.face[f] for f in cl.faces)
        ok = s >= 0
        verts = set()
        for f in cl.faces:
            verts |= _face_vertices(G, f)
        cluster_rows.append({"kind": cl.kind, "faces": list(cl.faces),
                             "sum_mu_star": str(s), "ok": ok})
        if not ok:
            failures.append({"claim": f"cluster-{cl.kind}", "element": list(cl.faces),
                             "sum_mu_star": str(s), "nearby": near(verts)})

    return AuditReport(
        p=p, totals=totals, conserved=conserved, config_matches=matches,
        vertex_rows=vertex_rows, face_rows=face_rows, cluster_rows=cluster_rows,
        failures=failures, rule_overlaps=overlaps,
        config_free=not matches, all_claims_hold=not failures,
        ledger=st2.ledger, rules_skipped=rules_skipped)


def _receipt_breakdown(st, fid):
    out = {"from_vertices": Fraction(0), "R5": Fraction(0),
           "R6": Fraction(0), "R7": Fraction(0)}
    for t in st.ledger:
        if t.sink != ("f", fid):
            continue
        rule = t.rule.split("[")[0]
        if rule in ("R5", "R6", "R7"):
            out[rule] += t.amount
        elif t.source[0] == "v":
            out["from_vertices"] += t.amount
    return {k: str(v) for k, v in out.items()}
