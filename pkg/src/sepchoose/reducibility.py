"""Reducible-configuration checking against the X/R contract, and the glue
construction deriving compound configurations from simple ones.

The checker verifies, for a pattern C with sets X and R: for every minimal
local list structure and every coloring phi of C minus X (with arbitrary
forbidden colors on external slots), some ψ extends phi, recoloring only
X union R under the contract's intersection bounds.

Local list structures are enumerated up to color renaming as edge color-class
partitions: every internal edge carries exactly one shared color (minimality),
classes are closed under adjacency (two same-class edges whose endpoints are
adjacent force that edge into the class, else the endpoints would share two
colors), and each vertex sees at most |L| distinct classes.  Soundness of the
quotient: every constraint in the contract - properness of phi and psi, slot
forbiddances, and the |L(x) ∩ ψ(N(x))| bounds - tests a color only for
equality with a shared edge color of the vertex in question, so colors
private to a vertex are interchangeable and colors of distinct classes never
interact.  Completeness: any closure-valid partition is realized by assigning
one fresh color per class plus fresh privates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .errors import BudgetExceeded, VertexNotEligible

ALL_PRUNES = ("vcolors", "trail", "lowtriangle")


@dataclass(frozen=True)
class ConfigPattern:
    name: str
    nverts: int
    edges: tuple                  # sorted (u, v) pairs
    faces: tuple                  # 3-faces as sorted triples
    degree: tuple                 # per-vertex exact host degree or None
    X: frozenset
    R: frozenset
    p_vertex: int = -1            # vertex with a size-1 list, or -1

    def adj(self):
        out = [set() for _ in range(self.nverts)]
        for u, v in self.edges:
            out[u].add(v)
            out[v].add(u)
        return out

    def internal_degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def slots(self, v):
        if self.degree[v] is None:
            return None
        return self.degree[v] - self.internal_degree(v)

    def list_size(self, v):
        return 1 if v == self.p_vertex else 3

    def validate(self):
        problems = []
        if not self.X:
            problems.append("X empty")
        if self.p_vertex in self.X | self.R:
            problems.append("p in X|R")
        for v in self.X | self.R:
            s = self.slots(v)
            if s is None:
                problems.append(f"vertex {v} in X|R lacks a declared degree")
            elif s < 0:
                problems.append(f"vertex {v} has more pattern edges than degree")
            elif s > 1:
                problems.append(f"vertex {v} in X|R has {s} external neighbors")
        for v in range(self.nverts):
            if self.degree[v] is not None and self.slots(v) < 0:
                problems.append(f"vertex {v} over-saturated")
        return problems


# -- structure enumeration ------------------------------------------------------


def _closure_violation(pat, assign, adjacency):
    edges = pat.edges
    by_class = {}
    for i, c in enumerate(assign):
        by_class.setdefault(c, []).append(i)
    eidx = {e: i for i, e in enumerate(edges)}
    for members in by_class.values():
        for a, b in itertools.combinations(members, 2):
            for x in edges[a]:
                for y in edges[b]:
                    if x != y and y in adjacency[x]:
                        e = (min(x, y), max(x, y))
                        if assign[eidx[e]] != assign[a]:
                            return True
    return False


def _prune_vcolors(pat, classes_at):
    for v in range(pat.nverts):
        s = pat.slots(v)
        if s is None:
            continue
        privates = pat.list_size(v) - len(classes_at[v])
        if privates > s:
            return True
    return False


def _prune_trail(pat, assign, adjacency):
    eidx = {e: i for i, e in enumerate(pat.edges)}

    def cls(a, b):
        return assign[eidx[(min(a, b), max(a, b))]]

    for u in range(pat.nverts):
        for v in adjacency[u]:
            for w in adjacency[v]:
                if w == u:
                    continue
                for x in adjacency[w]:
                    if x == v:
                        continue
                    e1, e2, e3 = cls(u, v), cls(v, w), cls(w, x)
                    if {u, v} == {w, x}:
                        continue
                    if e1 == e3 != e2:
                        return True
    return False


def _prune_lowtriangle(pat, assign):
    eidx = {e: i for i, e in enumerate(pat.edges)}
    for (a, b, c) in pat.faces:
        if not any(pat.degree[v] == 3 for v in (a, b, c)):
            continue
        cls = [assign[eidx[(min(x, y), max(x, y))]]
               for x, y in ((a, b), (b, c), (a, c))]
        if len(set(cls)) < 3:
            return True
    return False


def enumerate_structures(pat, prunes=ALL_PRUNES, node_budget=20_000_000):
    """Edge color-class partitions surviving the minimality prunes."""
    edges = pat.edges
    m = len(edges)
    adjacency = pat.adj()
    at_vertex = [[] for _ in range(pat.nverts)]
    for i, (u, v) in enumerate(edges):
        at_vertex[u].append(i)
        at_vertex[v].append(i)
    assign = [None] * m
    nodes = [0]

    def classes_at(v):
        return {assign[i] for i in at_vertex[v] if assign[i] is not None}

    def rec(i, nclasses):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise BudgetExceeded("structure enumeration budget exhausted", nodes=nodes[0])
        if i == m:
            cls_at = [classes_at(v) for v in range(pat.nverts)]
            if _closure_violation(pat, assign, adjacency):
                return
            if "vcolors" in prunes and _prune_vcolors(pat, cls_at):
                return
            if "trail" in prunes and _prune_trail(pat, assign, adjacency):
                return
            if "lowtriangle" in prunes and _prune_lowtriangle(pat, assign):
                return
            yield tuple(assign)
            return
        u, v = edges[i]
        for c in range(nclasses + 1):
            assign[i] = c
            if len(classes_at(u)) <= pat.list_size(u) and len(classes_at(v)) <= pat.list_size(v):
                yield from rec(i + 1, max(nclasses, c + 1))
            assign[i] = None

    yield from rec(0, 0)


# -- the reducibility check -------------------------------------------------------


@dataclass
class ReducibilityResult:
    name: str
    reducible: bool
    structures_checked: int
    cases_checked: int
    counterexample: dict = None

    def to_dict(self):
        out = {"name": self.name, "reducible": self.reducible,
               "structures_checked": self.structures_checked,
               "cases_checked": self.cases_checked}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def _vertex_colors(pat, classes_at, v):
    """Abstract colors of L(v): ('c', class) and ('p', v, i)."""
    cols = [("c", c) for c in sorted(classes_at[v])]
    for i in range(pat.list_size(v) - len(cols)):
        cols.append(("p", v, i))
    return cols


def check_reducible(pat, prunes=ALL_PRUNES, node_budget=20_000_000):
    """Run the X/R contract over all structures, slots, and colorings."""
    edges = pat.edges
    eidx = {e: i for i, e in enumerate(edges)}
    adjacency = pat.adj()
    XR = sorted(pat.X | pat.R)
    pinned = [v for v in range(pat.nverts) if v not in pat.X]
    structures = 0
    cases = 0

    def edge_class(assign, a, b):
        return assign[eidx[(min(a, b), max(a, b))]]

    for assign in enumerate_structures(pat, prunes=prunes, node_budget=node_budget):
        structures += 1
        classes_at = [set() for _ in range(pat.nverts)]
        for i, (u, v) in enumerate(edges):
            classes_at[u].add(assign[i])
            classes_at[v].add(assign[i])
        colors = {v: _vertex_colors(pat, classes_at, v) for v in range(pat.nverts)}

        # slot value domains
        slot_doms = []
        slot_verts = []
        for v in XR:
            s = pat.slots(v)
            s = 0 if s is None else s
            for _ in range(s):
                dom = [c for c in colors[v]]
                if v in pat.R:
                    dom = dom + [None]
                slot_doms.append(dom)
                slot_verts.append(v)

        memo = {}
        for slot_combo in itertools.product(*slot_doms):
            slots_of = {}
            for v, val in zip(slot_verts, slot_combo):
                slots_of.setdefault(v, []).append(val)

            def feasible_psi(phi):
                # ψ agrees with phi off X∪R; DFS assigns all of X∪R
                order = XR
                psi = {v: phi[v] for v in phi if v not in pat.R}

                def ok_vertex(v, val):
                    for w in adjacency[v]:
                        if w in psi and psi[w] == val:
                            return False
                    for s in slots_of.get(v, ()):
                        if s is not None and s == val:
                            return False
                    return True

                def bullet_ok(r, val):
                    if r in pat.X or val == phi.get(r):
                        return True
                    shared = set()
                    for w in adjacency[r]:
                        wv = psi.get(w)
                        if wv is not None and wv == ("c", edge_class(assign, r, w)):
                            shared.add(wv)
                    bound = 2 if (pat.slots(r) or 0) == 0 else 1
                    return len(shared) <= bound

                def dfs(i):
                    if i == len(order):
                        # bullets need the full ψ; re-check recolored R vertices
                        for r in pat.R:
                            if not bullet_ok(r, psi[r]):
                                return False
                        return True
                    v = order[i]
                    base = colors[v]
                    cand = base
                    if v in pat.R:
                        keep = phi[v]
                        cand = [keep] + [c for c in base if c != keep]
                    for val in cand:
                        if not ok_vertex(v, val):
                            continue
                        psi[v] = val
                        if dfs(i + 1):
                            return True
                        del psi[v]
                    return False

                return dfs(0)

            # enumerate phi over V - X with properness and slot avoidance
            porder = pinned
            phi = {}

            def phi_dfs(i):
                nonlocal cases
                if i == len(porder):
                    cases += 1
                    key = (slot_combo,
                           tuple(phi[v] for v in porder))
                    got = memo.get(key)
                    if got is None:
                        got = feasible_psi(phi)
                        memo[key] = got
                    if not got:
                        return dict(phi)
                    return None
                v = porder[i]
                for val in colors[v]:
                    bad = False
                    for w in adjacency[v]:
                        if w in phi and phi[w] == val:
                            bad = True
                            break
                    if not bad and v in slots_of:
                        if any(s is not None and s == val for s in slots_of[v]):
                            bad = True
                    if bad:
                        continue
                    phi[v] = val
                    res = phi_dfs(i + 1)
                    if res is not None:
                        return res
                    del phi[v]
                return None

            bad_phi = phi_dfs(0)
            if bad_phi is not None:
                cx = _realize_counterexample(pat, assign, slots_of, bad_phi)
                return ReducibilityResult(pat.name, False, structures, cases, cx)
    return ReducibilityResult(pat.name, True, structures, cases)


def _realize_counterexample(pat, assign, slots_of, phi):
    nclasses = max(assign) + 1
    color_of = {}
    nxt = nclasses + 1

    def concrete(val):
        nonlocal nxt
        if val is None:
            return None
        if val not in color_of:
            if val[0] == "c":
                color_of[val] = val[1] + 1
            else:
                color_of[val] = nxt
                nxt += 1
        return color_of[val]

    lists = []
    for v in range(pat.nverts):
        cls = sorted({assign[i] for i, e in enumerate(pat.edges) if v in e})
        cols = [c + 1 for c in cls]
        i = 0
        while len(cols) < pat.list_size(v):
            cols.append(concrete(("p", v, i)))
            i += 1
        lists.append(sorted(cols))
    return {
        "lists": lists,
        "shared": {f"{u}-{v}": assign[i] + 1 for i, (u, v) in enumerate(pat.edges)},
        "slot_colors": {str(v): [concrete(s) for s in vals]
                        for v, vals in slots_of.items()},
        "phi": {str(v): concrete(val) for v, val in phi.items()},
    }


# -- glue -----------------------------------------------------------------------------


def glue(pat, v):
    """Replace v's unique external edge by a pendant bad 3-face v-x-y.

    x keeps a free degree (at least one external neighbor); y is low with one
    external neighbor.  X' = X, R' = R ∪ {y}; v's host degree grows by one.
    """
    s = pat.slots(v)
    if s is None or s != 1:
        raise VertexNotEligible(f"vertex {v} has no unique external neighbor")
    x = pat.nverts
    y = pat.nverts + 1
    degree = list(pat.degree) + [None, 3]
    degree[v] = pat.degree[v] + 1
    return ConfigPattern(
        name=f"glue({pat.name},{v})",
        nverts=pat.nverts + 2,
        edges=tuple(sorted(pat.edges + ((v, x), (v, y), (x, y)))),
        faces=tuple(sorted(pat.faces + (tuple(sorted((v, x, y))),))),
        degree=tuple(degree),
        X=pat.X,
        R=pat.R | {y},
        p_vertex=pat.p_vertex,
    )


def patterns_isomorphic(a, b):
    """Isomorphism respecting edges, 3-faces, X, R, and degrees on X ∪ R."""
    if a.nverts != b.nverts or len(a.edges) != len(b.edges):
        return False
    if len(a.X) != len(b.X) or len(a.R) != len(b.R) or len(a.faces) != len(b.faces):
        return False

    def key(pat, v):
        return (pat.internal_degree(v), v in pat.X, v in pat.R,
                pat.degree[v] if v in pat.X | pat.R else None)

    akeys = {v: key(a, v) for v in range(a.nverts)}
    bkeys = {v: key(b, v) for v in range(b.nverts)}
    if sorted(akeys.values()) != sorted(bkeys.values()):
        return False
    aadj = a.adj()
    badj = b.adj()
    afaces = set(a.faces)
    bfaces = set(b.faces)
    mapping = {}
    used = set()

    def extend(i):
        if i == a.nverts:
            for (u, v) in a.edges:
                if (min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) not in set(b.edges):
                    return False
            for f in afaces:
                if tuple(sorted(mapping[x] for x in f)) not in bfaces:
                    return False
            return True
        u = i
        for v in range(b.nverts):
            if v in used or akeys[u] != bkeys[v]:
                continue
            ok = True
            for w in aadj[u]:
                if w < i and mapping[w] not in badj[v]:
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = v
            used.add(v)
            if extend(i + 1):
                return True
            del mapping[u]
            used.remove(v)
        return False

    return extend(0)


# -- the catalog ------------------------------------------------------------------------


def _simple_patterns():
    C2 = ConfigPattern("C2", 4, ((0, 1), (0, 3), (1, 2), (2, 3)), (),
                       (3, 3, 3, 3), frozenset({0, 1, 2, 3}), frozenset())
    C3 = ConfigPattern("C3", 3, ((0, 1), (0, 2), (1, 2)), ((0, 1, 2),),
                       (None, 3, 3), frozenset({1, 2}), frozenset())
    # diamond on shared edge 0-1 with tips 2, 3
    dia_edges = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))
    dia_faces = ((0, 1, 2), (0, 1, 3))
    C4 = ConfigPattern("C4", 4, dia_edges, dia_faces, (4, 4, 3, 3),
                       frozenset({0, 1, 2, 3}), frozenset())
    C5 = ConfigPattern("C5", 4, dia_edges, dia_faces, (3, 4, None, None),
                       frozenset({0}), frozenset({1}))
    k4_edges = tuple(sorted((a, b) for a, b in itertools.combinations(range(4), 2)))
    k4_faces = ((0, 1, 2), (0, 1, 3), (0, 2, 3))
    C6 = ConfigPattern("C6", 4, k4_edges, k4_faces, (3, 4, None, None),
                       frozenset({0}), frozenset({1}))
    C6_low = replace(C6, name="C6deg3", degree=(3, 3, None, None))
    return {"C2": C2, "C3": C3, "C4": C4, "C5": C5, "C6": C6, "C6deg3": C6_low}


def build_catalog():
    """All X/R patterns: simples as defined, compounds built by glue."""
    pats = _simple_patterns()
    derive = {
        "C7": ("C6", None), "C8": ("C4", 1), "C9": ("C5", 1), "C10": ("C4", 2),
        "C11": ("C2", 0), "C12": ("C3", 2), "C13": ("C12", None),
        "C14": ("C8", 3), "C15": ("C10", None), "C16": ("C15", 0),
    }
    # glue targets with explicit vertex where needed; None means the pendant
    # low vertex added by the previous glue (or C6's R vertex)
    explicit = {"C7": ("C6", 1), "C13": ("C12", 4), "C15": ("C10", 5)}
    for name in ("C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16"):
        src, v = derive[name]
        if name in explicit:
            src, v = explicit[name]
        pat = replace(glue(pats[src], v), name=name)
        pats[name] = pat
    return pats


PRINTED_ARROWS = (
    ("C6", "C7"), ("C4", "C8"), ("C5", "C9"), ("C4", "C10"), ("C2", "C11"),
    ("C3", "C12"), ("C12", "C13"), ("C8", "C14"), ("C8", "C15"), ("C15", "C16"),
)


def check_arrow(pats, src, dst):
    """Does some glue of src yield dst?  Returns the gluing vertex or None."""
    source = pats[src]
    target = pats[dst]
    for v in range(source.nverts):
        if source.slots(v) != 1:
            continue
        try:
            cand = glue(source, v)
        except VertexNotEligible:
            continue
        if patterns_isomorphic(cand, target):
            return v
    return None


def check_c1():
    """Dedicated check: a 3-face at p forces one shared color on all edges,
    and dropping the u-v edge never costs a coloring."""
    pat = ConfigPattern("C1", 3, ((0, 1), (0, 2), (1, 2)), ((0, 1, 2),),
                        (None, None, None), frozenset({1}), frozenset(),
                        p_vertex=0)
    structures = list(enumerate_structures(pat, prunes=()))
    all_one_class = all(len(set(s)) == 1 for s in structures)
    # with every edge sharing p's color c, any proper coloring of G - uv has
    # phi(u) != c != phi(v); u and v share only c, so phi(u) != phi(v)
    extension_ok = True
    for s in structures:
        classes_at = [set(s)] * 3
        for cu in _vertex_colors(pat, classes_at, 1):
            for cv in _vertex_colors(pat, classes_at, 2):
                cc = ("c", s[0])
                if cu == cc or cv == cc:
                    continue
                if cu == cv:
                    extension_ok = False
    return {"structures": len(structures), "all_edges_share_p_color": all_one_class,
            "recoloring_valid": extension_ok,
            "ok": bool(structures) and all_one_class and extension_ok}


def verify_catalog(node_budget=20_000_000, prune_analysis=("C2", "C3", "C4"),
                   include_direct_compounds=True):
    """Direct reducibility checks, derivation arrows, and prune necessity."""
    pats = build_catalog()
    report = {"direct": {}, "arrows": [], "c1": check_c1(), "prune_needs": {}}
    direct = ["C2", "C3", "C4", "C5", "C6", "C6deg3"]
    if include_direct_compounds:
        direct += ["C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16"]
    for name in direct:
        res = check_reducible(pats[name], node_budget=node_budget)
        report["direct"][name] = res.to_dict()
    for src, dst in PRINTED_ARROWS:
        v = check_arrow(pats, src, dst)
        row = {"printed": f"{src}->{dst}", "ok": v is not None, "glued_at": v}
        if v is None:
            for alt in pats:
                if alt == dst:
                    continue
                w = check_arrow(pats, alt, dst)
                if w is not None:
                    row["correction"] = f"{alt}->{dst} (glued at {w})"
                    break
        report["arrows"].append(row)
    for name in prune_analysis:
        needs = []
        for drop in ALL_PRUNES:
            sub = tuple(x for x in ALL_PRUNES if x != drop)
            res = check_reducible(pats[name], prunes=sub, node_budget=node_budget)
            if not res.reducible:
                needs.append(drop)
        report["prune_needs"][name] = needs
    return report
