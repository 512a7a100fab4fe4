"""List assignments with separation constraints and their canonical enumeration.

An assignment is a tuple of frozensets of positive ints, one per vertex.
Canonical enumeration emits one representative per color-renaming orbit:
assignments are generated in "first-use" form (colors appear in increasing
order when scanning vertex blocks, each block sorted ascending) and kept only
if no color bijection produces a lexicographically smaller scan.

For (*,<=1) assignments the solver outcome depends only on the shared-color
structure: which edges share a color and which of those sharings are equal.
enumerate_shared_structures enumerates those structures directly (edge
color-class partitions closed under adjacency), which is exponentially
smaller than enumerating assignments and is what the choosability decision
uses for d <= 1.
"""

from __future__ import annotations

import base64
import itertools
import json
from dataclasses import dataclass

from .errors import BudgetExceeded, MissingList, SeparationViolated


def as_adj(G):
    """Neighbor sets from a PlaneGraph or a raw adjacency sequence."""
    if hasattr(G, "adj"):
        return G.adj
    return tuple(frozenset(nb) for nb in G)


def from_lists(lists):
    return tuple(frozenset(lst) for lst in lists)


def to_lists(L):
    return [sorted(s) for s in L]


def lists_to_json(L):
    return json.dumps({"lists": to_lists(L)})


def lists_from_json(text):
    return from_lists(json.loads(text)["lists"])


def edges_of(adj):
    return sorted({(min(u, v), max(u, v)) for u in range(len(adj)) for v in adj[u]})


# -- predicates ----------------------------------------------------------------


def is_separated(G, L, k, d):
    """True iff L is a valid (k,d)-list assignment for G."""
    adj = as_adj(G)
    if len(L) != len(adj) or any(not s for s in L):
        raise MissingList("assignment must give a nonempty list to every vertex")
    if any(len(s) < k for s in L):
        return False
    return all(len(L[u] & L[v]) <= d for u, v in edges_of(adj))


def is_star_one(G, L):
    """(*,1): nonempty lists, adjacent intersections at most one."""
    adj = as_adj(G)
    if len(L) != len(adj) or any(not s for s in L):
        raise MissingList("assignment must give a nonempty list to every vertex")
    return all(len(L[u] & L[v]) <= 1 for u, v in edges_of(adj))


def ld_classify(G, L):
    out = {}
    for v, s in enumerate(L):
        out[v] = f"L{len(s)}" if len(s) <= 3 else "L4+"
    return out


@dataclass(frozen=True)
class SharedEdgeColor:
    """c(e) per edge where the endpoint lists share exactly one color."""

    colors: dict

    def get(self, u, v):
        return self.colors.get((min(u, v), max(u, v)))


def shared_colors(G, L):
    adj = as_adj(G)
    out = {}
    for u, v in edges_of(adj):
        inter = L[u] & L[v]
        if len(inter) > 1:
            raise SeparationViolated(f"edge {u}-{v} shares {sorted(inter)}")
        if inter:
            out[(u, v)] = next(iter(inter))
    return SharedEdgeColor(out)


# -- canonical form -------------------------------------------------------------


def scan_of(L):
    return tuple(tuple(sorted(s)) for s in L)


def is_first_use(scan):
    nxt = 1
    for block in scan:
        for c in block:
            if c > nxt:
                return False
            if c == nxt:
                nxt += 1
    return True


def is_lex_min_orbit(scan):
    """Is this first-use scan lexicographically least under color bijections?"""
    nblocks = len(scan)

    def rec(i, mapping, used):
        # returns True if some extension beats the candidate strictly
        if i == nblocks:
            return False
        block = scan[i]
        mapped = sorted(mapping[c] for c in block if c in mapping)
        unmapped = [c for c in block if c not in mapping]
        free = []
        label = 1
        while len(free) < len(unmapped):
            if label not in used:
                free.append(label)
            label += 1
        image = tuple(sorted(mapped + free))
        if image < block:
            return True
        if image > block:
            return False
        for perm in itertools.permutations(free):
            m2 = dict(mapping)
            for c, lab in zip(unmapped, perm):
                m2[c] = lab
            if rec(i + 1, m2, used | set(perm)):
                return True
        return False

    return not rec(0, {}, frozenset())


def canonicalize(L):
    """The lex-min representative of L's color-renaming orbit."""
    scan = scan_of(L)
    colors = sorted({c for b in scan for c in b})
    best = None
    # small orbits only; used by tests and witness normalization
    for perm in itertools.permutations(range(1, len(colors) + 1)):
        mapping = dict(zip(colors, perm))
        cand = tuple(tuple(sorted(mapping[c] for c in b)) for b in scan)
        if best is None or cand < best:
            best = cand
    return from_lists(best)


# -- enumeration of (k,d) assignments ---------------------------------------------


def encode_cursor(L):
    return base64.b64encode(json.dumps(to_lists(L)).encode()).decode()


def decode_cursor(token):
    return from_lists(json.loads(base64.b64decode(token.encode()).decode()))


def _candidate_blocks(max_used, k, sizes, palette_bound):
    """Sorted tuples over 1..max_used plus a consecutive fresh tail, lex order."""
    out = []
    for size in sizes:
        top = min(max_used + size, palette_bound)
        for comb in itertools.combinations(range(1, top + 1), size):
            fresh = [c for c in comb if c > max_used]
            if fresh and fresh != list(range(max_used + 1, max_used + 1 + len(fresh))):
                continue
            out.append(comb)
    out.sort()
    return out


def enumerate_kd(G, k, d, exact_lists=True, max_list_size=None, palette_bound=None,
                 node_budget=50_000_000, start_after=None, shard=None):
    """Canonical (k,d)-list assignments, one per color-renaming orbit.

    Emission order is deterministic.  start_after resumes after a previously
    emitted representative (cursor token); shard=(i, m) keeps every m-th
    representative starting at index i.
    """
    adj = as_adj(G)
    n = len(adj)
    sizes = (k,) if exact_lists else tuple(range(k, (max_list_size or k + 1) + 1))
    if palette_bound is None:
        # every list can be made disjoint from all others within this palette
        palette_bound = max(max(sizes) * n, k)
    resume_scan = None
    if start_after is not None:
        resume_scan = scan_of(decode_cursor(start_after))
    state = {"nodes": 0, "emitted": 0, "resuming": resume_scan is not None, "seen_cursor": False}
    blocks = []

    def emit_ok():
        if shard is not None:
            i, m = shard
            return (state["emitted"] - 1) % m == i
        return True

    def rec(v, max_used):
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            raise BudgetExceeded("assignment enumeration budget exhausted",
                                 emitted=state["emitted"], nodes=state["nodes"],
                                 cursor=encode_cursor(from_lists(blocks[:v])) if blocks else None)
        if v == n:
            scan = tuple(blocks)
            if not is_lex_min_orbit(scan):
                return
            if state["resuming"]:
                if scan == resume_scan:
                    state["resuming"] = False
                    state["seen_cursor"] = True
                return
            state["emitted"] += 1
            if emit_ok():
                yield from_lists(scan)
            return
        for block in _candidate_blocks(max_used, k, sizes, palette_bound):
            bs = frozenset(block)
            ok = True
            for w in adj[v]:
                if w < v and len(bs & frozenset(blocks[w])) > d:
                    ok = False
                    break
            if not ok:
                continue
            blocks.append(block)
            if is_lex_min_orbit(tuple(blocks)):
                yield from rec(v + 1, max(max_used, max(block)))
            blocks.pop()

    yield from rec(0, 0)
    if resume_scan is not None and not state["seen_cursor"] and state["resuming"]:
        raise ValueError("cursor does not match any representative")


# -- shared-color structures (d <= 1) -------------------------------------------------


def enumerate_shared_structures(G, k, d=1, node_budget=50_000_000):
    """Edge color-class partitions governing (*,<=1) colorability.

    A structure maps each edge to None (disjoint endpoint lists) or a class id;
    classes are closed under adjacency (two same-class edges with adjacent
    endpoints force that edge into the class) and each vertex sees at most k
    distinct classes.  Yields tuples parallel to edges_of(G).
    """
    adj = as_adj(G)
    edges = edges_of(adj)
    m = len(edges)
    at_vertex = [[] for _ in adj]
    for i, (u, v) in enumerate(edges):
        at_vertex[u].append(i)
        at_vertex[v].append(i)
    state = {"nodes": 0}
    assign = [None] * m

    def classes_at(v):
        return {assign[i] for i in at_vertex[v] if assign[i] is not None}

    def closure_ok_full():
        by_class = {}
        for i, c in enumerate(assign):
            if c is not None:
                by_class.setdefault(c, []).append(i)
        eidx = {e: i for i, e in enumerate(edges)}
        for members in by_class.values():
            for a, b in itertools.combinations(members, 2):
                for x in edges[a]:
                    for y in edges[b]:
                        if x != y and y in adj[x]:
                            e = (min(x, y), max(x, y))
                            if assign[eidx[e]] != assign[a]:
                                return False
        return True

    def rec(i, nclasses):
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            raise BudgetExceeded("structure enumeration budget exhausted", nodes=state["nodes"])
        if i == m:
            if closure_ok_full():
                yield tuple(assign)
            return
        u, v = edges[i]
        options = [None]
        if d >= 1:
            options += list(range(nclasses)) + [nclasses]
        for opt in options:
            assign[i] = opt
            if opt is not None:
                if len(classes_at(u)) > k or len(classes_at(v)) > k:
                    assign[i] = None
                    continue
            yield from rec(i + 1, nclasses + (1 if opt == nclasses else 0))
            assign[i] = None

    yield from rec(0, 0)


def realize_structure(G, k, structure):
    """A concrete (k,<=1)-assignment realizing a shared-color structure."""
    adj = as_adj(G)
    edges = edges_of(adj)
    nclasses = max((c for c in structure if c is not None), default=-1) + 1
    lists = [set() for _ in adj]
    for i, c in enumerate(structure):
        if c is None:
            continue
        u, v = edges[i]
        lists[u].add(c + 1)
        lists[v].add(c + 1)
    nxt = nclasses + 1
    for v in range(len(adj)):
        while len(lists[v]) < k:
            lists[v].add(nxt)
            nxt += 1
    return from_lists(lists)
