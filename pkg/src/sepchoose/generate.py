"""Exhaustive corpora of plane graphs, and seeded random instances.

Two-connected plane graphs are enumerated at the rotation-system level (so
distinct embeddings of one abstract graph are distinct corpus members) by ear
insertion: every 2-connected plane graph is a cycle or arises from a smaller
one by adding an open ear inside a face, so growing ears from all cycle seeds
and deduplicating by canonical certificate enumerates each exactly once.
Cycle forbiddances are hereditary under subgraphs, which makes pruning during
growth exact.

The small abstract corpora (n <= 7) come from the networkx graph atlas.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx

from . import planegraph as pg


def _insert_ear(G, face, i, j, length):
    """New plane graph with an ear of `length` edges from walk position i to j."""
    walk = face.darts
    x = walk[i][0]
    y = walk[j][0]
    if x == y:
        return None
    if length == 1 and G.has_edge(x, y):
        return None
    rot = [list(nbrs) for nbrs in G.rotation]
    n = G.n
    inner = list(range(n, n + length - 1))
    chain = [x] + inner + [y]
    # corner of `face` at walk position p sits between the incoming dart's
    # tail and the outgoing dart's head in the rotation
    def corner_insert(pos, newnbr):
        v = walk[pos][0]
        w_in = walk[pos - 1][0]          # incoming dart (w_in, v)
        at = rot[v].index(w_in)
        rot[v].insert(at + 1, newnbr)

    corner_insert(i, chain[1])
    corner_insert(j, chain[-2])
    for t, v in enumerate(inner):
        rot.append([chain[1 + t - 1 + 1], chain[1 + t + 1]])
        rot[-1] = [chain[t], chain[t + 2]]
    return pg.PlaneGraph(rot)


def _path_counts(G, x, y, maxlen):
    """Which path lengths 1..maxlen occur between x and y in G."""
    found = set()
    stack = [(x, 0, {x})]
    while stack:
        u, d, seen = stack.pop()
        if d >= maxlen:
            continue
        for v in G.adj[u]:
            if v == y:
                found.add(d + 1)
                continue
            if v not in seen:
                stack.append((v, d + 1, seen | {v}))
    return found


def _ear_children(G, max_n, forbidden):
    # a new ear's internal vertices have degree 2, so every new cycle is an
    # old x-y path plus the whole ear; forbidding length k means forbidding
    # parent x-y paths of length k - ear_length
    out = []
    maxf = max(forbidden) if forbidden else 0
    for face in G.faces:
        L = face.length
        for i in range(L):
            for j in range(L):
                if i == j:
                    continue
                x, y = face.darts[i][0], face.darts[j][0]
                if x == y:
                    continue
                plens = _path_counts(G, x, y, maxf - 1) if forbidden else set()
                for length in range(1, max_n - G.n + 2):
                    if G.n + length - 1 > max_n:
                        break
                    if any(k - length in plens for k in forbidden):
                        continue
                    child = _insert_ear(G, face, i, j, length)
                    if child is None:
                        continue
                    out.append(child)
    return out


def plane_2connected(max_n, forbidden_cycles=(), max_graphs=None):
    """All 2-connected plane graphs with 3 <= n <= max_n, up to plane isomorphism.

    forbidden_cycles prunes hereditarily (no graph in the stream contains a
    cycle of a forbidden length).  Emission is deterministic: smaller n first.
    """
    forbidden = tuple(sorted(forbidden_cycles))
    seen = set()
    frontier = []
    emitted = 0
    for k in range(3, max_n + 1):
        if k in forbidden:
            continue
        C = pg.PlaneGraph([[(i - 1) % k, (i + 1) % k] for i in range(k)])
        cert = C.canonical_certificate()
        if cert not in seen:
            seen.add(cert)
            frontier.append(C)
    queue = list(frontier)
    for G in queue:
        yield G
        emitted += 1
        if max_graphs is not None and emitted >= max_graphs:
            return
    qi = 0
    while qi < len(queue):
        G = queue[qi]
        qi += 1
        for child in _ear_children(G, max_n, forbidden):
            cert = child.canonical_certificate()
            if cert in seen:
                continue
            seen.add(cert)
            queue.append(child)
            yield child
            emitted += 1
            if max_graphs is not None and emitted >= max_graphs:
                return


def atlas_graphs(max_n=7, connected=True, planar=True, forbidden_cycles=(), min_n=1):
    """Abstract graphs from the networkx atlas, filtered."""
    out = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n < min_n or n > max_n:
            continue
        if connected and (n == 0 or not nx.is_connected(g)):
            continue
        if planar and not nx.check_planarity(g, counterexample=False)[0]:
            continue
        if forbidden_cycles and _has_forbidden_cycle(g, forbidden_cycles):
            continue
        out.append(g)
    return out


def _has_forbidden_cycle(g, lengths):
    adj = tuple(frozenset(g.neighbors(v)) for v in range(g.number_of_nodes()))

    class _A:
        pass

    A = _A()
    A.adj = adj
    A.n = len(adj)
    return any(pg.has_cycle_of_length(A, k) for k in lengths)


def nx_to_adj(g):
    mapping = {v: i for i, v in enumerate(sorted(g.nodes()))}
    adj = [set() for _ in mapping]
    for u, v in g.edges():
        adj[mapping[u]].add(mapping[v])
        adj[mapping[v]].add(mapping[u])
    return tuple(frozenset(s) for s in adj)


def embed(g):
    """One plane embedding of an abstract planar graph, as a PlaneGraph."""
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise ValueError("graph is not planar")
    nodes = sorted(g.nodes())
    mapping = {v: i for i, v in enumerate(nodes)}
    rotation = []
    for v in nodes:
        nbrs = list(emb.neighbors_cw_order(v)) if g.degree(v) else []
        rotation.append([mapping[w] for w in nbrs])
    G = pg.PlaneGraph(rotation)
    if not G.euler_genus_zero() and nx.is_connected(g):
        raise AssertionError("networkx embedding was not genus zero")
    return G


# -- seeded random admissible instances (constructive-module corpora) -----------


def random_admissible_instance(G, rng, variant, allow_empty_path=True):
    """A random admissible PrecoloredInstance on plane graph G, or None."""
    from .constructive import PrecoloredInstance, violations

    walk = G.outer_face.vertices()
    maxp = 2 if variant == "trianglefree" else 3
    sizes = [0] if allow_empty_path else []
    sizes += list(range(1, maxp + 1))
    for _ in range(40):
        k = rng.choice(sizes)
        if k == 0:
            P = ()
        elif len(set(walk)) != len(walk):
            P = (rng.choice(walk),) if k == 1 else None
        else:
            start = rng.randrange(len(walk))
            P = tuple(walk[(start + i) % len(walk)] for i in range(k))
        if P is None:
            continue
        L = random_star_one_lists(G, rng, walk, set(P),
                                  c4free_variant=(variant == "c4free"))
        if L is None:
            continue
        inst = PrecoloredInstance(G, L, P)
        if not violations(G, L, P, variant):
            return inst
    return None


def random_star_one_lists(G, rng, outer, P, c4free_variant=False, max_tries=4000):
    """A (*,1) assignment satisfying the precolored-path theorem hypotheses.

    Returns a tuple of frozensets or None if rejection sampling fails.
    """
    n = G.n
    outer_set = set(outer)
    for _ in range(max_tries):
        sizes = {}
        for v in range(n):
            if v in P:
                sizes[v] = 1
            elif v in outer_set:
                sizes[v] = rng.choice((2, 3))
            else:
                sizes[v] = 3
        # no two size-2 vertices adjacent
        ok = all(not (sizes[u] == 2 and sizes[v] == 2) for u, v in G.edges())
        if not ok:
            continue
        if c4free_variant:
            # no size-2 vertex adjacent to two P-vertices
            if any(sizes[v] == 2 and sum(1 for w in G.adj[v] if w in P) >= 2
                   for v in range(n)):
                continue
        lists = _random_fill_star_one(G, rng, sizes)
        if lists is None:
            continue
        # P induced subgraph must be L-colorable (forced colors proper)
        okP = True
        for u in P:
            for v in P:
                if u < v and G.has_edge(u, v) and lists[u] == lists[v]:
                    okP = False
        if okP:
            return lists
    return None


def _random_fill_star_one(G, rng, sizes, palette_factor=3):
    n = G.n
    palette = list(range(1, palette_factor * n + 1))
    lists = [set() for _ in range(n)]
    order = sorted(range(n), key=lambda v: -sizes[v])
    for v in order:
        for _ in range(60):
            cand = set(rng.sample(palette, sizes[v]))
            if all(len(cand & lists[w]) <= 1 for w in G.adj[v]):
                lists[v] = cand
                break
        else:
            return None
    return tuple(frozenset(s) for s in lists)
