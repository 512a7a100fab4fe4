"""Ground-truth L-coloring by deterministic backtracking, and the
(k,d)-choosability decision procedure built on top of it.

Every other module is validated against l_color.  Search order is fixed
(smallest remaining list first, ties by vertex index, values ascending) so
witnesses are reproducible across runs and machines.  Budgets are node
counts, never wall clock.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import lists as li
from .errors import BudgetExceeded, PinnedConflict


@dataclass(frozen=True)
class Coloring:
    colors: tuple              # color or None per vertex
    complete: bool

    def as_dict(self):
        return {v: c for v, c in enumerate(self.colors) if c is not None}


def verify_coloring(G, L, phi):
    """True iff phi is total, list-respecting, and proper."""
    adj = li.as_adj(G)
    colors = phi.colors if isinstance(phi, Coloring) else tuple(phi)
    if len(colors) != len(adj) or any(c is None for c in colors):
        return False
    if any(colors[v] not in L[v] for v in range(len(adj))):
        return False
    return all(colors[u] != colors[v] for u, v in li.edges_of(adj))


def l_color(G, L, pinned=None, node_budget=10_000_000):
    """A proper L-coloring extending `pinned`, or None after exhaustive search."""
    res, _ = l_color_counted(G, L, pinned=pinned, node_budget=node_budget)
    return res


def l_color_counted(G, L, pinned=None, node_budget=10_000_000):
    adj = li.as_adj(G)
    n = len(adj)
    pinned = dict(pinned or {})
    for v, c in pinned.items():
        if c not in L[v]:
            raise PinnedConflict(f"pinned color {c} not in list of vertex {v}")
        for w in adj[v]:
            if pinned.get(w) == c:
                raise PinnedConflict(f"pinned vertices {v},{w} share color {c}")

    remaining = []
    for v in range(n):
        if v in pinned:
            remaining.append([pinned[v]])
        else:
            cand = sorted(L[v])
            for w in adj[v]:
                if w in pinned and pinned[w] in L[v]:
                    cand = [c for c in cand if c != pinned[w]]
            remaining.append(cand)

    colors = [None] * n
    nodes = 0

    def pick():
        best = None
        for v in range(n):
            if colors[v] is None:
                key = (len(remaining[v]), v)
                if best is None or key < best[0]:
                    best = (key, v)
        return best[1] if best else None

    def assign(v, c):
        undo = []
        colors[v] = c
        for w in adj[v]:
            if colors[w] is None and c in remaining[w]:
                remaining[w].remove(c)
                undo.append(w)
        return undo

    def unassign(v, c, undo):
        colors[v] = None
        for w in undo:
            remaining[w].append(c)
            remaining[w].sort()

    def bt():
        nonlocal nodes
        v = pick()
        if v is None:
            return True
        for c in list(remaining[v]):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("coloring search budget exhausted", nodes=nodes)
            undo = assign(v, c)
            if all(remaining[w] for w in range(n) if colors[w] is None):
                if bt():
                    return True
            unassign(v, c, undo)
        return False

    if any(not r for r in remaining):
        return None, 0
    if bt():
        return Coloring(tuple(colors), True), nodes
    return None, nodes


# -- choosability ------------------------------------------------------------------


@dataclass
class ChoosabilityVerdict:
    status: str                       # choosable | not_choosable | unknown
    witness: Optional[tuple] = None   # a ListAssignment
    nodes_explored: int = 0
    assignments_checked: int = 0
    cursor: Optional[str] = None
    method: str = "assignments"

    def to_dict(self):
        out = {"status": self.status, "nodes_explored": self.nodes_explored,
               "assignments_checked": self.assignments_checked, "method": self.method}
        if self.witness is not None:
            out["witness"] = li.to_lists(self.witness)
        if self.cursor is not None:
            out["cursor"] = self.cursor
        return out


def is_kd_choosable(G, k, d, method="auto", enum_budget=50_000_000,
                    solve_budget=10_000_000, cursor=None):
    """Decide (k,d)-choosability by exhausting canonical list assignments.

    method 'structures' (default for d <= 1) exhausts shared-color structures,
    which decide colorability of every (k,<=1) assignment; 'assignments'
    iterates enumerate_kd representatives.  The first uncolorable case is
    returned as a concrete witness assignment.
    """
    if method == "auto":
        method = "structures" if d <= 1 else "assignments"
    total_nodes = 0
    checked = 0
    if method == "structures":
        if d > 1:
            raise ValueError("structure enumeration only decides d <= 1")
        try:
            for structure in li.enumerate_shared_structures(G, k, d=d, node_budget=enum_budget):
                L = li.realize_structure(G, k, structure)
                checked += 1
                res, nodes = l_color_counted(G, L, node_budget=solve_budget)
                total_nodes += nodes
                if res is None:
                    return ChoosabilityVerdict("not_choosable", witness=L,
                                               nodes_explored=total_nodes,
                                               assignments_checked=checked, method=method)
        except BudgetExceeded as exc:
            return ChoosabilityVerdict("unknown", nodes_explored=total_nodes + exc.nodes,
                                       assignments_checked=checked, method=method)
        return ChoosabilityVerdict("choosable", nodes_explored=total_nodes,
                                   assignments_checked=checked, method=method)

    last = None
    try:
        for L in li.enumerate_kd(G, k, d, node_budget=enum_budget, start_after=cursor):
            checked += 1
            last = L
            res, nodes = l_color_counted(G, L, node_budget=solve_budget)
            total_nodes += nodes
            if res is None:
                return ChoosabilityVerdict("not_choosable", witness=L,
                                           nodes_explored=total_nodes,
                                           assignments_checked=checked, method=method)
    except BudgetExceeded:
        return ChoosabilityVerdict(
            "unknown", nodes_explored=total_nodes, assignments_checked=checked,
            cursor=li.encode_cursor(last) if last is not None else cursor, method=method)
    return ChoosabilityVerdict("choosable", nodes_explored=total_nodes,
                               assignments_checked=checked, method=method)
