"""Junction trees: structure, running-intersection validation and construction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import ModelError
from .tables import Scope, intersect_scope, make_scope

Edge = Tuple[int, int]


def _norm_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class JunctionTree:
    """Tree whose nodes are labelled by variable scopes.

    Construction only normalizes the inputs; use :func:`validate` to check
    the tree and running-intersection properties.
    """

    nodes: Tuple[Scope, ...]
    edges: Tuple[Edge, ...] = ()
    _adj: Dict[int, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(make_scope(n) for n in self.nodes)
        edges = tuple(sorted({_norm_edge(int(i), int(j)) for i, j in self.edges}))
        adj: Dict[int, list] = {i: [] for i in range(len(nodes))}
        for i, j in edges:
            if not (0 <= i < len(nodes) and 0 <= j < len(nodes)) or i == j:
                raise ModelError(f"edge {(i, j)} is not between two distinct nodes")
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", {i: tuple(sorted(ns)) for i, ns in adj.items()})

    def __len__(self):
        return len(self.nodes)

    def neighbors(self, i: int) -> Tuple[int, ...]:
        if not 0 <= i < len(self.nodes):
            raise IndexError(f"node {i} out of range for a tree with {len(self.nodes)} nodes")
        return self._adj[i]

    def separator(self, i: int, j: int) -> Scope:
        return intersect_scope(self.nodes[i], self.nodes[j])

    @property
    def separators(self) -> Dict[Edge, Scope]:
        return {e: self.separator(*e) for e in self.edges}

    def leaves(self) -> List[int]:
        return [i for i in range(len(self.nodes)) if len(self._adj[i]) == 1]

    def variables(self) -> Scope:
        return tuple(sorted({v for n in self.nodes for v in n}))

    def path(self, i: int, j: int) -> List[int]:
        """Node indices on the unique path from ``i`` to ``j`` (inclusive)."""
        parent = {i: None}
        queue = deque([i])
        while queue:
            a = queue.popleft()
            if a == j:
                break
            for b in self._adj[a]:
                if b not in parent:
                    parent[b] = a
                    queue.append(b)
        if j not in parent:
            raise ModelError(f"nodes {i} and {j} are not connected")
        out = [j]
        while out[-1] != i:
            out.append(parent[out[-1]])
        return out[::-1]

    def covering_nodes(self, scope: Sequence[int]) -> List[int]:
        s = set(scope)
        return [i for i, n in enumerate(self.nodes) if s <= set(n)]


def neighbors(tree: JunctionTree, i: int) -> Tuple[int, ...]:
    return tree.neighbors(i)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str = ""
    variable: Optional[int] = None

    def __bool__(self):
        return self.ok


def validate(tree: JunctionTree) -> ValidationReport:
    """Check that ``tree`` is a tree and has the running-intersection property.

    Returns a report rather than raising; the report names the first
    offending variable when the running-intersection property fails.
    """
    n = len(tree.nodes)
    if n == 0:
        return ValidationReport(False, "junction tree has no nodes")
    if len(tree.edges) != n - 1:
        return ValidationReport(
            False, f"a tree on {n} nodes needs {n - 1} edges, got {len(tree.edges)} (cycle or forest)")
    seen = {0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b in tree.neighbors(a):
            if b not in seen:
                seen.add(b)
                queue.append(b)
    if len(seen) != n:
        return ValidationReport(False, f"edges do not connect all nodes (reached {len(seen)} of {n})")

    for u in tree.variables():
        holders = {i for i, s in enumerate(tree.nodes) if u in s}
        start = min(holders)
        reached = {start}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in tree.neighbors(a):
                if b in holders and b not in reached:
                    reached.add(b)
                    queue.append(b)
        if reached != holders:
            missing = sorted(holders - reached)
            return ValidationReport(
                False,
                f"running intersection violated for variable {u}: nodes {sorted(holders)} contain it "
                f"but node {missing[0]} is not connected to node {start} through them",
                variable=u,
            )
    return ValidationReport(True)


def _min_fill_order(variables: Sequence[int], adjacency: Dict[int, set]) -> List[Tuple[int, FrozenSet[int]]]:
    adj = {v: set(adjacency[v]) for v in variables}
    remaining = set(variables)
    cliques = []
    while remaining:
        def fill(v):
            ns = list(adj[v])
            return sum(1 for a, b in combinations(ns, 2) if b not in adj[a])

        v = min(remaining, key=lambda x: (fill(x), x))
        ns = adj[v]
        for a, b in combinations(sorted(ns), 2):
            adj[a].add(b)
            adj[b].add(a)
        cliques.append((v, frozenset(ns | {v})))
        for a in ns:
            adj[a].discard(v)
        del adj[v]
        remaining.discard(v)
    return cliques


def build(scopes: Sequence[Sequence[int]], n_variables: Optional[int] = None) -> Tuple[JunctionTree, List[int]]:
    """Build a junction tree covering ``scopes``.

    Min-fill triangulation of the interaction graph (ties to the lowest
    variable id), maximal elimination cliques in elimination order, then a
    maximum-weight spanning tree on separator size (Kruskal, ties to the
    lexicographically smallest node pair). Returns the tree and, for each
    input scope, the lowest-index node covering it.
    """
    scopes = [make_scope(s) for s in scopes]
    if not scopes:
        raise ModelError("need at least one scope to build a junction tree")
    variables = sorted({v for s in scopes for v in s})
    if n_variables is not None:
        unknown = [v for v in variables if v >= n_variables]
        if unknown:
            raise ModelError(f"scope references unknown variable {unknown[0]}")
        variables = list(range(n_variables))

    adjacency: Dict[int, set] = {v: set() for v in variables}
    for s in scopes:
        for a, b in combinations(s, 2):
            adjacency[a].add(b)
            adjacency[b].add(a)

    elim = [c for _, c in _min_fill_order(variables, adjacency)]
    # an elimination clique never contains an earlier one (it lacks the
    # earlier eliminated vertex), so a forward subset test suffices
    maximal: List[FrozenSet[int]] = []
    for c in elim:
        if not any(c <= k for k in maximal):
            maximal.append(c)
    nodes = [tuple(sorted(c)) for c in maximal] or [()]

    candidates = sorted(
        ((-len(set(a) & set(b)), i, j) for (i, a), (j, b) in combinations(enumerate(nodes), 2)))
    root = list(range(len(nodes)))

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    edges = []
    for _, i, j in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            root[max(ri, rj)] = min(ri, rj)
            edges.append((i, j))
    tree = JunctionTree(tuple(nodes), tuple(edges))

    assignment = []
    for s in scopes:
        cover = tree.covering_nodes(s)
        assert cover, "triangulation must cover every input scope"
        assignment.append(cover[0])
    return tree, assignment


def assign(tree: JunctionTree, scopes: Sequence[Sequence[int]]) -> List[int]:
    """Assign each scope to the lowest-index node that covers it."""
    out = []
    for s in scopes:
        cover = tree.covering_nodes(s)
        if not cover:
            raise ModelError(f"no junction tree node covers scope {tuple(s)}")
        out.append(cover[0])
    return out


def chain(scopes: Sequence[Sequence[int]]) -> JunctionTree:
    """Tree with nodes ``scopes`` connected in sequence."""
    return JunctionTree(tuple(scopes), tuple((i, i + 1) for i in range(len(scopes) - 1)))


def star(center: Sequence[int], leaves: Sequence[Sequence[int]]) -> JunctionTree:
    """Tree with node 0 = ``center`` adjacent to every leaf node."""
    return JunctionTree((tuple(center), *map(tuple, leaves)), tuple((0, i + 1) for i in range(len(leaves))))
