"""Random tables, trees and models for tests, demos and acceptance runs."""

from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from .jtree import JunctionTree
from .tables import Table, make_scope
from .valuation import PairPotential

TREE_KINDS = ("chain", "star", "random")


def random_table(rng: np.random.Generator, scope: Sequence[int], cards: Sequence[int],
                 low: float = 0.1, high: float = 1.0) -> Table:
    return Table(make_scope(scope), rng.uniform(low, high, size=tuple(cards)))


def random_pair(rng, scope, cards, zero_fraction: float = 0.0) -> PairPotential:
    p = rng.uniform(0.1, 1.0, size=tuple(cards))
    if zero_fraction:
        p = np.where(rng.random(p.shape) < zero_fraction, 0.0, p)
    h = rng.uniform(-1.0, 1.0, size=tuple(cards))
    return PairPotential(Table(scope, p), Table(scope, h))


def random_subscope(rng, scope: Sequence[int], nonempty: bool = False):
    scope = list(scope)
    while True:
        keep = [v for v in scope if rng.random() < 0.5]
        if keep or not nonempty or not scope:
            return tuple(keep)


def tree_edges(rng, n_nodes: int, kind: str) -> List[tuple]:
    if kind == "chain":
        return [(i, i + 1) for i in range(n_nodes - 1)]
    if kind == "star":
        return [(0, i) for i in range(1, n_nodes)]
    if kind == "random":
        return [(int(rng.integers(0, i)), i) for i in range(1, n_nodes)]
    raise ValueError(f"unknown tree kind {kind!r}")


def random_model(rng: np.random.Generator, n_variables: Optional[int] = None, max_card: int = 3,
                 kind: Optional[str] = None, n_nodes: Optional[int] = None,
                 zero_fraction: float = 0.0, normalize: bool = True):
    """A model with an explicit junction tree of the requested shape.

    Node ``i`` is seeded with variable ``i``; every variable then spreads over
    a random connected set of nodes, so the tree has the running-intersection
    property by construction. Each node gets a p-factor on its full scope and
    an h-factor on its full scope or on a random sub-scope.
    """
    from .moments import Model, brute_force_mass

    if n_variables is None:
        n_variables = int(rng.integers(1, 6))
    if n_nodes is None:
        n_nodes = int(rng.integers(1, n_variables + 1))
    n_nodes = min(n_nodes, n_variables)
    if kind is None:
        kind = TREE_KINDS[int(rng.integers(len(TREE_KINDS)))]
    cards = tuple(int(c) for c in rng.integers(1, max_card + 1, size=n_variables))
    edges = tree_edges(rng, n_nodes, kind)
    adj = {i: set() for i in range(n_nodes)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)

    members = {i: set() for i in range(n_nodes)}
    for v in range(n_variables):
        start = v if v < n_nodes else int(rng.integers(n_nodes))
        region = {start}
        frontier = set(adj[start])
        while frontier and rng.random() < 0.5:
            nxt = sorted(frontier)[int(rng.integers(len(frontier)))]
            region.add(nxt)
            frontier = (frontier | adj[nxt]) - region
        for i in region:
            members[i].add(v)
    nodes = tuple(tuple(sorted(members[i])) for i in range(n_nodes))
    tree = JunctionTree(nodes, tuple(edges))

    def table_on(scope, low, high, zeros=0.0):
        vals = rng.uniform(low, high, size=tuple(cards[v] for v in scope))
        if zeros:
            vals = np.where(rng.random(vals.shape) < zeros, 0.0, vals)
        return Table(scope, vals)

    p_factors, h_factors = [], []
    for scope in nodes:
        p_factors.append(table_on(scope, 0.1, 1.0, zero_fraction))
        h_scope = scope if rng.random() < 0.6 else random_subscope(rng, scope)
        h_factors.append(table_on(h_scope, -1.0, 1.0))
    model = Model(cards, p_factors, h_factors, tree)
    if normalize:
        z = brute_force_mass(model)
        if z > 0:
            p0 = model.p_factors[0]
            model = Model(cards, [Table(p0.scope, p0.values / z)] + p_factors[1:], h_factors, tree)
    return model
