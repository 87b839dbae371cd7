"""First-order moments ``m = sum_x p(x) h(x)`` on junction trees.

``p`` factorizes as a product of nonnegative tables and ``h`` as a sum of
tables. Three local-computation strategies are offered, plus brute-force
enumeration used as an independent oracle:

``moment_all_vertices``
    sum-product marginals on every node, then ``sum_C sum_{x_C} h_C p^{|C}``.
``moment_ln``
    normalization under the Lauritzen-Nilsson pair algebra.
``moment_maua``
    normalization under the Maua et al. pair algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .engine import ShaferShenoy, Stats
from .errors import DomainError, EnumerationCapExceeded, ModelError, QueryError, ScopeError
from .jtree import JunctionTree, build, validate
from .tables import Scope, Table, make_scope, ones, sum_marginal, table_eval, zeros
from .valuation import (
    LAURITZEN_NILSSON,
    MAUA,
    SUM_PRODUCT,
    PairPotential,
    ValuationAlgebra,
    lift_ln,
    lift_maua,
)

DEFAULT_CAP = 2 ** 20


@dataclass(frozen=True)
class FactorPair:
    """A p-factor and h-factor sharing a scope; a missing side is neutral."""

    p: Table
    h: Table

    @property
    def scope(self) -> Scope:
        return self.p.scope


@dataclass
class Model:
    """Variables with cardinalities ``cards[v]``, p-factors and h-factors.

    ``tree`` is optional; when omitted one is built from the factor scopes.
    """

    cards: Tuple[int, ...]
    p_factors: List[Table]
    h_factors: List[Table] = field(default_factory=list)
    tree: Optional[JunctionTree] = None
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        self.cards = tuple(int(c) for c in self.cards)
        if any(c < 1 for c in self.cards):
            raise ModelError(f"cardinalities must be >= 1, got {self.cards}")
        self.p_factors = list(self.p_factors)
        self.h_factors = list(self.h_factors)
        if self.names is None:
            self.names = tuple(f"x{i}" for i in range(len(self.cards)))
        elif len(self.names) != len(self.cards):
            raise ModelError("one name per variable is required")
        for kind, factors in (("p", self.p_factors), ("h", self.h_factors)):
            for t in factors:
                for v, c in zip(t.scope, t.cards):
                    if v >= len(self.cards):
                        raise ModelError(f"{kind}-factor references unknown variable {v}")
                    if c != self.cards[v]:
                        raise ModelError(f"{kind}-factor gives variable {v} cardinality {c}, expected {self.cards[v]}")
        for t in self.p_factors:
            if np.any(t.values < 0):
                raise DomainError(f"p-factor on {t.scope} has a negative cell")

    @property
    def n_variables(self) -> int:
        return len(self.cards)

    @property
    def n_configurations(self) -> int:
        return int(np.prod(self.cards, dtype=object))

    def cards_of(self, scope: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self.cards[v] for v in scope)

    @cached_property
    def junction_tree(self) -> JunctionTree:
        scopes = [t.scope for t in self.p_factors + self.h_factors]
        if self.tree is None:
            tree, _ = build(scopes or [()], n_variables=self.n_variables)
            return tree
        report = validate(self.tree)
        if not report:
            raise ModelError(report.reason)
        for s in scopes:
            if not self.tree.covering_nodes(s):
                raise ModelError(f"no junction tree node covers factor scope {s}")
        for v in self.tree.variables():
            if v >= self.n_variables:
                raise ModelError(f"tree references unknown variable {v}")
        return self.tree

    @cached_property
    def factor_pairs(self) -> List[FactorPair]:
        """p- and h-factors matched by identical scope, in p-factor order.

        An h-factor with no same-scope p-factor gets a ones p-part, and a
        p-factor with no h-factor gets a zeros h-part.
        """
        unmatched = list(self.h_factors)
        pairs = []
        for p in self.p_factors:
            h = next((t for t in unmatched if t.scope == p.scope), None)
            if h is None:
                h = zeros(p.scope, p.cards)
            else:
                unmatched.remove(h)
            pairs.append(FactorPair(p, h))
        for h in unmatched:
            pairs.append(FactorPair(ones(h.scope, h.cards), h))
        return pairs

    def default_placement(self) -> List[int]:
        tree = self.junction_tree
        return [tree.covering_nodes(fp.scope)[0] for fp in self.factor_pairs]

    def check_placement(self, placement: Sequence[int]) -> List[int]:
        tree = self.junction_tree
        placement = list(placement)
        if len(placement) != len(self.factor_pairs):
            raise ModelError(f"placement lists {len(placement)} nodes for {len(self.factor_pairs)} factor pairs")
        for fp, node in zip(self.factor_pairs, placement):
            if not set(fp.scope) <= set(tree.nodes[node]):
                raise ModelError(f"node {node} does not cover factor scope {fp.scope}")
        return placement

    def scaled(self, factor_index: int, by: float) -> "Model":
        """Copy with one p-factor multiplied by a positive constant."""
        ps = list(self.p_factors)
        t = ps[factor_index]
        ps[factor_index] = Table(t.scope, t.values * by)
        return Model(self.cards, ps, self.h_factors, self.tree, self.names)


@dataclass(frozen=True)
class MomentResult:
    """``Z`` is the total p-mass; ``m`` the moment per unit mass.

    ``h_part`` is the raw h-part the algorithm produced: ``m`` for the
    averaging strategies, ``Z * m`` for the unnormalized one.
    """

    algorithm: str
    Z: float
    m: float
    h_part: float
    stats: Stats = field(default_factory=Stats)
    marginals: Optional[Tuple[Table, ...]] = None


# -- oracles -----------------------------------------------------------------


def _check_cap(model: Model, cap: int) -> None:
    if model.n_configurations > cap:
        raise EnumerationCapExceeded(
            f"{model.n_configurations} joint configurations exceed the enumeration cap {cap}")


def _enumerate(model: Model):
    for values in itertools.product(*(range(c) for c in model.cards)):
        x = dict(enumerate(values))
        p = 1.0
        for t in model.p_factors:
            p *= table_eval(t, x)
        h = 0.0
        for t in model.h_factors:
            h += table_eval(t, x)
        yield values, p, h


def brute_force_moment(model: Model, cap: int = DEFAULT_CAP) -> float:
    """``sum_x prod_C p_C(x_C) * sum_C h_C(x_C)`` by full enumeration."""
    _check_cap(model, cap)
    return float(sum(p * h for _, p, h in _enumerate(model)))


def brute_force_mass(model: Model, cap: int = DEFAULT_CAP) -> float:
    _check_cap(model, cap)
    return float(sum(p for _, p, _ in _enumerate(model)))


def brute_force_moment_potential(model: Model, scope: Sequence[int], cap: int = DEFAULT_CAP) -> Table:
    """``m_C(x_C)``: the partial sum of ``p*h`` over variables outside ``C``."""
    scope = make_scope(scope)
    if any(v >= model.n_variables for v in scope):
        raise ScopeError(f"scope {scope} references unknown variables")
    _check_cap(model, cap)
    out = np.zeros(model.cards_of(scope))
    for values, p, h in _enumerate(model):
        out[tuple(values[v] for v in scope)] += p * h
    return Table(scope, out)


def brute_force_marginal(model: Model, scope: Sequence[int], cap: int = DEFAULT_CAP) -> Table:
    scope = make_scope(scope)
    _check_cap(model, cap)
    out = np.zeros(model.cards_of(scope))
    for values, p, _ in _enumerate(model):
        out[tuple(values[v] for v in scope)] += p
    return Table(scope, out)


# -- local computation -------------------------------------------------------


def node_potentials(model: Model, algebra: ValuationAlgebra,
                    placement: Optional[Sequence[int]] = None) -> List:
    """Per-node valuations: vacuous on the node scope times its factors."""
    tree = model.junction_tree
    placement = model.default_placement() if placement is None else model.check_placement(placement)
    pots = [algebra.vacuous(n, model.cards_of(n)) for n in tree.nodes]
    for fp, node in zip(model.factor_pairs, placement):
        if algebra is SUM_PRODUCT:
            item = fp.p
        elif algebra is LAURITZEN_NILSSON:
            item = lift_ln(fp.p, fp.h)
        elif algebra is MAUA:
            item = lift_maua(fp.p, fp.h)
        else:
            raise ValueError(f"no factor lifting known for {algebra!r}")
        pots[node] = algebra.combine(pots[node], item)
    return pots


def _ratio(num: float, den: float) -> float:
    return 0.0 if den == 0.0 else num / den


def moment_all_vertices(model: Model, root: int = 0,
                        placement: Optional[Sequence[int]] = None) -> MomentResult:
    """Marginals on every node, then sum ``h_C * p^{|C}`` factor by factor."""
    tree = model.junction_tree
    placement = model.default_placement() if placement is None else model.check_placement(placement)
    eng = ShaferShenoy(tree, node_potentials(model, SUM_PRODUCT, placement), SUM_PRODUCT)
    psi = eng.all_marginals(root)
    total = 0.0
    for fp, node in zip(model.factor_pairs, placement):
        marginal = sum_marginal(psi[node], fp.scope)
        total += float(np.sum(fp.h.values * marginal.values))
    z = float(sum_marginal(psi[root], ()).values)
    return MomentResult("all-vertices", z, _ratio(total, z), total, eng.store.stats(), tuple(psi))


def _normalize_pairs(model: Model, algebra, root: int, placement) -> Tuple[PairPotential, Stats]:
    eng = ShaferShenoy(model.junction_tree, node_potentials(model, algebra, placement), algebra,
                       eager_free=True)
    result = eng.normalize(root)
    return result, eng.store.stats()


def moment_ln(model: Model, root: int = 0, placement: Optional[Sequence[int]] = None) -> MomentResult:
    """Normalize under the Lauritzen-Nilsson algebra; the h-part is ``m``."""
    pair, st = _normalize_pairs(model, LAURITZEN_NILSSON, root, placement)
    z, h = float(pair.p.values), float(pair.h.values)
    return MomentResult("ln", z, h, h, st)


def moment_maua(model: Model, root: int = 0, placement: Optional[Sequence[int]] = None) -> MomentResult:
    """Normalize under the Maua algebra; ``m`` is the h-part over the p-part."""
    pair, st = _normalize_pairs(model, MAUA, root, placement)
    z, h = float(pair.p.values), float(pair.h.values)
    return MomentResult("maua", z, _ratio(h, z), h, st)


def moment_brute_force(model: Model, cap: int = DEFAULT_CAP) -> MomentResult:
    z = brute_force_mass(model, cap)
    raw = brute_force_moment(model, cap)
    return MomentResult("brute-force", z, _ratio(raw, z), raw)


STRATEGIES = {
    "all-vertices": moment_all_vertices,
    "ln": moment_ln,
    "maua": moment_maua,
}


def conditional_expectation(model: Model, scope: Sequence[int]) -> Table:
    """``E[h | x_C]`` as a table on ``C``; zero-probability cells are 0.

    ``C`` must lie inside some junction tree node. The answer is the h-part
    of the Lauritzen-Nilsson marginal on ``C``.
    """
    scope = make_scope(scope)
    tree = model.junction_tree
    cover = tree.covering_nodes(scope)
    if not cover:
        raise QueryError(f"no junction tree node contains {scope}")
    eng = ShaferShenoy(tree, node_potentials(model, LAURITZEN_NILSSON), LAURITZEN_NILSSON, eager_free=True)
    marginal = LAURITZEN_NILSSON.marginalize(eng.collect(cover[0]), scope)
    # h is only defined almost surely; pin the null cells to 0
    return Table(scope, np.where(marginal.p.values == 0.0, 0.0, marginal.h.values))


def mass(model: Model, root: int = 0) -> float:
    """Total p-mass via sum-product normalization."""
    eng = ShaferShenoy(model.junction_tree, node_potentials(model, SUM_PRODUCT), SUM_PRODUCT, eager_free=True)
    return float(eng.normalize(root).values)
