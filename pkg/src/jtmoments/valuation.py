"""Combination/marginalization algebras that local computation runs over.

Three algebras are provided:

* ``SUM_PRODUCT`` works on plain :class:`~jtmoments.tables.Table` objects,
  combining by pointwise product and marginalizing by summation.
* ``LAURITZEN_NILSSON`` works on :class:`PairPotential` objects ``(p, h)``
  where ``h`` is carried as a conditional expectation: combination adds
  h-parts, marginalization averages them with weights ``p``.
* ``MAUA`` also works on pairs, but ``h`` is carried unnormalized (``p*h``):
  combination follows the product rule and marginalization sums both parts.

Every algebra exposes the same small interface (:class:`ValuationAlgebra`) so
the message-passing engine is written once.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from functools import reduce
from typing import Any, Sequence

import numpy as np

from .errors import DomainError, ScopeError
from .tables import (
    Scope,
    Table,
    make_scope,
    ones,
    safe_divide,
    sum_marginal,
    table_product,
    table_sum,
    zeros,
)

# Sum-product elements are bare tables.
SumProductPotential = Table


@dataclass(frozen=True)
class PairPotential:
    """A pair ``(p, h)`` of tables on a common scope with ``p >= 0``."""

    p: Table
    h: Table

    def __post_init__(self):
        if self.p.scope != self.h.scope or self.p.cards != self.h.cards:
            raise ScopeError(f"p-part on {self.p.scope} and h-part on {self.h.scope} differ")
        if np.any(self.p.values < 0):
            raise DomainError("p-part of a pair potential must be nonnegative")

    @property
    def scope(self) -> Scope:
        return self.p.scope

    @property
    def cards(self):
        return self.p.cards

    @property
    def size(self) -> int:
        return self.p.size

    def __repr__(self):
        return f"PairPotential(scope={self.scope}, p={self.p.flat.tolist()}, h={self.h.flat.tolist()})"


def vacuous_pair(scope: Sequence[int], cards: Sequence[int]) -> PairPotential:
    return PairPotential(ones(scope, cards), zeros(scope, cards))


def pair_equal(a: PairPotential, b: PairPotential, tol: float = 1e-9) -> bool:
    """Equality of pairs up to almost-sure agreement of the h-parts.

    p-parts must agree within relative ``tol``; h-parts are compared only on
    cells where both p-parts exceed ``tol``.
    """
    if a.scope != b.scope or a.cards != b.cards:
        raise ScopeError(f"cannot compare pairs on {a.scope} and {b.scope}")
    pa, pb = a.p.values, b.p.values
    if not np.allclose(pa, pb, rtol=tol, atol=tol):
        return False
    support = (pa > tol) & (pb > tol)
    ha, hb = a.h.values[support], b.h.values[support]
    return bool(np.allclose(ha, hb, rtol=tol, atol=tol))


def _check_lift(p_c: Table, h_c: Table) -> None:
    if np.any(p_c.values < 0):
        raise DomainError("p-factor has a negative cell")
    if p_c.scope != h_c.scope:
        raise ScopeError(f"p-factor on {p_c.scope} and h-factor on {h_c.scope}")


def lift_ln(p_c: Table, h_c: Table) -> PairPotential:
    _check_lift(p_c, h_c)
    return PairPotential(p_c, h_c)


def lift_maua(p_c: Table, h_c: Table) -> PairPotential:
    _check_lift(p_c, h_c)
    return PairPotential(p_c, table_product(p_c, h_c))


def ln_combine(a: PairPotential, b: PairPotential) -> PairPotential:
    return PairPotential(table_product(a.p, b.p), table_sum(a.h, b.h))


def ln_marginalize(a: PairPotential, target: Sequence[int]) -> PairPotential:
    return LAURITZEN_NILSSON.marginalize(a, target)


def maua_combine(a: PairPotential, b: PairPotential) -> PairPotential:
    h = table_sum(table_product(a.h, b.p), table_product(a.p, b.h))
    return PairPotential(table_product(a.p, b.p), h)


def maua_marginalize(a: PairPotential, target: Sequence[int]) -> PairPotential:
    return PairPotential(sum_marginal(a.p, target), sum_marginal(a.h, target))


class ValuationAlgebra(abc.ABC):
    """What the engine needs from an algebra.

    ``combine_cost`` reports the elementwise arithmetic operations one call
    to ``combine`` performs, so that different algebras can be compared.
    """

    name: str = ""

    @abc.abstractmethod
    def combine(self, a: Any, b: Any) -> Any: ...

    @abc.abstractmethod
    def marginalize(self, a: Any, target: Sequence[int]) -> Any: ...

    @abc.abstractmethod
    def vacuous(self, scope: Sequence[int], cards: Sequence[int]) -> Any: ...

    @abc.abstractmethod
    def equal(self, a: Any, b: Any, tol: float = 1e-9) -> bool: ...

    @abc.abstractmethod
    def combine_cost(self, result: Any) -> int: ...

    def scope(self, a: Any) -> Scope:
        return a.scope

    def size(self, a: Any) -> int:
        return a.size

    def combine_all(self, items: Sequence[Any]) -> Any:
        return reduce(self.combine, items)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"


class SumProductAlgebra(ValuationAlgebra):
    name = "sum-product"

    def combine(self, a: Table, b: Table) -> Table:
        return table_product(a, b)

    def marginalize(self, a: Table, target: Sequence[int]) -> Table:
        return sum_marginal(a, target)

    def vacuous(self, scope, cards) -> Table:
        return ones(scope, cards)

    def equal(self, a: Table, b: Table, tol: float = 1e-9) -> bool:
        if a.scope != b.scope or a.cards != b.cards:
            raise ScopeError(f"cannot compare tables on {a.scope} and {b.scope}")
        return bool(np.allclose(a.values, b.values, rtol=tol, atol=tol))

    def combine_cost(self, result: Table) -> int:
        return result.size


class LauritzenNilssonAlgebra(ValuationAlgebra):
    """Pairs with h carried as a p-weighted average.

    ``zero_denominator_anomalies`` counts marginal cells where a nonzero
    numerator met a zero denominator; those cells are set to 0.
    """

    name = "ln"

    def __init__(self):
        self.zero_denominator_anomalies = 0

    def combine(self, a, b):
        return ln_combine(a, b)

    def marginalize(self, a: PairPotential, target: Sequence[int]) -> PairPotential:
        target = make_scope(target)
        if target == a.scope:
            return a
        p = sum_marginal(a.p, target)
        ph = sum_marginal(table_product(a.p, a.h), target)
        h, bad = safe_divide(ph, p)
        self.zero_denominator_anomalies += bad
        return PairPotential(p, h)

    def vacuous(self, scope, cards):
        return vacuous_pair(scope, cards)

    def equal(self, a, b, tol=1e-9):
        return pair_equal(a, b, tol)

    def combine_cost(self, result: PairPotential) -> int:
        # one product for p, one sum for h
        return 2 * result.size


class MauaAlgebra(ValuationAlgebra):
    """Pairs with h carried unnormalized; combination uses the product rule."""

    name = "maua"

    def combine(self, a, b):
        return maua_combine(a, b)

    def marginalize(self, a, target):
        return maua_marginalize(a, target)

    def vacuous(self, scope, cards):
        return vacuous_pair(scope, cards)

    def equal(self, a, b, tol=1e-9):
        return pair_equal(a, b, tol)

    def combine_cost(self, result: PairPotential) -> int:
        # p: one product; h: two products and one sum
        return 4 * result.size


SUM_PRODUCT = SumProductAlgebra()
LAURITZEN_NILSSON = LauritzenNilssonAlgebra()
MAUA = MauaAlgebra()

ALGEBRAS = {a.name: a for a in (SUM_PRODUCT, LAURITZEN_NILSSON, MAUA)}
