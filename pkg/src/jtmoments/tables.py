"""Dense real-valued tables over discrete configuration spaces.

A :class:`Table` is a function ``Omega_A -> R`` stored as a numpy array whose
axes follow the scope ``A`` in ascending variable order. Flattened in C order,
the last scope variable varies fastest, which is also the layout used by the
model file format.

Variables are plain non-negative integers and a scope is a strictly increasing
tuple of them. The empty scope ``()`` has exactly one configuration and a
table on it holds a single number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, ScopeError

Scope = Tuple[int, ...]


def make_scope(variables: Iterable[int]) -> Scope:
    """Return the canonical (sorted, duplicate free) scope for ``variables``."""
    vs = tuple(int(v) for v in variables)
    if any(v < 0 for v in vs):
        raise ScopeError(f"variable ids must be non-negative, got {vs}")
    if len(set(vs)) != len(vs):
        raise ScopeError(f"duplicate variable in scope {vs}")
    return tuple(sorted(vs))


def _check_scope(scope: Sequence[int]) -> Scope:
    scope = tuple(int(v) for v in scope)
    if any(b <= a for a, b in zip(scope, scope[1:])):
        raise ScopeError(f"scope must be strictly increasing, got {scope}")
    if scope and scope[0] < 0:
        raise ScopeError(f"variable ids must be non-negative, got {scope}")
    return scope


def is_subscope(small: Scope, big: Scope) -> bool:
    return set(small) <= set(big)


def union_scope(a: Scope, b: Scope) -> Scope:
    return tuple(sorted(set(a) | set(b)))


def intersect_scope(a: Scope, b: Scope) -> Scope:
    return tuple(sorted(set(a) & set(b)))


@dataclass(frozen=True)
class Configuration:
    """An assignment ``x_A``: one value index per variable of ``scope``."""

    scope: Scope
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "scope", _check_scope(self.scope))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.scope) != len(self.values):
            raise ScopeError("configuration needs exactly one value per scope variable")

    @classmethod
    def from_mapping(cls, assignment: Mapping[int, int]) -> "Configuration":
        scope = make_scope(assignment)
        return cls(scope, tuple(assignment[v] for v in scope))

    def as_dict(self) -> dict:
        return dict(zip(self.scope, self.values))


class Table:
    """Immutable dense table on a scope.

    ``values`` may be given already shaped (one axis per scope variable) or
    flat together with ``cards``, the per-variable cardinalities.
    """

    __slots__ = ("scope", "values")

    def __init__(self, scope: Sequence[int], values, cards: Sequence[int] | None = None):
        scope = _check_scope(scope)
        arr = np.array(values, dtype=np.float64)
        if cards is not None:
            cards = tuple(int(c) for c in cards)
            if len(cards) != len(scope):
                raise ScopeError(f"{len(cards)} cardinalities for scope of size {len(scope)}")
            if any(c < 1 for c in cards):
                raise ScopeError(f"cardinalities must be >= 1, got {cards}")
            expected = int(np.prod(cards, dtype=np.int64))
            if arr.size != expected:
                raise ScopeError(f"expected {expected} values for cardinalities {cards}, got {arr.size}")
            arr = arr.reshape(cards)
        elif arr.ndim != len(scope):
            if not scope and arr.size == 1:
                arr = arr.reshape(())
            else:
                raise ScopeError(f"array of shape {arr.shape} does not match scope {scope}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("table values must be finite")
        arr.setflags(write=False)
        self.scope: Scope = scope
        self.values: np.ndarray = arr

    @property
    def cards(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    @property
    def size(self) -> int:
        return self.values.size

    def card_map(self) -> dict:
        return dict(zip(self.scope, self.cards))

    def __repr__(self):
        return f"Table(scope={self.scope}, values={self.flat.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Table):
            return NotImplemented
        return self.scope == other.scope and np.array_equal(self.values, other.values)

    __hash__ = None

    def allclose(self, other: "Table", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        return (self.scope == other.scope and self.cards == other.cards
                and np.allclose(self.values, other.values, rtol=rtol, atol=atol))


def constant(scope: Sequence[int], cards: Sequence[int], value: float) -> Table:
    return Table(scope, np.full(tuple(cards), float(value)))


def ones(scope: Sequence[int], cards: Sequence[int]) -> Table:
    return constant(scope, cards, 1.0)


def zeros(scope: Sequence[int], cards: Sequence[int]) -> Table:
    return constant(scope, cards, 0.0)


def table_eval(t: Table, x: Union[Configuration, Mapping[int, int]]) -> float:
    """Value of ``t`` at the restriction of ``x`` to ``t.scope``."""
    assignment = x.as_dict() if isinstance(x, Configuration) else x
    try:
        index = tuple(int(assignment[v]) for v in t.scope)
    except KeyError as exc:
        raise ScopeError(f"configuration does not assign variable {exc.args[0]}") from None
    for v, i, c in zip(t.scope, index, t.cards):
        if not 0 <= i < c:
            raise ScopeError(f"value {i} out of range for variable {v} (cardinality {c})")
    return float(t.values[index])


def _union_cards(a: Table, b: Table) -> Tuple[Scope, Tuple[int, ...]]:
    cards = a.card_map()
    for v, c in b.card_map().items():
        if cards.setdefault(v, c) != c:
            raise ScopeError(f"variable {v} has cardinality {cards[v]} in one table and {c} in the other")
    scope = tuple(sorted(cards))
    return scope, tuple(cards[v] for v in scope)


def expand(t: Table, scope: Scope) -> np.ndarray:
    """View of ``t`` broadcastable against arrays laid out on ``scope``."""
    if not is_subscope(t.scope, scope):
        raise ScopeError(f"{t.scope} is not contained in {scope}")
    # t.scope is sorted and so is scope, so axes are already in order
    shape = [1] * len(scope)
    pos = {v: i for i, v in enumerate(scope)}
    for v, c in zip(t.scope, t.cards):
        shape[pos[v]] = c
    return t.values.reshape(shape)


def _pointwise(a: Table, b: Table, op) -> Table:
    scope, cards = _union_cards(a, b)
    out = op(expand(a, scope), expand(b, scope))
    return Table(scope, np.broadcast_to(out, cards))


def table_product(a: Table, b: Table) -> Table:
    """``(a*b)(x_{A u B}) = a(x_A) * b(x_B)``."""
    return _pointwise(a, b, np.multiply)


def table_sum(a: Table, b: Table) -> Table:
    """``(a+b)(x_{A u B}) = a(x_A) + b(x_B)``."""
    return _pointwise(a, b, np.add)


def table_difference(a: Table, b: Table) -> Table:
    return _pointwise(a, b, np.subtract)


def sum_marginal(t: Table, target: Sequence[int]) -> Table:
    """Sum ``t`` over every variable not in ``target``."""
    target = make_scope(target)
    if not is_subscope(target, t.scope):
        raise ScopeError(f"cannot marginalize scope {t.scope} onto {target}")
    axes = tuple(i for i, v in enumerate(t.scope) if v not in target)
    if not axes:
        return t
    return Table(target, t.values.sum(axis=axes))


def safe_divide(num: Table, den: Table) -> Tuple[Table, int]:
    """Cellwise ``num / den`` with ``x/0 := 0``.

    Both tables must share a scope. Returns the quotient and the number of
    cells where a nonzero numerator met a zero denominator.
    """
    if num.scope != den.scope:
        raise ScopeError(f"scope mismatch {num.scope} vs {den.scope}")
    zero = den.values == 0.0
    anomalies = int(np.count_nonzero(zero & (num.values != 0.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(zero, 0.0, num.values / np.where(zero, 1.0, den.values))
    return Table(num.scope, q), anomalies
