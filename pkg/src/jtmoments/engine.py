"""Shafer-Shenoy message passing over any :class:`ValuationAlgebra`.

Messages travel through mailboxes, one per directed edge. Node ``A`` may
send to ``B`` once every mailbox ``C -> A`` with ``C != B`` is full; the
message is ``(pi_A (x) messages from the other neighbours)`` marginalized to
the separator. Combination inside a node always starts from the node
potential and then takes incoming messages by ascending neighbour index,
which makes results bit-reproducible.

Scheduling is an explicit work-list (depth-first post-order for the inward
pass, pre-order for the outward pass), so deep chains do not hit the
recursion limit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import ModelError, ProtocolError
from .jtree import JunctionTree
from .tables import intersect_scope, is_subscope
from .valuation import SUM_PRODUCT, ValuationAlgebra


class Mailbox(enum.Enum):
    EMPTY = "empty"
    FULL = "full"
    FREED = "freed"


@dataclass(frozen=True)
class Stats:
    messages_computed: int = 0
    peak_live: int = 0
    combine_ops: int = 0
    marginal_cells: int = 0
    marginals_retained: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


class MessageStore:
    """Mailboxes for every directed edge, plus instrumentation counters."""

    def __init__(self, tree: JunctionTree):
        self.state: Dict[Tuple[int, int], Mailbox] = {}
        for i, j in tree.edges:
            self.state[(i, j)] = Mailbox.EMPTY
            self.state[(j, i)] = Mailbox.EMPTY
        self.messages: Dict[Tuple[int, int], Any] = {}
        # combination work spent producing each message
        self.message_ops: Dict[Tuple[int, int], int] = {}
        self.messages_computed = 0
        self.live = 0
        self.peak_live = 0
        self.combine_ops = 0
        self.marginal_cells = 0
        self.marginals_retained = 0

    def is_full(self, a: int, b: int) -> bool:
        return self.state[(a, b)] is Mailbox.FULL

    def put(self, a: int, b: int, message: Any, ops: int) -> None:
        if self.state[(a, b)] is not Mailbox.EMPTY:
            raise ProtocolError(f"message {a}->{b} computed twice")
        self.state[(a, b)] = Mailbox.FULL
        self.messages[(a, b)] = message
        self.message_ops[(a, b)] = ops
        self.messages_computed += 1
        self.live += 1
        self.peak_live = max(self.peak_live, self.live)

    def get(self, a: int, b: int) -> Any:
        if self.state[(a, b)] is not Mailbox.FULL:
            raise ProtocolError(f"mailbox {a}->{b} is {self.state[(a, b)].value}")
        return self.messages[(a, b)]

    def free(self, a: int, b: int) -> None:
        if self.state[(a, b)] is Mailbox.FULL:
            self.state[(a, b)] = Mailbox.FREED
            del self.messages[(a, b)]
            self.live -= 1

    def stats(self) -> Stats:
        return Stats(self.messages_computed, self.peak_live, self.combine_ops,
                     self.marginal_cells, self.marginals_retained)


def stats(store: MessageStore) -> Stats:
    return store.stats()


class ShaferShenoy:
    """One propagation run over ``tree`` with the given node potentials.

    ``potentials[i]`` is the valuation held by node ``i``; its scope must be
    contained in the node scope. With ``eager_free`` a message is dropped as
    soon as the message (or root result) consuming it has been computed.
    """

    def __init__(self, tree: JunctionTree, potentials: Sequence[Any],
                 algebra: ValuationAlgebra = SUM_PRODUCT, eager_free: bool = False):
        if len(potentials) != len(tree.nodes):
            raise ModelError(f"{len(potentials)} potentials for {len(tree.nodes)} nodes")
        for i, (pot, node) in enumerate(zip(potentials, tree.nodes)):
            if not is_subscope(algebra.scope(pot), node):
                raise ModelError(f"potential on {algebra.scope(pot)} does not fit node {i} = {node}")
        self.tree = tree
        self.potentials = list(potentials)
        self.algebra = algebra
        self.eager_free = eager_free
        self.store = MessageStore(tree)

    def _absorb(self, a: int, exclude: Optional[int]) -> Tuple[Any, int]:
        acc = self.potentials[a]
        ops = 0
        for c in self.tree.neighbors(a):
            if c == exclude:
                continue
            acc = self.algebra.combine(acc, self.store.get(c, a))
            ops += self.algebra.combine_cost(acc)
        self.store.combine_ops += ops
        return acc, ops

    def message(self, a: int, b: int) -> Any:
        if b not in self.tree.neighbors(a):
            raise ModelError(f"nodes {a} and {b} are not adjacent")
        pending = [c for c in self.tree.neighbors(a) if c != b and not self.store.is_full(c, a)]
        if pending:
            raise ProtocolError(f"node {a} cannot send to {b}: waiting on {pending}")
        combined, ops = self._absorb(a, b)
        target = intersect_scope(self.tree.separator(a, b), self.algebra.scope(combined))
        self.store.marginal_cells += self.algebra.size(combined)
        msg = self.algebra.marginalize(combined, target)
        self.store.put(a, b, msg, ops)
        if self.eager_free:
            for c in self.tree.neighbors(a):
                if c != b:
                    self.store.free(c, a)
        return msg

    def _rooted(self, root: int) -> Tuple[List[int], Dict[int, Optional[int]]]:
        """Depth-first pre-order from ``root`` and the parent of each node."""
        parent: Dict[int, Optional[int]] = {root: None}
        order = []
        stack = [root]
        while stack:
            a = stack.pop()
            order.append(a)
            for c in reversed(self.tree.neighbors(a)):
                if c != parent[a]:
                    parent[c] = a
                    stack.append(c)
        return order, parent

    def _inward(self, root: int) -> None:
        order, parent = self._rooted(root)
        for a in reversed(order):
            if a != root and not self.store.is_full(a, parent[a]):
                self.message(a, parent[a])

    def collect(self, root: int) -> Any:
        """Marginal of the joint valuation on node ``root``."""
        self.tree.neighbors(root)  # raises on an out-of-range root
        self._inward(root)
        result, _ = self._absorb(root, None)
        if self.eager_free:
            for c in self.tree.neighbors(root):
                self.store.free(c, root)
        return result

    def distribute(self, root: int) -> None:
        order, parent = self._rooted(root)
        for a in order:
            for c in self.tree.neighbors(a):
                if c != parent[a]:
                    self.message(a, c)

    def all_marginals(self, root: int = 0) -> List[Any]:
        """Marginals on every node, from one inward and one outward pass."""
        if self.eager_free:
            raise ProtocolError("all_marginals needs every message retained; disable eager_free")
        self._inward(root)
        self.distribute(root)
        out = [self._absorb(a, None)[0] for a in range(len(self.tree.nodes))]
        self.store.marginals_retained = len(out)
        return out

    def normalize(self, root: int = 0) -> Any:
        """The joint valuation marginalized to the empty scope."""
        r = self.collect(root)
        self.store.marginal_cells += self.algebra.size(r)
        return self.algebra.marginalize(r, ())


def message(tree, potentials, a, b, algebra=SUM_PRODUCT):
    """Compute the single message ``a -> b``, first collecting its prerequisites."""
    eng = ShaferShenoy(tree, potentials, algebra)
    if b not in tree.neighbors(a):
        raise ModelError(f"nodes {a} and {b} are not adjacent")
    # rooted at b, the messages needed are those inside a's subtree
    order, parent = eng._rooted(b)
    for x in reversed(order):
        if x != b and _behind(x, a, parent):
            eng.message(x, parent[x])
    return eng.store.get(a, b)


def _behind(x, a, parent) -> bool:
    while x is not None:
        if x == a:
            return True
        x = parent[x]
    return False


def collect(tree, potentials, root, algebra=SUM_PRODUCT, eager_free=True):
    return ShaferShenoy(tree, potentials, algebra, eager_free).collect(root)


def all_marginals(tree, potentials, algebra=SUM_PRODUCT):
    return ShaferShenoy(tree, potentials, algebra).all_marginals()


def normalize(tree, potentials, root=0, algebra=SUM_PRODUCT, eager_free=True):
    return ShaferShenoy(tree, potentials, algebra, eager_free).normalize(root)
