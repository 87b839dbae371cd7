"""Randomized checks shared by the unit and acceptance suites."""

import numpy as np

from jtmoments.generators import random_pair
from jtmoments.tables import Table
from jtmoments.valuation import LAURITZEN_NILSSON, MAUA, SUM_PRODUCT

VARIABLES = (0, 1, 2)


def random_scope(rng, within=VARIABLES):
    return tuple(v for v in within if rng.random() < 0.5)


def random_element(rng, algebra, scope):
    cards = (2,) * len(scope)
    if algebra is SUM_PRODUCT:
        return Table(scope, rng.uniform(0.1, 1.0, size=cards))
    return random_pair(rng, scope, cards)


def check_axioms_once(rng, algebra, tol=1e-9):
    """One randomized instance of commutativity, associativity, consonance,
    distributivity and the vacuous identity. Returns failed law names."""
    failed = []
    a_scope, b_scope, c_scope = (random_scope(rng) for _ in range(3))
    a, b, c = (random_element(rng, algebra, s) for s in (a_scope, b_scope, c_scope))
    comb, marg, eq = algebra.combine, algebra.marginalize, algebra.equal

    if not eq(comb(a, b), comb(b, a), tol):
        failed.append("commutativity")
    if not eq(comb(a, comb(b, c)), comb(comb(a, b), c), tol):
        failed.append("associativity")

    mid = random_scope(rng, a_scope)
    low = random_scope(rng, mid)
    if not eq(marg(marg(a, mid), low), marg(a, low), tol):
        failed.append("consonance")

    shared = tuple(v for v in a_scope if v in b_scope)
    if not eq(marg(comb(a, b), a_scope), comb(a, marg(b, shared)), tol):
        failed.append("distributivity")

    vac = algebra.vacuous(a_scope, (2,) * len(a_scope))
    if not eq(comb(vac, a), a, tol):
        failed.append("vacuous identity")
    return failed


def run_axiom_trials(algebra, trials=200, seed=0):
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(trials):
        for law in check_axioms_once(rng, algebra):
            failures.append((i, law))
    return failures


ALL_ALGEBRAS = (SUM_PRODUCT, LAURITZEN_NILSSON, MAUA)


def lemma_fold(ps, hs):
    """Independent closed form: (prod p_i, sum_i h_i prod_{j != i} p_j)."""
    p = float(np.prod(ps))
    h = 0.0
    for i in range(len(ps)):
        h += hs[i] * float(np.prod([ps[j] for j in range(len(ps)) if j != i]))
    return p, h
