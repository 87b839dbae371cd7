"""Instrumentation: live messages and combination work.

Run with:  python demos/04_memory_and_cost.py
"""
import numpy as np

from jtmoments.engine import ShaferShenoy
from jtmoments.generators import random_model
from jtmoments.jtree import chain, star
from jtmoments.moments import Model, moment_all_vertices, moment_ln, node_potentials
from jtmoments.tables import Table
from jtmoments.valuation import LAURITZEN_NILSSON, MAUA

rng = np.random.default_rng(0)

# Single-root normalization frees each message once it has been absorbed;
# the all-vertices approach keeps every message plus every node marginal.
print("chain length | collect peak | all-vertices peak + marginals")
for n in (2, 4, 8, 16):
    tree = chain([(i, i + 1) for i in range(n)])
    p = [Table(s, rng.uniform(0.1, 1, (2, 2))) for s in tree.nodes]
    h = [Table(s, rng.uniform(-1, 1, (2, 2))) for s in tree.nodes]
    model = Model((2,) * (n + 1), p, h, tree)
    a, b = moment_ln(model).stats, moment_all_vertices(model).stats
    print(f"{n:>12} | {a.peak_live:>12} | {b.peak_live:>4} + {b.marginals_retained}")

# Peak live messages against leaf count on random trees (reported, not a bound).
print("\nrandom trees: nodes, leaves, collect peak")
for _ in range(6):
    model = random_model(rng, n_variables=8, n_nodes=8, kind="random", max_card=2)
    tree = model.junction_tree
    st = moment_ln(model).stats
    print(f"  {len(tree):>2} nodes, {len(tree.leaves()):>2} leaves, peak {st.peak_live}")

# Work spent on the centre-to-leaf message of a star.
print("\nstar degree | LN combine ops | Maua combine ops")
for d in (3, 4, 5, 8):
    tree = star((0,), [(0, i) for i in range(1, d + 1)])
    p = [Table(s, rng.uniform(0.1, 1, (2,) * len(s))) for s in tree.nodes]
    h = [Table(s, rng.uniform(-1, 1, (2,) * len(s))) for s in tree.nodes]
    model = Model((2,) * (d + 1), p, h, tree)
    ops = []
    for alg in (LAURITZEN_NILSSON, MAUA):
        eng = ShaferShenoy(tree, node_potentials(model, alg), alg)
        eng.all_marginals()
        ops.append(eng.store.message_ops[(0, 1)])
    print(f"{d:>11} | {ops[0]:>14} | {ops[1]:>16}")
