"""Expected value of an additive function, three ways.

The model is a three-variable chain: p(u, v, w) = p(u, v) p(w | v) and
h(u, v, w) = (u + v) + w. Enumeration gives E[h] = 0.5 + 0.7 + 0.675 = 1.875.

Run with:  python demos/03_first_order_moments.py
"""
import numpy as np

from jtmoments import bundled_model_path
from jtmoments.engine import ShaferShenoy
from jtmoments.modelfile import load_model
from jtmoments.moments import (
    brute_force_moment, conditional_expectation, moment_all_vertices, moment_ln, moment_maua,
    node_potentials,
)
from jtmoments.valuation import LAURITZEN_NILSSON, MAUA

model = load_model(bundled_model_path("m1.json"))
print("variables:", model.names, "tree:", model.junction_tree.nodes)

print("\nbrute force        m =", brute_force_moment(model))
for strategy in (moment_all_vertices, moment_ln, moment_maua):
    res = strategy(model)
    print(f"{res.algorithm:<18} m = {res.m!r:<22} Z = {res.Z!r:<22} messages = {res.stats.messages_computed}")

# The message from {u,v} to {v,w} under both pair algebras. The p-parts
# coincide; the LN h-part is the Maua h-part over the p-part.
for alg in (LAURITZEN_NILSSON, MAUA):
    eng = ShaferShenoy(model.junction_tree, node_potentials(model, alg), alg)
    msg = eng.message(0, 1)
    print(f"\n{alg.name} message (u,v) -> (v,w): p = {msg.p.flat}, h = {msg.h.flat}")

# Conditional expectations come out of the LN marginal directly.
v = model.names.index("v")
print("\nE[h | v] =", conditional_expectation(model, (v,)).flat)

# If p is not normalized, LN still reports the mean; Maua reports the
# unnormalized sum and the mean is recovered by dividing by Z.
scaled = model.scaled(0, 2.0)
ln, mu = moment_ln(scaled), moment_maua(scaled)
print("\nscaled p: Z =", ln.Z, "| LN h-part =", ln.h_part, "| Maua h-part =", mu.h_part, "-> m =", mu.m)
assert np.isclose(ln.m, mu.m)
