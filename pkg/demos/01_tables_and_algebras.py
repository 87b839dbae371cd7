"""Tables, and the three combination/marginalization algebras.

Run with:  python demos/01_tables_and_algebras.py
"""
import numpy as np

from jtmoments.tables import Table, sum_marginal, table_product, table_sum
from jtmoments.valuation import (
    LAURITZEN_NILSSON, MAUA, SUM_PRODUCT, PairPotential, lift_ln, lift_maua, pair_equal,
)

# Variables are integers; here u=0, v=1, w=2, all binary.
u, v, w = 0, 1, 2

# A table stores values row-major over its scope, last variable fastest.
p_uv = Table((u, v), [0.1, 0.4, 0.2, 0.3], cards=(2, 2))
print("p(u,v):\n", p_uv.values)

# Product and sum live on the union of the scopes.
outer = table_product(Table((u,), [2, 3], (2,)), Table((v,), [5, 7], (2,)))
print("outer product on (u,v):", outer.flat)
print("outer sum on (u,v):    ", table_sum(Table((u,), [1, 2], (2,)), Table((v,), [10, 20], (2,))).flat)

# Summing out u gives the marginal on v; summing everything gives the total.
print("p(v):", sum_marginal(p_uv, (v,)).flat, " total:", float(sum_marginal(p_uv, ()).values))

# A pair potential carries a probability part and a utility part.
h_uv = Table((u, v), [0, 1, 1, 2], (2, 2))   # h = u + v

ln_pair = lift_ln(p_uv, h_uv)        # (p, h)
maua_pair = lift_maua(p_uv, h_uv)    # (p, p*h)

ln_v = LAURITZEN_NILSSON.marginalize(ln_pair, (v,))
maua_v = MAUA.marginalize(maua_pair, (v,))
print("\nLN marginal on v:   p =", ln_v.p.flat, " h =", ln_v.h.flat, "(conditional means)")
print("Maua marginal on v: p =", maua_v.p.flat, " h =", maua_v.h.flat, "(unnormalized sums)")
print("ratio of Maua parts equals the LN h-part:", np.allclose(maua_v.h.values / maua_v.p.values, ln_v.h.values))

# Pair equality ignores utilities on zero-probability cells.
p0 = Table((u,), [0.0, 1.0], (2,))
a = PairPotential(p0, Table((u,), [99.0, 5.0], (2,)))
b = PairPotential(p0, Table((u,), [-3.0, 5.0], (2,)))
print("\npairs differing only where p = 0 are equal:", pair_equal(a, b))

# Spot-check distributivity for each algebra on random inputs.
rng = np.random.default_rng(1)
for alg in (SUM_PRODUCT, LAURITZEN_NILSSON, MAUA):
    if alg is SUM_PRODUCT:
        x = Table((u, v), rng.uniform(0.1, 1, (2, 2)))
        y = Table((v, w), rng.uniform(0.1, 1, (2, 2)))
    else:
        x = PairPotential(Table((u, v), rng.uniform(0.1, 1, (2, 2))), Table((u, v), rng.normal(size=(2, 2))))
        y = PairPotential(Table((v, w), rng.uniform(0.1, 1, (2, 2))), Table((v, w), rng.normal(size=(2, 2))))
    lhs = alg.marginalize(alg.combine(x, y), (u, v))
    rhs = alg.combine(x, alg.marginalize(y, (v,)))
    print(f"{alg.name:>11}: (x*y) marginalized to x's scope == x * (y marginalized):", alg.equal(lhs, rhs))
