import numpy as np
import pytest

from jtmoments.jtree import chain
from jtmoments.moments import Model
from jtmoments.tables import Table

U, V, W = 0, 1, 2

# Golden chain model: p_{uv} then p_{w|v}; h = (u + v) + w.
M1_P_UV = [0.1, 0.4, 0.2, 0.3]
M1_P_VW = [0.5, 0.5, 0.25, 0.75]
M1_H_UV = [0, 1, 1, 2]
M1_H_VW = [0, 1, 0, 1]
# sum over the 8 joint cells of p*h, worked by hand:
# E[u] = 0.5, E[v] = 0.7, E[w] = 0.3*0.5 + 0.7*0.75 = 0.675
M1_MOMENT = 1.875


def make_m1(tree=True):
    return Model(
        (2, 2, 2),
        [Table((U, V), M1_P_UV, (2, 2)), Table((V, W), M1_P_VW, (2, 2))],
        [Table((U, V), M1_H_UV, (2, 2)), Table((V, W), M1_H_VW, (2, 2))],
        chain([(U, V), (V, W)]) if tree else None,
        ("u", "v", "w"),
    )


@pytest.fixture
def m1():
    return make_m1()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
