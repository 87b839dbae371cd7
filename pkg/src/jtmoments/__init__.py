"""Local computation on junction trees and first-order moments of
additive functions under multiplicatively factorized distributions."""

from importlib import resources

from .engine import MessageStore, ShaferShenoy, Stats, all_marginals, collect, message, normalize, stats
from .errors import (
    DomainError,
    EnumerationCapExceeded,
    JTMomentsError,
    ModelError,
    ProtocolError,
    QueryError,
    ScopeError,
)
from .jtree import JunctionTree, build, neighbors, validate
from .moments import (
    Model,
    MomentResult,
    brute_force_moment,
    brute_force_moment_potential,
    conditional_expectation,
    moment_all_vertices,
    moment_ln,
    moment_maua,
)
from .tables import Configuration, Table, sum_marginal, table_eval, table_product, table_sum
from .valuation import (
    LAURITZEN_NILSSON,
    MAUA,
    SUM_PRODUCT,
    PairPotential,
    ValuationAlgebra,
    lift_ln,
    lift_maua,
    ln_combine,
    ln_marginalize,
    maua_combine,
    maua_marginalize,
    pair_equal,
)

__version__ = "0.1.0"


def bundled_model_path(name: str):
    """Path of a model file shipped in ``jtmoments/data`` (e.g. ``"m1.json"``)."""
    return resources.files(__name__).joinpath("data", name)
