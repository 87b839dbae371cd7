import numpy as np
import pytest

from jtmoments.engine import ShaferShenoy
from jtmoments.errors import EnumerationCapExceeded, ModelError, QueryError
from jtmoments.generators import random_model
from jtmoments.jtree import JunctionTree, chain, star
from jtmoments.moments import (
    Model,
    brute_force_marginal,
    brute_force_moment,
    brute_force_moment_potential,
    conditional_expectation,
    moment_all_vertices,
    moment_brute_force,
    moment_ln,
    moment_maua,
    node_potentials,
)
from jtmoments.tables import Table
from jtmoments.valuation import LAURITZEN_NILSSON, MAUA

from conftest import M1_MOMENT, make_m1

STRATEGIES = [moment_all_vertices, moment_ln, moment_maua]


def coin_model():
    return Model((2,), [Table((0,), [0.5, 0.5], (2,))], [Table((0,), [0, 1], (2,))])


def zero_h(model):
    return Model(model.cards, model.p_factors, [Table(t.scope, np.zeros(t.cards)) for t in model.h_factors],
                 model.tree, model.names)


class TestBruteForce:
    def test_coin(self):
        assert brute_force_moment(coin_model()) == 0.5

    def test_zero_h(self, m1):
        assert brute_force_moment(zero_h(m1)) == 0.0

    def test_m1(self, m1):
        assert brute_force_moment(m1) == pytest.approx(M1_MOMENT, rel=1e-12)

    def test_cap(self, m1):
        with pytest.raises(EnumerationCapExceeded):
            brute_force_moment(m1, cap=7)

    def test_moment_potential(self, m1):
        assert float(brute_force_moment_potential(m1, ()).values) == pytest.approx(M1_MOMENT, rel=1e-12)
        assert np.all(brute_force_moment_potential(zero_h(m1), (1,)).values == 0)
        mv = brute_force_moment_potential(m1, (1,))
        # worked by hand: v=0 -> 0.05 + 0.1 + 0.2; v=1 -> 0.7 + 0.825
        assert np.allclose(mv.flat, [0.35, 1.525], rtol=1e-12)
        assert mv.flat.sum() == pytest.approx(M1_MOMENT, rel=1e-12)


@pytest.mark.parametrize("strategy", STRATEGIES, ids=lambda f: f.__name__)
class TestStrategies:
    def test_zero_h(self, m1, strategy):
        assert strategy(zero_h(m1)).m == 0.0

    @pytest.mark.parametrize("root", [0, 1])
    def test_m1(self, m1, strategy, root):
        res = strategy(m1, root=root)
        assert res.Z == pytest.approx(1.0, rel=1e-12)
        assert res.m == pytest.approx(M1_MOMENT, rel=1e-9)

    def test_single_clique(self, strategy):
        p = Table((0, 1), [0.1, 0.4, 0.2, 0.3], (2, 2))
        h = Table((0, 1), [3, -1, 2, 5], (2, 2))
        model = Model((2, 2), [p], [h])
        direct = float((p.values * h.values).sum())
        res = strategy(model)
        assert res.m == pytest.approx(direct, rel=1e-12)
        assert res.stats.messages_computed == 0

    def test_scaled_p(self, m1, strategy):
        res = strategy(m1.scaled(0, 2.0))
        assert res.Z == pytest.approx(2.0, rel=1e-12)
        assert res.m == pytest.approx(M1_MOMENT, rel=1e-9)


def test_raw_h_parts_on_scaled_model(m1):
    scaled = m1.scaled(0, 2.0)
    assert moment_ln(scaled).h_part == pytest.approx(1.875, rel=1e-12)
    assert moment_maua(scaled).h_part == pytest.approx(3.75, rel=1e-12)
    assert brute_force_moment(scaled) == pytest.approx(3.75, rel=1e-12)


def test_all_vertices_retains_everything(m1):
    res = moment_all_vertices(m1)
    assert res.stats.marginals_retained == 2
    assert res.stats.peak_live == 2
    assert len(res.marginals) == 2


def test_unmatched_h_factor_gets_ones_p_part(m1):
    extra = Table((2,), [10.0, -4.0], (2,))
    model = Model(m1.cards, m1.p_factors, m1.h_factors + [extra], m1.tree, m1.names)
    expected = brute_force_moment(model)
    assert expected == pytest.approx(M1_MOMENT + 10 * 0.325 - 4 * 0.675, rel=1e-12)
    for strategy in STRATEGIES:
        assert strategy(model).m == pytest.approx(expected, rel=1e-9)


def test_built_tree_matches(m1):
    model = make_m1(tree=False)
    for strategy in STRATEGIES:
        assert strategy(model).m == pytest.approx(M1_MOMENT, rel=1e-9)


def test_uncovered_factor_rejected(m1):
    bad = Model(m1.cards, m1.p_factors + [Table((0, 2), np.ones((2, 2)))], m1.h_factors, m1.tree)
    with pytest.raises(ModelError):
        moment_ln(bad)


class TestConditionalExpectation:
    def test_empty_scope_is_moment(self, m1):
        assert float(conditional_expectation(m1, ()).values) == pytest.approx(M1_MOMENT, rel=1e-12)

    def test_m1_given_v(self, m1):
        got = conditional_expectation(m1, (1,))
        expected = brute_force_moment_potential(m1, (1,)).values / brute_force_marginal(m1, (1,)).values
        assert np.allclose(got.values, expected, rtol=1e-12)

    def test_given_full_node(self, m1):
        got = conditional_expectation(m1, (1, 2))
        expected = brute_force_moment_potential(m1, (1, 2)).values / brute_force_marginal(m1, (1, 2)).values
        assert np.allclose(got.values, expected, rtol=1e-12)

    def test_deterministic_model(self):
        # all mass on (u, v, w) = (1, 0, 1)
        p_uv = Table((0, 1), [0, 0, 1, 0], (2, 2))
        p_vw = Table((1, 2), [0, 1, 0, 0], (2, 2))
        h_uv = Table((0, 1), [5, 6, 7, 8], (2, 2))
        h_vw = Table((1, 2), [1, 2, 3, 4], (2, 2))
        model = Model((2, 2, 2), [p_uv, p_vw], [h_uv, h_vw], chain([(0, 1), (1, 2)]))
        got = conditional_expectation(model, (0, 1))
        assert got.flat.tolist() == [0.0, 0.0, 9.0, 0.0]

    def test_not_covered(self, m1):
        with pytest.raises(QueryError):
            conditional_expectation(m1, (0, 2))


def test_three_way_agreement(rng):
    for _ in range(60):
        model = random_model(rng)
        expected = brute_force_moment(model)
        for strategy in STRATEGIES:
            assert strategy(model).m == pytest.approx(expected, rel=1e-9, abs=1e-12)


def message_pairs(model):
    out = {}
    for alg in (LAURITZEN_NILSSON, MAUA):
        eng = ShaferShenoy(model.junction_tree, node_potentials(model, alg), alg)
        eng.all_marginals()
        out[alg.name] = eng.store.messages
    return out["ln"], out["maua"]


def test_cross_algebra_messages(rng):
    for _ in range(40):
        model = random_model(rng)
        ln, maua = message_pairs(model)
        assert ln.keys() == maua.keys()
        for edge in ln:
            a, b = ln[edge], maua[edge]
            assert np.allclose(a.p.values, b.p.values, rtol=1e-12, atol=0)
            support = b.p.values > 1e-9
            assert np.allclose(a.h.values[support], b.h.values[support] / b.p.values[support], rtol=1e-9, atol=1e-12)


def test_root_and_placement_invariance(rng):
    for _ in range(30):
        model = random_model(rng)
        tree = model.junction_tree
        ref = brute_force_moment(model)
        for strategy in (moment_ln, moment_maua):
            for r in range(len(tree)):
                assert strategy(model, root=r).m == pytest.approx(ref, rel=1e-9, abs=1e-12)
        placement = [int(rng.choice(tree.covering_nodes(fp.scope))) for fp in model.factor_pairs]
        for strategy in STRATEGIES:
            assert strategy(model, placement=placement).m == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_bad_placement(m1):
    with pytest.raises(ModelError):
        moment_ln(m1, placement=[1, 1])
    with pytest.raises(ModelError):
        moment_ln(m1, placement=[0])


@pytest.mark.parametrize("d", [3, 4, 5])
def test_center_message_cost(d, rng):
    tree = star((0,), [(0, i) for i in range(1, d + 1)])
    p = [Table(n, rng.uniform(0.1, 1, (2,) * len(n))) for n in tree.nodes]
    h = [Table(n, rng.uniform(-1, 1, (2,) * len(n))) for n in tree.nodes]
    model = Model((2,) * (d + 1), p, h, tree)
    ops = {}
    for alg in (LAURITZEN_NILSSON, MAUA):
        eng = ShaferShenoy(tree, node_potentials(model, alg), alg)
        eng.all_marginals()
        ops[alg.name] = eng.store.message_ops[(0, 1)]
    assert ops["maua"] > ops["ln"] > 0


class TestZeroProbability:
    def models(self, rng, n=40):
        return [random_model(rng, zero_fraction=0.4) for _ in range(n)]

    def test_no_nan_and_agreement(self, rng):
        for model in self.models(rng):
            ref = moment_brute_force(model)
            for strategy in STRATEGIES:
                res = strategy(model)
                assert np.isfinite(res.Z) and np.isfinite(res.m)
                assert res.m == pytest.approx(ref.m, rel=1e-9, abs=1e-12)
            ln, maua = message_pairs(model)
            for msg in list(ln.values()) + list(maua.values()):
                assert np.all(np.isfinite(msg.p.values)) and np.all(np.isfinite(msg.h.values))
            tree = model.junction_tree
            for (a, b), msg in ln.items():
                if tree.separator(a, b) != tree.nodes[a]:
                    assert np.all(msg.h.values[msg.p.values == 0] == 0.0)

    def test_ln_marginal_zero_denominator_is_exactly_zero(self, rng):
        from jtmoments.generators import random_pair
        for _ in range(200):
            a = random_pair(rng, (0, 1, 2), (2, 2, 2), zero_fraction=0.6)
            for target in [(0,), (1, 2), ()]:
                out = LAURITZEN_NILSSON.marginalize(a, target)
                assert np.all(np.isfinite(out.h.values))
                assert np.all(out.h.values[out.p.values == 0] == 0.0)

    def test_all_zero_model(self):
        model = Model((2,), [Table((0,), [0, 0], (2,))], [Table((0,), [3, 4], (2,))])
        for strategy in STRATEGIES:
            res = strategy(model)
            assert res.Z == 0.0 and res.m == 0.0
