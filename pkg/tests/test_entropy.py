import math

import numpy as np
import pytest

from relent.entropy import (
    DOMAIN_ENTROPY,
    G,
    GIBBS_TOL,
    GPRIME,
    INFO_LOSS,
    RE,
    parse_functor,
    relative_entropy,
    scaled_sum_functor,
)
from relent.errors import SpaceMismatch
from relent.extreal import INF, ZERO, ExtendedReal
from relent.finstat import (
    FinStatObject,
    bang_morphism,
    identity_morphism,
    optimal_hypothesis,
    reduce_to_bang,
)
from relent.harness import GenConfig, check_convex_linearity, check_functoriality, gen_fp_morphism, gen_random_morphism
from relent.stochastic import FiniteFunction, FiniteSet, ProbDist

AB = FiniteSet(("0", "1"))


def d(*w):
    return ProbDist(FiniteSet.range(len(w)), list(w))


def bang(q, hyp):
    return bang_morphism(FinStatObject.of(d(*q)), d(*hyp))


class TestRelativeEntropy:
    def test_equal_is_zero(self):
        assert relative_entropy(d(0.25, 0.25, 0.25, 0.25), d(0.25, 0.25, 0.25, 0.25)) == ZERO

    def test_ln2(self):
        assert float(relative_entropy(d(1.0, 0.0), d(0.5, 0.5))) == pytest.approx(math.log(2), abs=1e-15)

    def test_infinite(self):
        assert relative_entropy(d(0.5, 0.5), d(1.0, 0.0)).is_inf

    def test_half_quarter(self):
        v = float(relative_entropy(d(0.5, 0.5), d(0.25, 0.75)))
        assert v == pytest.approx(0.5 * math.log(2) + 0.5 * math.log(2 / 3), abs=1e-15)
        assert v == pytest.approx(0.1438410, abs=1e-7)

    def test_zero_zero_term(self):
        assert float(relative_entropy(d(0.5, 0.5, 0.0), d(0.5, 0.5, 0.0))) == 0.0

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatch):
            relative_entropy(d(1.0), ProbDist(("a",), [1.0]))

    def test_gibbs(self, rng):
        # pairs are either identical or independent draws, so the two sides
        # of the equivalence are never near their thresholds
        for i in range(10_000):
            n = int(rng.integers(1, 9))
            q = rng.dirichlet(np.ones(n))
            p = q.copy() if i % 2 else rng.dirichlet(np.ones(n))
            v = relative_entropy(d(*q), d(*p))
            assert v.is_inf or float(v) >= -1e-12
            close = np.max(np.abs(q - p)) <= 1e-7
            assert (float(v) <= GIBBS_TOL) == close


class TestFunctors:
    def test_re_fp_vanishes(self):
        cfg = GenConfig()
        for i in range(200):
            assert float(RE(gen_fp_morphism(cfg, cfg.rng(i, "fp-vanishing")))) <= 1e-10

    @pytest.mark.parametrize("alpha", [1.0, 0.9, 0.5, 0.1, 1e-6])
    def test_re_eq3_is_minus_log(self, alpha):
        v = RE(bang((1.0, 0.0), (alpha, 1 - alpha)))
        assert float(v) == pytest.approx(-math.log(alpha), abs=1e-12)

    def test_re_identity(self):
        assert RE(identity_morphism(FinStatObject.of(d(0.2, 0.8)))) == ZERO

    def test_reduce_to_bang_exact(self):
        cfg = GenConfig(zero_mass_rate=0.2)
        for i in range(300):
            m = gen_random_morphism(cfg, cfg.rng(i, "morphism"))
            assert RE(m) == RE(reduce_to_bang(m))

    def test_G_values(self):
        assert G(optimal_hypothesis(FiniteFunction.constant(AB), d(0.3, 0.7))) == ZERO
        assert G(bang((0.5, 0.5), (0.25, 0.75))) == ZERO
        assert float(RE(bang((0.5, 0.5), (0.25, 0.75)))) == pytest.approx(0.1438410, abs=1e-7)
        assert G(bang((1.0, 0.0), (0.5, 0.5))) == INF

    def test_Gprime_values(self):
        assert GPRIME(optimal_hypothesis(FiniteFunction.constant(AB), d(0.3, 0.7))) == ZERO
        m = bang((0.5, 0.5), (0.25, 0.75))
        assert GPRIME(m) == RE(m)
        m = bang((0.0, 1.0), (0.5, 0.5))
        assert float(RE(m)) == pytest.approx(math.log(2)) and GPRIME(m) == INF

    def test_scaled_sums(self):
        m = bang((1.0, 0.0), (0.5, 0.5))
        F = scaled_sum_functor([(1.0, RE), (0.0, G)])
        assert F(m) == RE(m)
        fp = optimal_hypothesis(FiniteFunction.constant(AB), d(0.3, 0.7))
        assert (INF * RE)(fp) == ZERO
        both = RE + G
        assert float(both(bang((0.5, 0.5), (0.25, 0.75)))) == pytest.approx(0.1438410, abs=1e-7)
        assert both(m) == INF

    def test_parse(self):
        assert parse_functor("RE") is RE
        assert parse_functor("2*RE+G").name == "2*RE+1*G"
        assert parse_functor("inf*RE").tolerance == 0.0
        with pytest.raises(ValueError):
            parse_functor("KL")

    def test_G_laws_exact(self):
        cfg = GenConfig(trials=300, zero_mass_rate=0.3)
        assert check_functoriality(G, cfg).passed
        assert check_convex_linearity(G, cfg).passed


class TestNegativeControls:
    def test_domain_entropy_breaks_additivity(self):
        assert not check_functoriality(DOMAIN_ENTROPY, GenConfig(trials=50)).passed

    def test_info_loss_is_additive_but_not_zero_on_fp(self):
        cfg = GenConfig(trials=50)
        assert check_functoriality(INFO_LOSS, cfg).passed
        fp = optimal_hypothesis(FiniteFunction.constant(AB), d(0.5, 0.5))
        assert float(INFO_LOSS(fp)) == pytest.approx(math.log(2))


def test_extended_scalar_rule_shared_with_operad():
    from relent.operad import extended_real_algebra, star

    alg = extended_real_algebra()
    assert star(0, INF, ExtendedReal(3), alg) == ExtendedReal(3)
    assert (0.0 * G)(bang((1.0, 0.0), (0.5, 0.5))) == ZERO
