import json
import math

import numpy as np
import pytest

from relent.entropy import DOMAIN_ENTROPY, G, GPRIME, RE
from relent.errors import AlphaTooLarge, FamilyShapeChanged, PreconditionError
from relent.extreal import INF
from relent.finstat import FinStatObject, bang_morphism, morphism_to_json
from relent.harness import (
    DEFAULT_T_SEQUENCE,
    SEMICONTINUITY_FAMILIES,
    GenConfig,
    LawReport,
    cauchy_grid,
    cauchy_square,
    check_cauchy_equation,
    check_convex_linearity,
    check_fp_vanishing,
    check_functoriality,
    check_h_identity,
    check_h_symmetry,
    check_lower_semicontinuity,
    compute_h,
    constant_family,
    direct_relative_entropy,
    find_distinguisher,
    g_value,
    gen_morphism,
    gen_object,
    q_of,
    random_surjection,
    replicate_entropy_square,
    tail_liminf,
)
from relent.stochastic import ProbDist
from tests.conftest import FIXTURES

GOLDEN = FIXTURES / "golden"


class TestGenerators:
    def test_size_one(self):
        obj = gen_object(GenConfig(), 1)
        assert obj.dist.weights.tolist() == [1.0]

    def test_all_zero_rate_gives_point_mass(self):
        w = gen_object(GenConfig(zero_mass_rate=1.0), 2).dist.weights
        assert sorted(w.tolist()) == [0.0, 1.0]

    def test_size_bounds(self):
        with pytest.raises(ValueError):
            gen_object(GenConfig(max_space_size=3), 4)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GenConfig(trials=0)
        with pytest.raises(ValueError):
            GenConfig(max_space_size=0)

    def test_golden_object(self):
        expected = json.loads((GOLDEN / "gen_object_seed42_size3.json").read_text())
        assert gen_object(GenConfig(seed=42), 3).dist.weights.tolist() == expected

    def test_golden_morphism(self):
        expected = json.loads((GOLDEN / "gen_morphism_seed42_4to2.json").read_text())
        assert morphism_to_json(gen_morphism(GenConfig(seed=42), 4, 2)) == expected

    def test_bijective_is_finite(self):
        cfg = GenConfig(zero_mass_rate=0.0)
        for i in range(20):
            m = gen_morphism(cfg, 4, 4, cfg.rng(i, "morphism"))
            assert not RE(m).is_inf

    def test_infinite_branch_is_exercised(self):
        report = check_functoriality(RE, GenConfig(trials=200))
        assert report.notes["infinite_cases"] > 0

    def test_surjection_fallback(self):
        class Stuck:
            def integers(self, lo, hi, size=None):
                return np.zeros(size, dtype=int) if size is not None else 0

            def permutation(self, n):
                return np.arange(n)

        img = random_surjection(Stuck(), 5, 3)
        assert sorted(set(img.tolist())) == [0, 1, 2]


class TestReports:
    def test_determinism(self):
        cfg = GenConfig(seed=9, trials=100)
        assert check_functoriality(RE, cfg).dumps() == check_functoriality(RE, cfg).dumps()

    def test_trial_order_independent(self):
        cfg = GenConfig(seed=3, trials=40)
        full = check_convex_linearity(RE, cfg)
        short = check_convex_linearity(RE, GenConfig(seed=3, trials=20))
        assert short.max_deviation <= full.max_deviation

    def test_golden_report(self):
        # float fields may move by an ulp between the numba and numpy backends
        expected = json.loads((GOLDEN / "lawreport_functoriality_RE_seed1_trials50.json").read_text())
        got = check_functoriality(RE, GenConfig(seed=1, trials=50)).to_json()
        assert _close(got, expected)

    def test_violations_iff_over_tolerance(self):
        r = LawReport("x", "F", 3, 1e-8)
        r.observe(1e-9)
        assert r.passed and r.violations == []
        r.observe(math.inf)
        assert not r.passed and r.to_json()["max_deviation"] == "inf"

    def test_negative_control_witness(self):
        report = check_functoriality(DOMAIN_ENTROPY, GenConfig(trials=30))
        assert not report.passed
        assert report.violations and "morphisms" in report.violations[0]


class TestAxiomChecks:
    @pytest.mark.parametrize("F", [RE, G])
    def test_functoriality(self, F):
        assert check_functoriality(F, GenConfig(trials=200)).passed

    @pytest.mark.parametrize("F", [RE, G])
    def test_convex_linearity_with_endpoints(self, F):
        report = check_convex_linearity(F, GenConfig(trials=200))
        assert report.passed and report.notes["endpoint_trials"] == 40

    @pytest.mark.parametrize("F", [RE, GPRIME, RE + G])
    def test_fp_vanishing(self, F):
        report = check_fp_vanishing(F, GenConfig(trials=200))
        assert report.passed and report.max_deviation <= 1e-10

    def test_gprime_exact_zero_on_fp(self):
        assert check_fp_vanishing(GPRIME, GenConfig(trials=100), tol=0.0).max_deviation <= 1e-15


class TestSemicontinuity:
    @pytest.mark.parametrize("name", sorted(SEMICONTINUITY_FAMILIES))
    def test_re_families(self, name):
        report = check_lower_semicontinuity(RE, SEMICONTINUITY_FAMILIES[name], DEFAULT_T_SEQUENCE, name=name)
        assert report.passed

    def test_vanishing_hypothesis_values(self):
        fam = SEMICONTINUITY_FAMILIES["vanishing-hypothesis"]
        assert RE(fam(0.0)).is_inf
        assert float(RE(fam(1e-3))) == pytest.approx(0.5 * math.log(0.5 / 1e-3) + 0.5 * math.log(0.5 / (1 - 1e-3)))

    def test_jump_down(self):
        fam = SEMICONTINUITY_FAMILIES["jump-down"]
        assert RE(fam(0.0)) == 0.0 and RE(fam(0.01)).is_inf

    def test_vanishing_outcome_limit(self):
        fam = SEMICONTINUITY_FAMILIES["vanishing-outcome"]
        assert float(RE(fam(0.0))) == pytest.approx(0.3 * math.log(0.6) + 0.7 * math.log(1.4), abs=1e-12)

    def test_constant_family_equality(self):
        report = check_lower_semicontinuity(RE, constant_family, DEFAULT_T_SEQUENCE)
        assert report.passed and report.notes["liminf_estimate"] == RE(constant_family(0.0))

    def test_G_fails_semicontinuity(self):
        report = check_lower_semicontinuity(G, SEMICONTINUITY_FAMILIES["vanishing-hypothesis"], DEFAULT_T_SEQUENCE)
        assert not report.passed

    def test_shape_change(self):
        def fam(t):
            n = 2 if t > 0 else 3
            return bang_morphism(FinStatObject.of(ProbDist([str(i) for i in range(n)], [1.0] + [0.0] * (n - 1))),
                                 ProbDist([str(i) for i in range(n)], [1.0 / n] * n))

        with pytest.raises(FamilyShapeChanged):
            check_lower_semicontinuity(RE, fam, [0.1, 0.01])

    def test_tail_estimator(self):
        from relent.extreal import ExtendedReal as E

        assert tail_liminf([E(1.0), E(3.0), E(2.0), E(2.5)]) == E(2.0)
        assert tail_liminf([E(float(k)) for k in range(10)]).is_inf
        assert tail_liminf([E(1 - 2.0 ** -k) for k in range(10)]) == E(1 - 2.0 ** -5)
        assert tail_liminf([INF, INF]).is_inf


class TestCauchy:
    def test_alpha_beta_one(self):
        assert g_value(RE, 1.0) == 0.0
        report = check_cauchy_equation(RE, [1.0], [1.0], log_constant=1.0)
        assert report.passed

    def test_quarter(self):
        assert float(g_value(RE, 0.25)) == pytest.approx(2 * math.log(2), abs=1e-15)
        assert float(g_value(RE, 0.25)) == pytest.approx(2 * float(g_value(RE, 0.5)), abs=1e-15)

    def test_G_is_infinite_inside(self):
        assert g_value(G, 0.3).is_inf and g_value(G, 1.0) == 0.0
        assert check_cauchy_equation(G, [0.3, 1.0], [0.5, 1.0]).passed

    def test_square_commutes(self):
        sq = cauchy_square(0.4, 0.7)
        from relent.finstat import compose_morphisms

        a = compose_morphisms(sq["right"], sq["top"])
        b = compose_morphisms(sq["bottom"], sq["left"])
        assert np.allclose(a.s.entries, b.s.entries, atol=1e-15)

    def test_wrong_constant_is_caught(self):
        assert not check_cauchy_equation(RE, [0.5], [0.5], log_constant=2.0).passed


class TestEntropySquare:
    def test_p_equals_r(self):
        p = ProbDist(("a", "b"), [0.4, 0.6])
        report = replicate_entropy_square(p, p, 0.3)
        assert report.passed and report.notes["direct"] == 0.0

    def test_example(self):
        report = replicate_entropy_square(ProbDist("ab", [0.7, 0.3]), ProbDist("ab", [0.5, 0.5]), 0.25)
        assert report.passed
        assert report.notes["derived"] == pytest.approx(0.7 * math.log(1.4) + 0.3 * math.log(0.6), abs=1e-12)
        assert report.notes["derived"] == pytest.approx(0.0823, abs=1e-4)

    def test_zero_in_p(self):
        report = replicate_entropy_square(ProbDist("abc", [0.5, 0.0, 0.5]), ProbDist("abc", [0.2, 0.3, 0.5]), 0.1)
        assert report.passed and math.isfinite(report.notes["derived"])

    def test_alpha_too_large(self):
        with pytest.raises(AlphaTooLarge):
            replicate_entropy_square(ProbDist("ab", [0.7, 0.3]), ProbDist("ab", [0.5, 0.5]), 0.5)

    def test_needs_full_support(self):
        with pytest.raises(PreconditionError):
            replicate_entropy_square(ProbDist("ab", [0.7, 0.3]), ProbDist("ab", [1.0, 0.0]), 0.1)

    def test_oracle(self):
        assert direct_relative_entropy([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2))


class TestH:
    def test_diagonal(self):
        assert compute_h(0.3, 0.3) == 0.0

    def test_one_half(self):
        assert float(compute_h(1.0, 0.5)) == pytest.approx(math.log(2), abs=1e-15)

    def test_closed_form(self):
        a, b = 0.3, 0.8
        expected = a * math.log(a / b) + (1 - a) * math.log((1 - a) / (1 - b))
        assert float(compute_h(a, b)) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("a, b", [(0.2, 0.6), (0.5, 0.25)])
    def test_identity_examples(self, a, b):
        report = check_h_identity(a, b)
        assert report.max_deviation <= 1e-9

    def test_equal_arguments(self):
        with pytest.raises(PreconditionError):
            check_h_identity(0.4, 0.4)

    def test_symmetry(self):
        assert check_h_symmetry([0.1, 0.25, 0.7]).passed

    def test_q_of(self):
        assert q_of(0.25).weights.tolist() == [0.25, 0.75]


class TestDistinguisher:
    def test_G_vs_RE(self):
        d = find_distinguisher(G, RE, GenConfig(trials=300))
        assert d is not None
        assert "witnesses" in d.to_json()

    @pytest.mark.parametrize("F", [RE, 2 * RE])
    def test_multiples(self, F):
        assert find_distinguisher(F, RE, GenConfig(trials=300)) is None

    def test_gprime_vs_re(self):
        assert find_distinguisher(GPRIME, RE, GenConfig(trials=300)) is not None


def _close(a, b):
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(_close(a[k], b[k]) for k in a)
    if isinstance(a, list):
        return len(a) == len(b) and all(_close(x, y) for x, y in zip(a, b))
    if isinstance(a, float) and isinstance(b, float):
        return abs(a - b) <= 1e-12
    return a == b
