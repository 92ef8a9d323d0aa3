import json

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings, strategies as st

from stackcover import (
    AttackLinearForm,
    DimensionMismatch,
    IndexOutOfRange,
    NegativeValuation,
    NonPositiveOmega,
    TargetProfile,
    TooFewTargets,
    ValidationError,
    expected_payoffs,
    follower_payoff_form,
    leader_payoff_form,
    omega,
    reduce_form,
    validate_scenario,
)
from stackcover._validation import check_strategy

from conftest import random_scenario, random_simplex

D_STAR = (0.0, 0.1818, 0.6515, 0.1667)


def outcome_enumeration(defence, attack, scenario):
    """Expected payoffs by summing over (attacked target, protected or not)."""
    leader = follower = 0.0
    for j, t in enumerate(scenario.targets):
        for protected, prob in ((True, defence[j]), (False, 1.0 - defence[j])):
            w = attack[j] * prob
            if protected:
                leader += w * t.reward_defender
                follower += w * -t.cost_attacker
            else:
                leader += w * -t.cost_defender
                follower += w * t.reward_attacker
    return leader, follower


class TestValidateScenario:
    def test_example_table(self, table_path):
        with open(table_path) as fh:
            sc = validate_scenario(json.load(fh))
        assert sc.n_targets == 4
        assert sc.resource_count == 5

    def test_all_zero_target(self):
        raw = {"resources": 1, "targets": [
            {"reward_defender": 0, "cost_defender": 0, "reward_attacker": 0, "cost_attacker": 0},
            {"reward_defender": 1, "cost_defender": 1, "reward_attacker": 1, "cost_attacker": 1},
        ]}
        with pytest.raises(NonPositiveOmega):
            validate_scenario(raw)

    def test_single_target(self):
        raw = {"resources": 1, "targets": [
            {"reward_defender": 1, "cost_defender": 1, "reward_attacker": 1, "cost_attacker": 1},
        ]}
        with pytest.raises(TooFewTargets):
            validate_scenario(raw)

    def test_negative_valuation(self):
        with pytest.raises(NegativeValuation):
            TargetProfile(1, -1, 1, 1)

    @pytest.mark.parametrize("bad", [{"extra": 1}, {"reward_defender": "9"}])
    def test_malformed_target(self, bad):
        t = {"reward_defender": 1, "cost_defender": 1, "reward_attacker": 1, "cost_attacker": 1}
        t.update(bad)
        with pytest.raises(ValidationError):
            validate_scenario({"resources": 1, "targets": [t, t]})

    @pytest.mark.parametrize("m", [0, 1.5, True])
    def test_bad_resource_count(self, m):
        t = {"reward_defender": 1, "cost_defender": 1, "reward_attacker": 1, "cost_attacker": 1}
        with pytest.raises(ValidationError):
            validate_scenario({"resources": m, "targets": [t, t]})


class TestOmega:
    def test_table_values(self, table):
        om = omega(table)
        npt.assert_array_equal(om.omega_defender, [16, 15, 13, 6])
        npt.assert_array_equal(om.omega_attacker, [6, 11, 10, 6])

    def test_unit_profiles(self):
        sc = validate_scenario({"resources": 2, "targets": [
            {"reward_defender": 1, "cost_defender": 0, "reward_attacker": 1, "cost_attacker": 0}] * 3})
        om = omega(sc)
        npt.assert_array_equal(om.omega_defender, 1.0)
        npt.assert_array_equal(om.omega_attacker, 1.0)

    def test_random_resummation(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            sc = random_scenario(rng)
            om = omega(sc)
            for j, t in enumerate(sc.targets):
                assert om.omega_defender[j] == t.reward_defender + t.cost_defender
                assert om.omega_attacker[j] == t.reward_attacker + t.cost_attacker


class TestExpectedPayoffs:
    def test_corner_profile(self, table):
        assert expected_payoffs([1, 0, 0, 0], [1, 0, 0, 0], table) == (9.0, -2.0)

    def test_pivot_attack_at_induction_point(self, table):
        leader, follower = expected_payoffs(D_STAR, [0, 0, 1, 0], table)
        assert leader == pytest.approx(2.4697, abs=1e-3)
        assert follower == pytest.approx(0.4848, abs=1e-3)

    def test_matches_outcome_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            sc = random_scenario(rng)
            d, a = random_simplex(rng, sc.n_targets), random_simplex(rng, sc.n_targets)
            npt.assert_allclose(expected_payoffs(d, a, sc), outcome_enumeration(d, a, sc),
                                rtol=0, atol=1e-12)

    def test_unattacked_target_contributes_nothing(self, table):
        d = np.array(D_STAR)
        a = np.array([0.5, 0.5, 0.0, 0.0])
        base = expected_payoffs(d, a, table)
        targets = list(table.targets)
        targets[2] = TargetProfile(100, 50, 70, 3)
        assert expected_payoffs(d, a, type(table)(tuple(targets), 5)) == base

    def test_dimension_mismatch(self, table):
        with pytest.raises(DimensionMismatch):
            expected_payoffs([0.5, 0.5], [1, 0, 0, 0], table)

    def test_attack_must_be_on_simplex(self, table):
        with pytest.raises(ValidationError, match="sum to 1"):
            expected_payoffs([0.25] * 4, [0.3, 0.3, 0.3, 0.0], table)

    def test_bilinear(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            sc = random_scenario(rng)
            n = sc.n_targets
            d0, d1, a0, a1 = (random_simplex(rng, n) for _ in range(4))
            mid = np.array(expected_payoffs((d0 + d1) / 2, a0, sc))
            ends = (np.array(expected_payoffs(d0, a0, sc)) + np.array(expected_payoffs(d1, a0, sc))) / 2
            npt.assert_allclose(mid, ends, atol=1e-9)
            mid = np.array(expected_payoffs(d0, (a0 + a1) / 2, sc))
            ends = (np.array(expected_payoffs(d0, a0, sc)) + np.array(expected_payoffs(d0, a1, sc))) / 2
            npt.assert_allclose(mid, ends, atol=1e-9)


class TestPayoffForms:
    def test_leader_at_induction_point(self, table):
        form = leader_payoff_form(D_STAR, table)
        npt.assert_allclose(form.coefficients, [-7, -4.2727, 2.4697, -1], atol=5e-3)

    def test_leader_unprotected(self, table):
        form = leader_payoff_form([0, 0, 0, 0], table)
        npt.assert_array_equal(form.coefficients, -table.cost_defender)

    def test_follower_unprotected(self, table):
        form = follower_payoff_form([0, 0, 0, 0], table)
        npt.assert_array_equal(form.coefficients, table.reward_attacker)

    def test_follower_reduced_at_induction_point(self, table):
        red = reduce_form(follower_payoff_form(D_STAR, table), 2)
        npt.assert_allclose(red.coefficients[[0, 1, 3]], 3.515, atol=5e-3)
        assert red.constant == pytest.approx(0.485, abs=5e-3)

    def test_forms_agree_with_expected_payoffs(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            sc = random_scenario(rng)
            d, a = random_simplex(rng, sc.n_targets), random_simplex(rng, sc.n_targets)
            leader, follower = expected_payoffs(d, a, sc)
            assert abs(leader_payoff_form(d, sc)(a) - leader) <= 1e-12
            assert abs(follower_payoff_form(d, sc)(a) - follower) <= 1e-12


class TestReduceForm:
    def test_uniform_form(self):
        for k in range(4):
            red = reduce_form(AttackLinearForm([2.5] * 4), k)
            npt.assert_array_equal(red.coefficients, 0.0)
            assert red.constant == 2.5

    def test_table_rewrite(self):
        red = reduce_form(AttackLinearForm([-5.986, -3.753, 0.371, -0.62]), 2)
        npt.assert_allclose(red.coefficients, [-6.357, -4.124, 0, -0.991], atol=1e-12)
        assert red.constant == pytest.approx(0.371)

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            reduce_form(AttackLinearForm([1, 2]), 2)

    @settings(max_examples=200, deadline=None)
    @given(
        st.integers(2, 6).flatmap(lambda n: st.tuples(
            st.lists(st.floats(-50, 50), min_size=n, max_size=n),
            st.floats(-10, 10),
            st.integers(0, n - 1),
            st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n),
        ))
    )
    def test_equivalence_on_simplex(self, args):
        coef, const, k, weights = args
        form = AttackLinearForm(coef, const)
        a = np.array(weights) / np.sum(weights)
        assert abs(reduce_form(form, k)(a) - form(a)) <= 1e-12 * max(1.0, np.abs(coef).max())


class TestStrategyValidation:
    def test_renormalizes_within_tolerance(self):
        v = check_strategy([0.5, 0.5 + 5e-10])
        assert v.sum() == pytest.approx(1.0, abs=1e-15)

    def test_rejects_outside_tolerance(self):
        with pytest.raises(ValidationError):
            check_strategy([0.5, 0.5 + 1e-6])

    def test_rejects_out_of_box(self):
        with pytest.raises(ValidationError):
            check_strategy([1.5, -0.5])
