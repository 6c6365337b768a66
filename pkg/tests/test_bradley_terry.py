import numpy as np
import pytest
from numpy.testing import assert_allclose

from pairrank.bradley_terry import (AbilityVector, bt_covariance, bt_deviance,
                                    fit_bt, predict_prob)
from pairrank.counts import CountMatrix
from pairrank.errors import (ConnectivityError, DomainError, SeparationError)

from oracles import bt_mle, random_counts

WORKED = np.array([[0, 1, 1], [2, 0, 2], [4, 4, 0]], float)


class TestFit:
    def test_two_players_closed_form(self):
        # 3 wins vs 1: odds ratio 3, so mu = (log 3)/2 * (1, -1)
        fit = fit_bt([[0, 3], [1, 0]])
        assert_allclose(fit.abilities.mu, [np.log(3) / 2, -np.log(3) / 2],
                        atol=1e-9)
        assert fit.converged

    def test_balanced_counts_give_zero(self):
        fit = fit_bt(np.full((4, 4), 2.0))
        assert_allclose(fit.abilities.mu, np.zeros(4), atol=1e-10)

    def test_worked_example_recovers_log_weights(self):
        fit = fit_bt(WORKED)
        expected = np.log([1, 2, 4])
        expected -= expected.mean()
        assert_allclose(fit.abilities.mu, expected, atol=1e-8)
        assert fit.deviance == pytest.approx(0.0, abs=1e-10)

    def test_matches_independent_optimizer(self):
        rng = np.random.default_rng(8)
        for n in (3, 5, 8):
            C = random_counts(rng, n, low=1.0, high=12.0)
            fit = fit_bt(C)
            assert_allclose(fit.abilities.mu, bt_mle(C), atol=1e-6)

    def test_gradient_vanishes_at_fit(self):
        rng = np.random.default_rng(14)
        C = random_counts(rng, 6, low=1.0, high=9.0)
        mu = fit_bt(C).abilities.mu
        h = 1e-6
        for u in range(6):
            e = np.zeros(6)
            e[u] = h
            up = bt_deviance(C, mu + e - (mu + e).mean())
            dn = bt_deviance(C, mu - e - (mu - e).mean())
            assert abs(up - dn) / (2 * h) < 1e-3

    def test_sum_zero_gauge(self):
        rng = np.random.default_rng(19)
        C = random_counts(rng, 5, low=1.0, high=6.0)
        assert fit_bt(C).abilities.mu.sum() == pytest.approx(0.0, abs=1e-10)

    def test_diagonal_is_ignored(self):
        C = WORKED.copy()
        np.fill_diagonal(C, [5.0, 7.0, 11.0])
        assert_allclose(fit_bt(C).abilities.mu, fit_bt(WORKED).abilities.mu,
                        atol=1e-12)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(25)
        C = random_counts(rng, 5, low=1.0, high=9.0)
        perm = np.array([3, 0, 4, 1, 2])
        mu = fit_bt(C).abilities.mu
        mu_p = fit_bt(C[np.ix_(perm, perm)]).abilities.mu
        assert_allclose(mu_p, mu[perm], atol=1e-9)

    def test_disconnected_components_error(self):
        C = np.zeros((4, 4))
        C[0, 1] = C[1, 0] = 2.0
        C[2, 3] = C[3, 2] = 2.0
        with pytest.raises(ConnectivityError) as exc:
            fit_bt(CountMatrix(C, ("a", "b", "c", "d")))
        assert exc.value.components == (("a", "b"), ("c", "d"))

    def test_undefeated_player_error(self):
        C = np.array([[0, 2, 2], [0, 0, 2], [0, 1, 0]], float)
        with pytest.raises(SeparationError) as exc:
            fit_bt(CountMatrix(C, ("a", "b", "c")))
        assert exc.value.label == "a"

    def test_winless_player_error(self):
        # player b beats nobody
        C = np.array([[0, 2, 2], [0, 0, 0], [1, 3, 0]], float)
        with pytest.raises(SeparationError) as exc:
            fit_bt(CountMatrix(C, ("a", "b", "c")))
        assert exc.value.label == "b"


class TestCovariance:
    def test_two_player_closed_form(self):
        # 4 games at even strength: F = (n/4) [[1,-1],[-1,1]], pinv scaled
        cov = bt_covariance([[0, 2], [2, 0]], np.zeros(2))
        assert_allclose(cov, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-12)

    def test_round_robin_closed_form(self):
        # every pair 2 games at mu=0: matches 2(n-1)/(kn^2), -2/(kn^2)
        n, k = 4, 1
        C = np.full((n, n), float(k))
        cov = bt_covariance(C, np.zeros(n))
        expected = np.full((n, n), -2 / (k * n * n))
        np.fill_diagonal(expected, 2 * (n - 1) / (k * n * n))
        assert_allclose(cov, expected, atol=1e-12)

    def test_rows_sum_to_zero(self):
        rng = np.random.default_rng(31)
        C = random_counts(rng, 6, low=1.0, high=9.0)
        cov = bt_covariance(C, fit_bt(C).abilities.mu)
        assert_allclose(cov @ np.ones(6), np.zeros(6), atol=1e-10)

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(33)
        C = random_counts(rng, 7, low=1.0, high=9.0)
        cov = bt_covariance(C, np.zeros(7))
        vals = np.linalg.eigvalsh(cov)
        assert vals.min() >= -1e-12


class TestDeviance:
    def test_even_strength_example(self):
        val = bt_deviance([[0, 3], [1, 0]], np.zeros(2))
        expected = 2 * (3 * np.log(3 / 2) + np.log(1 / 2))
        assert val == pytest.approx(expected, abs=1e-12)

    def test_zero_counts_contribute_nothing(self):
        val = bt_deviance([[0, 2, 0], [2, 0, 1], [0, 3, 0]], np.zeros(3))
        # only pairs (0,1) and (1,2) played
        expected = 2 * (1 * np.log(1 / 2) + 3 * np.log(3 / 2))
        assert val == pytest.approx(expected, abs=1e-12)

    def test_saturated_fit_has_zero_deviance(self):
        rng = np.random.default_rng(40)
        C = random_counts(rng, 5, low=1.0, high=9.0)
        fit = fit_bt(C)
        assert bt_deviance(C, fit.abilities) >= 0  # not saturated in general
        d = np.exp(fit.abilities.mu)
        S = np.add.outer(d, d)
        saturated = np.outer(d, np.ones(5)) * 4 / S  # c_ij = 4 p_ij
        np.fill_diagonal(saturated, 0.0)
        assert bt_deviance(saturated, fit.abilities) == pytest.approx(
            0.0, abs=1e-10)


class TestPredict:
    def test_even_strength(self):
        mu = AbilityVector(np.zeros(2), ("a", "b"))
        assert predict_prob(mu, 0, 1) == pytest.approx(0.5)

    def test_log_three_gap(self):
        g = np.log(3) / 2
        mu = AbilityVector([g, -g], ("a", "b"))
        assert predict_prob(mu, 0, 1) == pytest.approx(0.75, abs=1e-12)

    def test_exact_complement(self):
        rng = np.random.default_rng(50)
        for _ in range(200):
            mu = rng.normal(size=4)
            mu -= mu.mean()
            ab = AbilityVector(mu, ("a", "b", "c", "d"))
            i, j = rng.choice(4, size=2, replace=False)
            assert predict_prob(ab, int(i), int(j)) + \
                predict_prob(ab, int(j), int(i)) == 1.0

    def test_self_comparison_rejected(self):
        mu = AbilityVector(np.zeros(3), ("a", "b", "c"))
        with pytest.raises(DomainError):
            predict_prob(mu, 1, 1)

    def test_worked_example_strongest_vs_weakest(self):
        mu = np.log([1.0, 2.0, 4.0])
        mu -= mu.mean()
        ab = AbilityVector(mu, ("a", "b", "c"))
        assert predict_prob(ab, 2, 0) == pytest.approx(0.8, abs=1e-12)
