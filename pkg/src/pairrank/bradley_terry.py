"""Bradley-Terry maximum-likelihood fitting by minorization-maximization.

Model: P(i beats j) = logistic(mu_i - mu_j) with the sum-zero gauge
sum_i mu_i = 0. The MM update on the odds scale gamma = exp(mu) is

    gamma_i <- W_i / sum_{j != i} n_ij / (gamma_i + gamma_j)

with W_i the total wins of i and n_ij = c_ij + c_ji the games between the
pair. Each sweep renormalizes to the gauge, and convergence is declared on
the max-norm change of mu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counts import CountMatrix, as_count_matrix
from .errors import (ConnectivityError, ConvergenceError, DimensionError,
                     DomainError, SeparationError)
from .linalg import pseudoinverse

DEFAULT_FIT_TOL = 1e-10
DEFAULT_FIT_MAX_ITER = 10_000


@dataclass(frozen=True)
class AbilityVector:
    """Sum-zero log-ability parameters aligned with labels."""

    mu: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        if mu.ndim != 1 or mu.shape[0] != len(self.labels):
            raise DimensionError(
                f"{mu.shape} abilities for {len(self.labels)} labels")
        if not np.all(np.isfinite(mu)):
            raise DomainError("abilities contain non-finite entries")
        if abs(mu.sum()) > 1e-8 * max(1.0, np.abs(mu).max()):
            raise DomainError(
                f"abilities must sum to zero, got {mu.sum():.6g}")
        mu.flags.writeable = False
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class FitReport:
    abilities: AbilityVector
    covariance: np.ndarray
    deviance: float
    iterations: int
    converged: bool


def _logistic(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _components(active: np.ndarray) -> list[list[int]]:
    n = active.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            u = stack.pop()
            new = np.flatnonzero(active[u] & ~seen)
            seen[new] = True
            comp.extend(new.tolist())
            stack.extend(new.tolist())
        comps.append(sorted(comp))
    return comps


def _check_fittable(C: CountMatrix) -> None:
    counts = C.counts.copy()
    np.fill_diagonal(counts, 0.0)
    games = counts + counts.T
    comps = _components(games > 0)
    if len(comps) > 1:
        raise ConnectivityError([[C.labels[i] for i in comp] for comp in comps])
    wins = counts.sum(axis=1)
    losses = counts.sum(axis=0)
    for i in range(C.n):
        if wins[i] == 0:
            raise SeparationError(C.labels[i], "no wins")
        if losses[i] == 0:
            raise SeparationError(C.labels[i], "no losses")


def fit_bt(C, tol: float = DEFAULT_FIT_TOL,
           max_iter: int = DEFAULT_FIT_MAX_ITER) -> FitReport:
    """Fit sum-zero abilities by MM iteration.

    Requires a connected comparison graph and at least one win and one loss
    per player (otherwise the MLE does not exist). Self-comparisons on the
    diagonal are ignored.
    """
    C = as_count_matrix(C)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if C.n < 2:
        raise DomainError("need at least two players to fit")
    _check_fittable(C)
    counts = C.counts.copy()
    np.fill_diagonal(counts, 0.0)
    games = counts + counts.T
    wins = counts.sum(axis=1)
    n = C.n
    gamma = np.ones(n)
    mu = np.zeros(n)
    for it in range(1, max_iter + 1):
        denom = (games / np.add.outer(gamma, gamma)).sum(axis=1)
        gamma = wins / denom
        mu_new = np.log(gamma)
        mu_new -= mu_new.mean()
        gamma = np.exp(mu_new)
        delta = float(np.max(np.abs(mu_new - mu)))
        mu = mu_new
        if delta < tol:
            abilities = AbilityVector(mu - mu.mean(), C.labels)
            return FitReport(
                abilities=abilities,
                covariance=bt_covariance(C, abilities),
                deviance=bt_deviance(C, abilities),
                iterations=it,
                converged=True,
            )
    raise ConvergenceError(
        f"MM iteration did not converge in {max_iter} sweeps "
        f"(last change {delta:.3g})",
        residual=delta, iterations=max_iter)


def _as_mu(mu, n: int) -> np.ndarray:
    if isinstance(mu, AbilityVector):
        mu = mu.mu
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n,):
        raise DimensionError(f"abilities have shape {mu.shape}, expected ({n},)")
    return mu


def bt_covariance(C, mu) -> np.ndarray:
    """Asymptotic covariance of the abilities: pseudoinverse of the Fisher
    information at mu.

    F_ii = sum_{j != i} n_ij p_ij (1 - p_ij), F_ij = -n_ij p_ij (1 - p_ij).
    The information is singular along the all-ones direction (the gauge), so
    the Moore-Penrose inverse is the right object; its rows sum to ~0.
    """
    C = as_count_matrix(C)
    mu = _as_mu(mu, C.n)
    counts = C.counts.copy()
    np.fill_diagonal(counts, 0.0)
    games = counts + counts.T
    p = _logistic(np.subtract.outer(mu, mu))
    weight = games * p * (1.0 - p)
    F = -weight.copy()
    np.fill_diagonal(F, weight.sum(axis=1))
    return pseudoinverse(F)


def bt_deviance(C, mu) -> float:
    """Deviance 2 sum_{i != j} c_ij log(c_ij / (n_ij p_ij)), with 0 log 0 = 0.

    Zero for saturated data (observed frequencies equal fitted probabilities
    on every pair that played).
    """
    C = as_count_matrix(C)
    mu = _as_mu(mu, C.n)
    counts = C.counts.copy()
    np.fill_diagonal(counts, 0.0)
    games = counts + counts.T
    p = _logistic(np.subtract.outer(mu, mu))
    expected = games * p
    mask = counts > 0
    terms = counts[mask] * np.log(counts[mask] / expected[mask])
    return float(2.0 * terms.sum())


def predict_prob(mu: AbilityVector, i: int, j: int) -> float:
    """P(i beats j) under the fitted model.

    Computed so that predict_prob(mu, i, j) + predict_prob(mu, j, i) == 1.0
    exactly in floating point.
    """
    n = len(mu.labels)
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionError(f"indices ({i}, {j}) out of range for n={n}")
    if i == j:
        raise DomainError("cannot predict a player against itself")
    d = float(mu.mu[i] - mu.mu[j])
    if d >= 0.0:
        return 1.0 / (1.0 + np.exp(-d))
    # d < 0: mirror of the d >= 0 branch, so the two calls sum to exactly 1
    # (1 - q is exact for q in [1/2, 1) by Sterbenz).
    return 1.0 - 1.0 / (1.0 + np.exp(d))
