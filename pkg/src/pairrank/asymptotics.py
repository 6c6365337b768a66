"""First-order (delta-method) sampling theory for log influence weights.

A tournament is perturbed along a pair direction F(i, j), the matrix with +1
at (i, j) and -1 at (j, i): one game between i and j flips from a j-win to an
i-win as t moves. The chain maps C -> P -> pi -> iw -> log iw, and each stage
has an explicit derivative:

* transition_derivative: dP/dt at the balanced round-robin point,
* stationary_derivative: dpi/dt for any chain (solve (I - P) x = Pdot pi
  on the sum-zero slice),
* log_iw_jacobian: d log iw / dt for every pair direction at a general C.

Composing the Jacobian with the per-pair binomial variance of the win counts
(n_ij p (1-p) = n_ij / 4 at even strength) gives the asymptotic covariance of
the centered log influence weights. Closed forms exist for the balanced
round robin and, bandwise, for the circular structure.

Pair directions use 0-based indices and columns are ordered lexicographically
over i < j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counts import as_count_matrix
from .errors import ConsistencyError, DimensionError, DomainError
from .linalg import DEFAULT_TOL, leading_eigenvector, pseudoinverse
from .rankings import transition_matrix


@dataclass(frozen=True)
class PerturbationDirection:
    """Ordered pair (i, j): one extra i-over-j win, one fewer j-over-i win."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise DomainError(f"indices must be nonnegative, got {(self.i, self.j)}")
        if self.i == self.j:
            raise DomainError("perturbation needs two distinct players")


def lexicographic_pairs(n: int) -> list[tuple[int, int]]:
    """All unordered pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def perturbation_matrix(n: int, i: int, j: int) -> np.ndarray:
    """The direction matrix F with +1 at (i, j) and -1 at (j, i)."""
    d = _direction(n, (i, j))
    F = np.zeros((n, n))
    F[d.i, d.j] = 1.0
    F[d.j, d.i] = -1.0
    return F


def _direction(n: int, direction) -> PerturbationDirection:
    if not isinstance(direction, PerturbationDirection):
        direction = PerturbationDirection(*direction)
    if direction.i >= n or direction.j >= n:
        raise DimensionError(
            f"direction {(direction.i, direction.j)} out of range for n={n}")
    return direction


def transition_derivative(n: int, k: int, direction) -> np.ndarray:
    """dP/dt at t = 0 for C(t) = (balanced round robin with k) + t F(i, j).

    Only columns i and j move: column i is e/(k n^2) minus e_j/(k n), column
    j is the mirror image. Columns sum to zero.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    d = _direction(n, direction)
    M = np.zeros((n, n))
    M[:, d.i] = 1.0 / (k * n * n)
    M[d.j, d.i] -= 1.0 / (k * n)
    M[:, d.j] = -1.0 / (k * n * n)
    M[d.i, d.j] += 1.0 / (k * n)
    return M


def stationary_derivative(P, pi, Pdot) -> np.ndarray:
    """dpi/dt for a column-stochastic chain: the sum-zero solution of
    (I - P) x = Pdot pi.

    The pseudoinverse solve is followed by a projection x -= (e^T x) pi,
    which lands on the group-inverse solution (the pinv solution is only
    sum-zero by itself when I - P is symmetric). pi must be stationary for
    P within 1e-8.
    """
    P = np.asarray(P, dtype=float)
    Pdot = np.asarray(Pdot, dtype=float)
    pi = np.asarray(pi, dtype=float)
    n = P.shape[0]
    if P.shape != (n, n) or Pdot.shape != (n, n) or pi.shape != (n,):
        raise DimensionError(
            f"incompatible shapes P{P.shape}, Pdot{Pdot.shape}, pi{pi.shape}")
    if np.max(np.abs(P.sum(axis=0) - 1.0)) > 1e-8:
        raise DomainError("P is not column-stochastic")
    if np.max(np.abs(Pdot.sum(axis=0))) > 1e-8:
        raise DomainError("Pdot columns must sum to zero (tangent direction)")
    if np.max(np.abs(P @ pi - pi)) > 1e-8:
        raise ConsistencyError("pi is not stationary for P within 1e-8")
    x = pseudoinverse(np.eye(n) - P) @ (Pdot @ pi)
    return x - (x.sum() / pi.sum()) * pi


def log_iw_jacobian(C, tol: float = DEFAULT_TOL) -> np.ndarray:
    """n x n(n-1)/2 Jacobian of log normalized influence weights with
    respect to the pair perturbations, columns in lexicographic pair order.

    Because the weights sum to 1, each column J[:, c] satisfies
    sum_i iw_i J[i, c] = 0; at uniform weights (balanced structures) the
    plain column sums vanish too. Requires an undamped-usable C (positive
    column sums, irreducible).
    """
    C = as_count_matrix(C)
    n = C.n
    a = C.column_sums()
    P = transition_matrix(C, 1.0)
    pi = leading_eigenvector(P, tol=tol).vector
    Z = pseudoinverse(np.eye(n) - P)
    iw_un = pi / a
    psi = iw_un.sum()
    iw = iw_un / psi
    pairs = lexicographic_pairs(n)
    J = np.empty((n, len(pairs)))
    eye = np.eye(n)
    for col, (i, j) in enumerate(pairs):
        pdot_i = (P[:, i] - eye[j]) / a[i]
        pdot_j = (eye[i] - P[:, j]) / a[j]
        b = pdot_i * pi[i] + pdot_j * pi[j]
        x = Z @ b
        x -= x.sum() * pi
        adot_term = np.zeros(n)
        adot_term[i] = -iw_un[i]
        adot_term[j] = iw_un[j]
        iwdot_un = (x - adot_term) / a
        iwdot = (psi * iwdot_un - iw_un * iwdot_un.sum()) / (psi * psi)
        J[:, col] = iwdot / iw
    return J


def delta_covariance(J, k: int) -> np.ndarray:
    """First-order covariance of centered log influence weights when every
    pair plays 2k games at even strength: J (k/2 I) J^T.

    The k/2 is the binomial variance n p (1 - p) with n = 2k games and
    p = 1/2. For structures where pairs play unequal games, use
    delta_method_covariance, which reads the per-pair counts off the matrix.
    """
    J = np.asarray(J, dtype=float)
    if J.ndim != 2:
        raise DimensionError(f"expected a 2-d Jacobian, got shape {J.shape}")
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    return (k / 2.0) * (J @ J.T)


def delta_method_covariance(C, tol: float = DEFAULT_TOL) -> np.ndarray:
    """First-order covariance of centered log influence weights for an
    arbitrary structure: J diag(n_ij / 4) J^T with n_ij = c_ij + c_ji the
    games actually played by each pair (zero-game pairs contribute nothing).
    """
    C = as_count_matrix(C)
    J = log_iw_jacobian(C, tol=tol)
    games = C.counts + C.counts.T
    trials = np.array([games[i, j] for i, j in lexicographic_pairs(C.n)])
    return (J * (trials / 4.0)) @ J.T


def round_robin_covariance(n: int, k: int) -> np.ndarray:
    """Closed-form covariance for the balanced round robin:
    diagonal 2(n-1)/(k n^2), off-diagonal -2/(k n^2)."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    M = np.full((n, n), -2.0 / (k * n * n))
    np.fill_diagonal(M, 2.0 * (n - 1) / (k * n * n))
    return M


def circular_covariance(n: int, k: int) -> np.ndarray:
    """Covariance for the circular structure (each node plays its two ring
    neighbors): closed forms for the first three bands, the numerical delta
    path for the rest.

    Band values at circular distance d: (n^2-1)/(6kn) - d(n-d)/(kn), giving
    (n^2-1)/(6kn), (n-1)(n-5)/(6kn), (n^2-12n+23)/(6kn) for d = 0, 1, 2.
    The three bands are only distinct from the remainder for n >= 7.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if n < 7:
        raise DomainError(
            f"closed bands need n >= 7, got {n}; use delta_method_covariance "
            "on the circular count matrix instead")
    from .generators import circular

    M = delta_method_covariance(circular(n, k))
    dist = _ring_distance(n)
    M[dist == 0] = (n * n - 1) / (6.0 * k * n)
    M[dist == 1] = (n - 1) * (n - 5) / (6.0 * k * n)
    M[dist == 2] = (n * n - 12 * n + 23) / (6.0 * k * n)
    return M


def _ring_distance(n: int) -> np.ndarray:
    idx = np.arange(n)
    diff = np.abs(np.subtract.outer(idx, idx))
    return np.minimum(diff, n - diff)
