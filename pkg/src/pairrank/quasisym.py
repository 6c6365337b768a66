"""Quasi-symmetry detection, decomposition, and reversibility.

A count matrix is quasi-symmetric when C = diag(d) S for a positive vector d
and a symmetric S. Equivalent characterizations, all checked here:

* every triplet satisfies c_ij c_jk c_ki = c_ji c_kj c_ik;
* d is a fixed point of the column-normalized scaling, A^-1 C d = d;
* the undamped chain C A^-1 is reversible (its probability flow is
  symmetric).

Under quasi-symmetry the eigenvector and Bradley-Terry rankings coincide:
influence weights are proportional to d, and the fitted log-abilities equal
centered log d with zero deviance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bradley_terry import fit_bt
from .counts import CountMatrix, as_count_matrix
from .errors import ConnectivityError, ConsistencyError, DomainError, \
    NotQuasiSymmetricError
from .linalg import DEFAULT_TOL, leading_eigenvector
from .rankings import influence_weight, transition_matrix

DEFAULT_QS_TOL = 1e-8


class TripletViolation(NamedTuple):
    """One failed product identity. For a one-sided zero pair (c_ij > 0 but
    c_ji = 0, impossible under quasi-symmetry) j == k and the gap is 1."""

    i: int
    j: int
    k: int
    lhs: float
    rhs: float
    gap: float


@dataclass(frozen=True)
class TripletReport:
    is_quasi_symmetric: bool
    max_relative_gap: float
    violations: tuple[TripletViolation, ...]
    tolerance: float

    def __bool__(self) -> bool:
        return self.is_quasi_symmetric


def check_triplets(C, tol: float = DEFAULT_QS_TOL) -> TripletReport:
    """Test every unordered triplet's cyclic product identity.

    Relative gap for a triplet is |lhs - rhs| / max(lhs, rhs); triplets with
    both products zero are vacuously consistent. Pairs where exactly one
    direction is zero cannot occur under quasi-symmetry and are reported as
    degenerate violations with gap 1.
    """
    C = as_count_matrix(C)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    counts = C.counts
    n = C.n
    violations: list[TripletViolation] = []
    max_gap = 0.0

    # a one-sided pair can only fire in the direction whose count is positive,
    # so each unordered pair appears exactly once
    one_sided = (counts > 0) & (counts.T == 0)
    np.fill_diagonal(one_sided, False)
    for i, j in zip(*np.nonzero(one_sided)):
        violations.append(TripletViolation(
            int(min(i, j)), int(max(i, j)), int(max(i, j)),
            float(counts[i, j]), float(counts[j, i]), 1.0))
        max_gap = 1.0

    lhs = np.einsum("ij,jk,ki->ijk", counts, counts, counts)
    rhs = np.transpose(lhs, (0, 2, 1))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                left = lhs[i, j, k]
                right = rhs[i, j, k]
                big = max(left, right)
                if big == 0:
                    continue
                gap = abs(left - right) / big
                if gap > max_gap:
                    max_gap = gap
                if gap > tol:
                    violations.append(TripletViolation(
                        i, j, k, float(left), float(right), float(gap)))
    return TripletReport(
        is_quasi_symmetric=bool(max_gap <= tol),
        max_relative_gap=float(max_gap),
        violations=tuple(violations),
        tolerance=tol,
    )


@dataclass(frozen=True)
class QSDecomposition:
    """Factorization C = diag(d) S with S symmetric and the gauge d[0] = 1."""

    d: np.ndarray
    S: np.ndarray
    residual: float
    labels: tuple[str, ...]


def decompose_qs(C, tol: float = DEFAULT_QS_TOL) -> QSDecomposition:
    """Recover d and S from a quasi-symmetric matrix.

    d is propagated along a spanning tree of the reciprocal-support graph
    (pairs with counts in both directions) via d_v = d_u c_vu / c_uv, then
    the verdict is max asymmetry of diag(d)^-1 C against tol. Disconnected
    reciprocal support means d is not identified and raises the
    connectivity error; asymmetry beyond tol raises the quasi-symmetry
    error with the worst entry.
    """
    C = as_count_matrix(C)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    counts = C.counts
    n = C.n
    mutual = (counts > 0) & (counts.T > 0)
    np.fill_diagonal(mutual, False)

    d = np.zeros(n)
    d[0] = 1.0
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    order = [0]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(mutual[u] & ~seen):
            d[v] = d[u] * counts[v, u] / counts[u, v]
            seen[v] = True
            stack.append(int(v))
            order.append(int(v))
    if not seen.all():
        comps = _mutual_components(mutual, C.labels)
        raise ConnectivityError(comps)

    M = counts / d[:, None]
    asym = np.abs(M - M.T)
    worst = float(asym.max())
    if worst > tol:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise NotQuasiSymmetricError(worst, (int(i), int(j)))
    S = 0.5 * (M + M.T)
    residual = float(np.max(np.abs(counts - d[:, None] * S)))
    return QSDecomposition(d=d, S=S, residual=residual, labels=C.labels)


def _mutual_components(mutual: np.ndarray, labels) -> list[list[str]]:
    n = mutual.shape[0]
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
            new = np.flatnonzero(mutual[u] & ~seen)
            seen[new] = True
            comp.extend(new.tolist())
            stack.extend(new.tolist())
        comps.append([labels[i] for i in sorted(comp)])
    return comps


def verify_equivalence(C, tol: float = 1e-10) -> float:
    """Confirm the scaling identity behind the quasi-symmetry equivalence.

    Decomposes C = diag(d) S, then checks that d is a fixed point of
    A^-1 C (returns that residual, max-norm relative to max d). Also
    confirms the two ranking routes coincide: influence weights proportional
    to d (within 1e-8) and fitted log-abilities equal to centered log d
    (within 1e-6). Any failed check raises the consistency error.
    """
    C = as_count_matrix(C)
    dec = decompose_qs(C)
    d = dec.d
    a = C.column_sums()
    if np.any(a <= 0):
        raise DomainError("scaling identity needs positive column sums")
    residual = float(np.max(np.abs(C.counts @ d / a - d)) / np.max(np.abs(d)))
    if residual > tol:
        raise ConsistencyError(
            f"fixed-point residual {residual:.3g} exceeds tol {tol:.3g}")

    iw = influence_weight(C).scores
    d_norm = d / d.sum()
    iw_gap = float(np.max(np.abs(iw - d_norm)))
    if iw_gap > 1e-8:
        raise ConsistencyError(
            f"influence weights deviate from normalized d by {iw_gap:.3g}")

    mu = fit_bt(C).abilities.mu
    log_d = np.log(d)
    log_d -= log_d.mean()
    mu_gap = float(np.max(np.abs(mu - log_d)))
    if mu_gap > 1e-6:
        raise ConsistencyError(
            f"fitted abilities deviate from centered log d by {mu_gap:.3g}")
    return residual


@dataclass(frozen=True)
class ReversibilityReport:
    reversible: bool
    max_gap: float
    tolerance: float

    def __bool__(self) -> bool:
        return self.reversible


def is_reversible(C, tol: float = DEFAULT_QS_TOL) -> ReversibilityReport:
    """Check detailed balance of the undamped chain.

    Builds P = C A^-1 and its stationary vector pi, then tests symmetry of
    the flow matrix with entries p_ij pi_j. Requires positive column sums
    and irreducibility (the undamped chain must exist).
    """
    C = as_count_matrix(C)
    P = transition_matrix(C, 1.0)
    pi = leading_eigenvector(P, tol=DEFAULT_TOL).vector
    flow = P * pi[None, :]
    gap = float(np.max(np.abs(flow - flow.T)))
    return ReversibilityReport(reversible=gap <= tol, max_gap=gap, tolerance=tol)
