"""Distinguishability measures for a pair of states.

Classical: relative information (KL divergence), the Bhattacharyya angle, and
the Fisher quadratic form. Quantum: the root fidelity

    tr sqrt(rho1^{1/2} rho0 rho1^{1/2}),

which is the Bhattacharyya coefficient minimized over every POVM, together
with the measurement that attains it -- the eigenbasis of the likelihood
operator M = rho1^{-1/2} sqrt(rho1^{1/2} rho0 rho1^{1/2}) rho1^{-1/2} -- and
the relative-information lower bound 2 tr(rho0 ln M) that this measurement
certifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, DivergenceInfiniteError, ShapeError, ValidationError
from .linalg import dagger, eig_hermitian, hermitize, invsqrtm_pd, logm_pd, sqrtm_psd
from .states import INVERTIBILITY_FLOOR, DensityMatrix, Povm, outcome_distribution

# Probabilities at or below this are treated as exact zeros in divergences.
P_ZERO = 1e-12
Q_ZERO = 1e-15


@dataclass(frozen=True)
class BuresResult:
    """Root fidelity with the measurement attaining it.

    ``likelihood_eigenvalues[b]`` is the square-rooted likelihood ratio
    sqrt(p0_b / p1_b) carried by ``optimal_povm.elements[b]``.
    """

    fidelity_root: float
    bures_angle: float
    optimal_povm: Povm
    likelihood_eigenvalues: np.ndarray


def kl_divergence(p, q) -> float:
    """Relative information sum_b p_b ln(p_b / q_b) in nats, with 0 ln 0 = 0.

    Raises DivergenceInfiniteError when p puts weight above 1e-12 where q is
    at most 1e-15.
    """
    pa, qa = _paired_distributions(p, q)
    live = pa > P_ZERO
    if np.any(live & (qa <= Q_ZERO)):
        b = int(np.nonzero(live & (qa <= Q_ZERO))[0][0])
        raise DivergenceInfiniteError(
            f"relative information is infinite: p[{b}]={pa[b]:.3e} but q[{b}]={qa[b]:.3e}"
        )
    total = float(np.sum(pa[live] * np.log(pa[live] / qa[live])))
    return max(total, 0.0)


def bhattacharyya_angle(p, q) -> float:
    """arccos of the Bhattacharyya coefficient sum_b sqrt(p_b q_b), in [0, pi/2]."""
    pa, qa = _paired_distributions(p, q)
    coeff = float(np.sum(np.sqrt(pa * qa)))
    return float(np.arccos(np.clip(coeff, 0.0, 1.0)))


def fisher_quadratic(p, dp) -> float:
    """Fisher quadratic form sum_b (dp_b)^2 / p_b for a perturbation dp of p.

    ``dp`` must sum to zero (within 1e-12) and vanish wherever p does.
    """
    pa = np.clip(np.asarray(p, dtype=float), 0.0, None)
    dpa = np.asarray(dp, dtype=float)
    if pa.shape != dpa.shape or pa.ndim != 1:
        raise ShapeError(f"p and dp must be equal-length vectors, got {pa.shape} and {dpa.shape}")
    if abs(dpa.sum()) > 1e-12:
        raise ValidationError(f"dp must sum to zero, got {dpa.sum():.3e}")
    live = np.abs(dpa) > P_ZERO
    if np.any(live & (pa <= Q_ZERO)):
        b = int(np.nonzero(live & (pa <= Q_ZERO))[0][0])
        raise DivergenceInfiniteError(
            f"Fisher form is infinite: dp[{b}]={dpa[b]:.3e} on vanishing p[{b}]={pa[b]:.3e}"
        )
    return float(np.sum(dpa[live] ** 2 / pa[live]))


def fidelity_root(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """tr sqrt(rho1^{1/2} rho0 rho1^{1/2}), clamped into [0, 1].

    Symmetric in its arguments; singular states are fine here.
    """
    _same_dim(rho0, rho1)
    s1 = sqrtm_psd(rho1.mat)
    inner = hermitize(s1 @ rho0.mat @ s1)
    w = np.clip(eig_hermitian(inner).eigenvalues, 0.0, None)
    return float(np.clip(np.sum(np.sqrt(w)), 0.0, 1.0))


def bures_angle(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """arccos of the root fidelity, in [0, pi/2]."""
    return float(np.arccos(fidelity_root(rho0, rho1)))


def naive_lower_bound(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """tr(rho0^{1/2} rho1^{1/2}): below the root fidelity, with equality iff
    the states commute."""
    _same_dim(rho0, rho1)
    return float(np.trace(sqrtm_psd(rho0.mat) @ sqrtm_psd(rho1.mat)).real)


def optimal_unitary(rho0: DensityMatrix, rho1: DensityMatrix) -> np.ndarray:
    """The unitary aligning rho0^{1/2} rho1^{1/2} with its positive part:

        U = sqrt(rho1^{1/2} rho0 rho1^{1/2}) rho1^{-1/2} rho0^{-1/2}

    so that |tr(U rho0^{1/2} rho1^{1/2})| equals the root fidelity.
    """
    _same_dim(rho0, rho1)
    _require_invertible(rho0, "rho0")
    _require_invertible(rho1, "rho1")
    s1 = sqrtm_psd(rho1.mat)
    core = sqrtm_psd(hermitize(s1 @ rho0.mat @ s1))
    return core @ invsqrtm_pd(rho1.mat) @ invsqrtm_pd(rho0.mat)


def likelihood_operator(rho0: DensityMatrix, rho1: DensityMatrix) -> np.ndarray:
    """The operator likelihood ratio of rho0 against rho1:

        M = rho1^{-1/2} sqrt(rho1^{1/2} rho0 rho1^{1/2}) rho1^{-1/2},

    Hermitian and non-negative; swapping the arguments yields its inverse.
    """
    _same_dim(rho0, rho1)
    _require_invertible(rho1, "rho1")
    s1 = sqrtm_psd(rho1.mat)
    is1 = invsqrtm_pd(rho1.mat)
    core = sqrtm_psd(hermitize(s1 @ rho0.mat @ s1))
    return hermitize(is1 @ core @ is1)


def bures_optimal_measurement(rho0: DensityMatrix, rho1: DensityMatrix) -> BuresResult:
    """Rank-one projective measurement in the likelihood operator's eigenbasis.

    This measurement's outcome statistics reach the quantum optimum: their
    Bhattacharyya coefficient equals the root fidelity.
    """
    _same_dim(rho0, rho1)
    _require_invertible(rho0, "rho0")
    _require_invertible(rho1, "rho1")
    m = likelihood_operator(rho0, rho1)
    w, v = eig_hermitian(m)
    projectors = tuple(v[:, b : b + 1] @ dagger(v[:, b : b + 1]) for b in range(v.shape[1]))
    root = fidelity_root(rho0, rho1)
    return BuresResult(
        fidelity_root=root,
        bures_angle=float(np.arccos(np.clip(root, 0.0, 1.0))),
        optimal_povm=Povm(projectors),
        likelihood_eigenvalues=np.clip(w, 0.0, None),
    )


def kl_lower_bound_bures(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """2 tr(rho0 ln M): the relative information delivered by the optimal
    fidelity measurement, a lower bound on its maximum over all POVMs."""
    _same_dim(rho0, rho1)
    _require_invertible(rho0, "rho0")
    _require_invertible(rho1, "rho1")
    log_m = logm_pd(likelihood_operator(rho0, rho1))
    return 2.0 * float(np.trace(rho0.mat @ log_m).real)


def measurement_bhattacharyya(rho0: DensityMatrix, rho1: DensityMatrix, povm: Povm) -> float:
    """Bhattacharyya coefficient of the two outcome distributions under a POVM."""
    p0 = outcome_distribution(rho0, povm)
    p1 = outcome_distribution(rho1, povm)
    return float(np.sum(np.sqrt(p0 * p1)))


def _paired_distributions(p, q) -> tuple[np.ndarray, np.ndarray]:
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    if pa.shape != qa.shape or pa.ndim != 1:
        raise ShapeError(f"distributions must be equal-length vectors, got {pa.shape} and {qa.shape}")
    return np.clip(pa, 0.0, None), np.clip(qa, 0.0, None)


def _same_dim(rho0: DensityMatrix, rho1: DensityMatrix) -> None:
    if rho0.dim != rho1.dim:
        raise ShapeError(f"states have different dims: {rho0.dim} vs {rho1.dim}")


def _require_invertible(rho: DensityMatrix, name: str) -> None:
    w_min = rho.min_eigenvalue()
    if w_min <= INVERTIBILITY_FLOOR:
        raise ConditioningError(
            f"{name} is too close to singular (smallest eigenvalue {w_min:.3e}, "
            f"needs > {INVERTIBILITY_FLOOR:.0e})"
        )
