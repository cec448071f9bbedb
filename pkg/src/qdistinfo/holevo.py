"""Information quantities of a binary channel and their curvature bounds.

The mean-state entropy difference chi(t) upper-bounds the mutual information
of every measurement; the proof route implemented here compares second
derivatives in the prior t. Minimizing the measured-information curvature
I''(t) over POVMs lands on the eigenbasis of L_rho(delta), where L_rho is the
lowering super-operator of the mean state; that measurement yields the
accessible-information lower bound M(t).

All quantities are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .errors import SingularityError
from .fidelity import _require_invertible, kl_divergence
from .linalg import EIG_FLOOR, dagger, eig_hermitian, lowering_apply
from .states import BinaryChannel, DensityMatrix, Povm, outcome_distribution

# Prior values used for curvature evaluations are kept this far inside (0, 1).
T_INTERIOR = 1e-6

# Weight below which a vanishing log argument follows the 0 ln 0 = 0 convention.
WEIGHT_ZERO = 1e-10
LOG_ARG_FLOOR = 1e-12


@dataclass(frozen=True)
class BoundSandwich:
    """Accessible-information bracket at prior t: lower_m <= (oracle_best) <= chi_upper,
    up to 1e-9 slack. ``oracle_best`` is a search estimate, present only when a
    measurement search ran."""

    t: float
    lower_m: float
    chi_upper: float
    oracle_best: float | None = None


def shannon_entropy(p) -> float:
    """-sum_b p_b ln p_b with 0 ln 0 = 0, for a probability vector."""
    pa = np.clip(np.asarray(p, dtype=float), 0.0, None)
    live = pa > 0.0
    return float(-np.sum(pa[live] * np.log(pa[live])))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy of the spectrum, -sum_j lambda_j ln lambda_j."""
    return shannon_entropy(rho.eigenvalues())


def mutual_information(channel: BinaryChannel, povm: Povm) -> float:
    """H(p) - (1-t) H(p0) - t H(p1) for the outcome statistics of a measurement.

    Exactly zero at t in {0, 1}: a constant prior carries no information.
    """
    t = channel.t
    if t == 0.0 or t == 1.0:
        return 0.0
    p0 = outcome_distribution(channel.rho0, povm)
    p1 = outcome_distribution(channel.rho1, povm)
    p = outcome_distribution(channel.mixture(), povm)
    return shannon_entropy(p) - (1.0 - t) * shannon_entropy(p0) - t * shannon_entropy(p1)


def holevo_chi(channel: BinaryChannel) -> float:
    """Entropy excess of the mean state: S(rho) - (1-t) S(rho0) - t S(rho1).

    Upper-bounds the mutual information of any measurement on the channel.
    """
    t = channel.t
    if t == 0.0 or t == 1.0:
        return 0.0
    return (
        von_neumann_entropy(channel.mixture())
        - (1.0 - t) * von_neumann_entropy(channel.rho0)
        - t * von_neumann_entropy(channel.rho1)
    )


def i_second_derivative(channel: BinaryChannel, povm: Povm) -> float:
    """Curvature of the mutual information in t for a fixed measurement:

        I''(t) = -sum_b (tr(delta E_b))^2 / tr(rho E_b).

    Outcomes with |tr(delta E_b)| at most 1e-12 contribute nothing; a larger
    overlap on a vanishing mixture probability raises SingularityError.
    """
    mix = channel.mixture(_interior(channel.t))
    p = outcome_distribution(mix, povm)
    d = np.array([np.trace(channel.delta @ e).real for e in povm.elements])
    total = 0.0
    for b in range(len(p)):
        if abs(d[b]) <= 1e-12:
            continue
        if p[b] <= 1e-12:
            raise SingularityError(
                f"outcome {b} has mixture probability {p[b]:.3e} but difference overlap {d[b]:.3e}"
            )
        total += d[b] ** 2 / p[b]
    return -total


def phi(x: float, y: float) -> float:
    """Reciprocal logarithmic mean: (ln x - ln y)/(x - y), with phi(x, x) = 1/x.

    Dominates 2/(x + y) for positive arguments.
    """
    if abs(x - y) <= 1e-14 * (x + y):
        return 2.0 / (x + y)
    return (log(x) - log(y)) / (x - y)


def s_second_derivative(channel: BinaryChannel) -> float:
    """Curvature of chi in t, from the mean state's spectrum:

        S''(t) = -sum_{j,k} phi(lambda_j, lambda_k) |delta_jk|^2

    with delta expressed in the mean state's eigenbasis and pairs skipped when
    lambda_j + lambda_k falls at or below the eigenvalue floor.
    """
    mix = channel.mixture(_interior(channel.t))
    w, v = eig_hermitian(mix.mat)
    d_eig = dagger(v) @ channel.delta @ v
    lam = np.clip(w, EIG_FLOOR, None)
    total = 0.0
    for j in range(len(w)):
        for k in range(len(w)):
            if w[j] + w[k] <= EIG_FLOOR:
                continue
            total += phi(lam[j], lam[k]) * abs(d_eig[j, k]) ** 2
    return -total


def l_second_derivative(channel: BinaryChannel) -> float:
    """The measurement-independent curvature separating S'' from I'':

        L''(t) = -tr(delta L_rho(delta)),

    the minimum of I''(t) over all POVMs. Satisfies S'' <= L'' <= I'' <= 0.
    """
    mix = channel.mixture(_interior(channel.t))
    lowered = lowering_apply(mix.mat, channel.delta)
    return -float(np.trace(channel.delta @ lowered).real)


def fuchs_measurement(channel: BinaryChannel) -> Povm:
    """Projectors onto the eigenbasis of L_rho(delta): the measurement whose
    information curvature attains L''(t)."""
    mix = channel.mixture(_interior(channel.t))
    lowered = lowering_apply(mix.mat, channel.delta)
    _, v = eig_hermitian(lowered)
    return Povm(tuple(v[:, b : b + 1] @ dagger(v[:, b : b + 1]) for b in range(v.shape[1])))


def lower_bound_m(channel: BinaryChannel) -> float:
    """Accessible-information lower bound from the curvature-optimal measurement:

        M(t) = tr((1-t) rho0 ln L_rho(rho0) + t rho1 ln L_rho(rho1)).

    Since L_rho(rho0) = 1 - t L_rho(delta) and L_rho(rho1) = 1 + (1-t) L_rho(delta),
    everything is evaluated in the one basis that diagonalizes L_rho(delta), and
    M(t) equals the mutual information of that measurement.
    """
    t = channel.t
    if t == 0.0 or t == 1.0:
        return 0.0
    mix = channel.mixture()
    mu, v = eig_hermitian(lowering_apply(mix.mat, channel.delta))
    alpha = 1.0 - t * mu
    beta = 1.0 + (1.0 - t) * mu
    p0 = np.clip(np.real(np.einsum("ib,ij,jb->b", v.conj(), channel.rho0.mat, v)), 0.0, None)
    p1 = np.clip(np.real(np.einsum("ib,ij,jb->b", v.conj(), channel.rho1.mat, v)), 0.0, None)
    return (1.0 - t) * _weighted_log_sum(alpha, p0, "L_rho(rho0)") + t * _weighted_log_sum(
        beta, p1, "L_rho(rho1)"
    )


def kl_lower_bound_fuchs(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """Relative information measured in the eigenbasis of L_rho1(rho0):
    a second lower bound on the maximal relative information, distinct from
    the fidelity-measurement bound."""
    _require_invertible(rho1, "rho1")
    lowered = lowering_apply(rho1.mat, rho0.mat)
    _, v = eig_hermitian(lowered)
    povm = Povm(tuple(v[:, b : b + 1] @ dagger(v[:, b : b + 1]) for b in range(v.shape[1])))
    return kl_divergence(outcome_distribution(rho0, povm), outcome_distribution(rho1, povm))


def information_bounds(channel: BinaryChannel, oracle_best: float | None = None) -> BoundSandwich:
    """Bundle M(t) and chi(t) (and optionally a search estimate) at the channel prior."""
    return BoundSandwich(
        t=channel.t,
        lower_m=lower_bound_m(channel),
        chi_upper=holevo_chi(channel),
        oracle_best=oracle_best,
    )


def _weighted_log_sum(args: np.ndarray, weights: np.ndarray, label: str) -> float:
    """sum_b w_b ln(a_b) under the 0 ln 0 convention.

    A log argument at or below 1e-12 is clamped to 1e-15 when its weight is
    negligible, and rejected otherwise.
    """
    total = 0.0
    for a, wgt in zip(args, weights):
        if a <= LOG_ARG_FLOOR:
            if wgt > WEIGHT_ZERO:
                raise SingularityError(
                    f"{label} has eigenvalue {a:.3e} paired with probability {wgt:.3e}"
                )
            a = max(a, 1e-15)
        total += wgt * log(a)
    return total


def _interior(t: float) -> float:
    return min(max(t, T_INTERIOR), 1.0 - T_INTERIOR)
