"""Monte-Carlo measurement search and the verification report.

The searches sample random dim-outcome projective measurements (per-sample
seed = config seed + sample index, so evaluation order never matters) and
optionally inject the two constructed optimal measurements. They provide an
implementation-independent floor/ceiling against which every closed-form
optimality claim is checked; the report records each named inequality with
its slack-adjusted margin (non-negative means pass).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, DivergenceInfiniteError, DomainError, ValidationError
from .fidelity import (
    bures_optimal_measurement,
    fidelity_root,
    kl_divergence,
    kl_lower_bound_bures,
    likelihood_operator,
    measurement_bhattacharyya,
    naive_lower_bound,
)
from .holevo import (
    fuchs_measurement,
    holevo_chi,
    i_second_derivative,
    kl_lower_bound_fuchs,
    l_second_derivative,
    lower_bound_m,
    mutual_information,
    s_second_derivative,
)
from .linalg import dagger, eig_hermitian, lowering_apply
from .states import (
    INVERTIBILITY_FLOOR,
    BinaryChannel,
    DensityMatrix,
    Povm,
    outcome_distribution,
    random_basis_povm,
)

# Commutator norm below which a channel counts as commuting for the
# commuting-only checks.
COMMUTING_ATOL = 1e-10

# Finite-difference oracles are meaningful only when both spectra stay this
# far from zero.
FD_SPECTRUM_FLOOR = 0.05


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the measurement search.

    ``samples`` random projective POVMs are drawn per search; when
    ``include_special`` is set, the constructed fidelity-optimal and
    curvature-optimal measurements join the candidate set. ``t_grid`` holds
    the priors (strictly inside (0, 1), strictly increasing) at which the
    information block is evaluated.
    """

    samples: int
    seed: int
    include_special: bool = True
    t_grid: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)

    def __post_init__(self):
        if self.samples < 1:
            raise ValidationError(f"samples must be >= 1, got {self.samples}")
        grid = tuple(float(t) for t in self.t_grid)
        if not grid or any(not (0.0 < t < 1.0) for t in grid):
            raise ValidationError(f"t_grid values must lie strictly inside (0, 1), got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError(f"t_grid must be strictly increasing, got {grid}")
        object.__setattr__(self, "t_grid", grid)


@dataclass(frozen=True)
class CheckResult:
    """One named inequality: pass/fail/skipped with its margin (slack included)."""

    name: str
    status: str
    margin: float | None = None
    note: str = ""


@dataclass(frozen=True)
class FidelityBlock:
    closed_form: float
    naive_bound: float
    oracle_min: float
    oracle_tag: str
    bures_achieved: float | None


@dataclass(frozen=True)
class KlBlock:
    bures_bound: float | None
    fuchs_bound: float | None
    oracle_max: float
    oracle_tag: str
    divergent_samples: int


@dataclass(frozen=True)
class InfoRow:
    t: float
    i_bures: float | None
    i_fuchs: float
    m_lower: float
    chi: float
    oracle_best: float
    oracle_tag: str


@dataclass(frozen=True)
class VerificationReport:
    dim: int
    t: float
    rho0_spectrum: tuple[float, ...]
    rho1_spectrum: tuple[float, ...]
    commutator_norm: float
    fidelity: FidelityBlock
    kl: KlBlock
    info: tuple[InfoRow, ...]
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failing(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if c.status == "fail")


def sample_povms(dim: int, config: SearchConfig) -> list[tuple[str, Povm]]:
    """The tagged candidate POVMs for a search, one per sample seed."""
    return [(f"sample[{i}]", random_basis_povm(dim, config.seed + i)) for i in range(config.samples)]


def oracle_min_bhattacharyya(channel: BinaryChannel, config: SearchConfig) -> tuple[float, str]:
    """Smallest Bhattacharyya coefficient found over the candidate set.

    With specials included (and both states invertible) this equals the root
    fidelity: the constructed measurement attains the quantum minimum.
    """
    candidates = sample_povms(channel.dim, config)
    if config.include_special:
        bures = _try_bures_povm(channel)
        if bures is not None:
            candidates.append(("bures", bures))
    return _extreme(
        candidates,
        lambda povm: measurement_bhattacharyya(channel.rho0, channel.rho1, povm),
        smallest=True,
    )


def oracle_max_mutual_information(
    channel: BinaryChannel, t: float, config: SearchConfig
) -> tuple[float, str]:
    """Largest mutual information found at prior t: a lower estimate of the
    accessible information."""
    at_t = channel.with_prior(t)
    candidates = sample_povms(channel.dim, config)
    if config.include_special:
        candidates.append(("fuchs", fuchs_measurement(at_t)))
        bures = _try_bures_povm(channel)
        if bures is not None:
            candidates.append(("bures", bures))
    return _extreme(candidates, lambda povm: mutual_information(at_t, povm), smallest=False)


def oracle_max_kl(rho0: DensityMatrix, rho1: DensityMatrix, config: SearchConfig) -> tuple[float, str]:
    """Largest relative information found over the candidate set.

    Samples whose statistics violate the support condition (infinite
    divergence) are skipped, not maximized over; for invertible states none
    occur.
    """
    value, tag, _ = _max_kl_detail(rho0, rho1, config)
    return value, tag


def finite_difference_second(f, t: float, h: float) -> float:
    """Central second difference (f(t+h) - 2 f(t) + f(t-h)) / h^2."""
    if h <= 0.0:
        raise ValidationError(f"step h must be positive, got {h}")
    if not (0.0 < t - h and t + h < 1.0):
        raise DomainError(f"t +- h must stay inside (0, 1), got t={t}, h={h}")
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)


def build_report(channel: BinaryChannel, config: SearchConfig) -> VerificationReport:
    """Run every search and closed form, then record each optimality and
    consistency inequality with its margin.

    Deterministic for a fixed (channel, config). Blocks that need an inverse
    square root of a near-singular state are marked "skipped: conditioning"
    rather than raised.
    """
    rho0, rho1 = channel.rho0, channel.rho1
    dim = channel.dim
    spectrum0 = np.linalg.eigvalsh(rho0.mat)
    spectrum1 = np.linalg.eigvalsh(rho1.mat)
    invertible = spectrum0[0] > INVERTIBILITY_FLOOR and spectrum1[0] > INVERTIBILITY_FLOOR
    comm_norm = channel.commutator_norm()
    checks: list[CheckResult] = []

    candidates = sample_povms(dim, config)

    # Fidelity block: closed form vs the sampled minimum.
    root = fidelity_root(rho0, rho1)
    root_swapped = fidelity_root(rho1, rho0)
    naive = naive_lower_bound(rho0, rho1)
    bures_res = None
    if invertible and config.include_special:
        bures_res = bures_optimal_measurement(rho0, rho1)

    fid_candidates = list(candidates)
    if bures_res is not None:
        fid_candidates.append(("bures", bures_res.optimal_povm))
    oracle_min, min_tag = _extreme(
        fid_candidates, lambda povm: measurement_bhattacharyya(rho0, rho1, povm), smallest=True
    )
    achieved = (
        measurement_bhattacharyya(rho0, rho1, bures_res.optimal_povm) if bures_res else None
    )
    fidelity_block = FidelityBlock(
        closed_form=root,
        naive_bound=naive,
        oracle_min=oracle_min,
        oracle_tag=min_tag,
        bures_achieved=achieved,
    )

    checks.append(_check("fidelity.oracle_min_ge_closed_form", oracle_min - root + 1e-9))
    checks.append(_check("fidelity.symmetry", 1e-9 - abs(root - root_swapped)))
    checks.append(
        _check("fidelity.chain", min(root + 1e-9 - naive, 1.0 + 1e-9 - root))
    )
    if bures_res is not None:
        checks.append(_check("fidelity.bures_attains", 1e-8 - abs(achieved - root)))
        checks.append(_bures_symmetry_check(rho0, rho1, bures_res))
        checks.append(_mn_inverse_check(rho0, rho1))
        checks.append(_likelihood_ratio_check(rho0, rho1, bures_res))
    else:
        skip_note = "conditioning" if not invertible else "specials disabled"
        for name in (
            "fidelity.bures_attains",
            "fidelity.bures_symmetry",
            "likelihood.mn_inverse",
            "likelihood.ratio_consistency",
        ):
            checks.append(CheckResult(name, "skipped", note=skip_note))
    checks.append(_commuting_reduction_check(channel, root, comm_norm))

    # Relative-information block.
    kl_bures = kl_lower_bound_bures(rho0, rho1) if invertible else None
    kl_fuchs = kl_lower_bound_fuchs(rho0, rho1) if spectrum1[0] > INVERTIBILITY_FLOOR else None
    kl_max, kl_tag, kl_divergent = _max_kl_detail(rho0, rho1, config)
    kl_block = KlBlock(
        bures_bound=kl_bures,
        fuchs_bound=kl_fuchs,
        oracle_max=kl_max,
        oracle_tag=kl_tag,
        divergent_samples=kl_divergent,
    )
    if kl_bures is not None and bures_res is not None:
        p0 = outcome_distribution(rho0, bures_res.optimal_povm)
        p1 = outcome_distribution(rho1, bures_res.optimal_povm)
        checks.append(_check("kl.two_forms_agree", 1e-8 - abs(kl_bures - kl_divergence(p0, p1))))
    else:
        note = "conditioning" if not invertible else "specials disabled"
        checks.append(CheckResult("kl.two_forms_agree", "skipped", note=note))
    bounds = [b for b in (kl_bures, kl_fuchs) if b is not None]
    if bounds and config.include_special:
        checks.append(_check("kl.oracle_ge_lower_bounds", kl_max - max(bounds) + 1e-9))
    else:
        note = "conditioning" if not bounds else "specials disabled"
        checks.append(CheckResult("kl.oracle_ge_lower_bounds", "skipped", note=note))

    # Information block, one row per grid prior.
    fd_ok = spectrum0[0] >= FD_SPECTRUM_FLOOR and spectrum1[0] >= FD_SPECTRUM_FLOOR
    info_rows = []
    for t in config.t_grid:
        at_t = channel.with_prior(t)
        chi = holevo_chi(at_t)
        m_low = lower_bound_m(at_t)
        fuchs = fuchs_measurement(at_t)
        i_fuchs = mutual_information(at_t, fuchs)
        i_bures = mutual_information(at_t, bures_res.optimal_povm) if bures_res else None

        mi_candidates = list(candidates)
        if config.include_special:
            mi_candidates.append(("fuchs", fuchs))
            if bures_res is not None:
                mi_candidates.append(("bures", bures_res.optimal_povm))
        oracle_best, best_tag = _extreme(
            mi_candidates, lambda povm: mutual_information(at_t, povm), smallest=False
        )
        info_rows.append(
            InfoRow(
                t=t,
                i_bures=i_bures,
                i_fuchs=i_fuchs,
                m_lower=m_low,
                chi=chi,
                oracle_best=oracle_best,
                oracle_tag=best_tag,
            )
        )

        label = f"t={t:g}"
        checks.append(_check(f"info[{label}].holevo_upper", chi - oracle_best + 1e-9))
        if config.include_special:
            checks.append(
                _check(
                    f"info[{label}].sandwich",
                    min(oracle_best - m_low + 1e-9, chi - oracle_best + 1e-9),
                )
            )
        else:
            checks.append(
                CheckResult(f"info[{label}].sandwich", "skipped", note="specials disabled")
            )

        s2 = s_second_derivative(at_t)
        l2 = l_second_derivative(at_t)
        i2_fuchs = i_second_derivative(at_t, fuchs)
        i2_values = [i_second_derivative(at_t, povm) for _, povm in mi_candidates]
        chain_margin = min(
            l2 - s2 + 1e-9,
            min(i2_values) - l2 + 1e-9,
            1e-12 + 1e-9 - max(i2_values),
        )
        checks.append(_check(f"curvature[{label}].chain", chain_margin))
        checks.append(_check(f"curvature[{label}].fuchs_attains", 1e-8 - abs(i2_fuchs - l2)))

        if fd_ok:
            fd_s = finite_difference_second(lambda u: holevo_chi(channel.with_prior(u)), t, 1e-3)
            fd_i = finite_difference_second(
                lambda u: mutual_information(channel.with_prior(u), fuchs), t, 1e-3
            )
            checks.append(_check(f"curvature[{label}].fd_matches_s", 1e-4 - abs(fd_s - s2)))
            checks.append(_check(f"curvature[{label}].fd_matches_i", 1e-4 - abs(fd_i - i2_fuchs)))
        else:
            checks.append(
                CheckResult(f"curvature[{label}].fd_matches_s", "skipped", note="spectrum below 0.05")
            )
            checks.append(
                CheckResult(f"curvature[{label}].fd_matches_i", "skipped", note="spectrum below 0.05")
            )

        if comm_norm <= COMMUTING_ATOL:
            checks.append(_check(f"info[{label}].commuting_saturation", 1e-8 - abs(m_low - chi)))

    # Boundary behavior: both endpoints carry no information.
    boundary = max(
        abs(holevo_chi(channel.with_prior(0.0))),
        abs(holevo_chi(channel.with_prior(1.0))),
        abs(mutual_information(channel.with_prior(0.0), candidates[0][1])),
        abs(mutual_information(channel.with_prior(1.0), candidates[0][1])),
    )
    checks.append(_check("boundary.zero_information", 1e-10 - boundary))

    return VerificationReport(
        dim=dim,
        t=channel.t,
        rho0_spectrum=tuple(float(x) for x in spectrum0),
        rho1_spectrum=tuple(float(x) for x in spectrum1),
        commutator_norm=comm_norm,
        fidelity=fidelity_block,
        kl=kl_block,
        info=tuple(info_rows),
        checks=tuple(checks),
    )


def _check(name: str, margin: float) -> CheckResult:
    status = "pass" if margin >= 0.0 else "fail"
    return CheckResult(name, status, margin=float(margin))


def _extreme(candidates, value_fn, smallest: bool) -> tuple[float, str]:
    best = None
    best_tag = ""
    for tag, povm in candidates:
        v = value_fn(povm)
        if best is None or (v < best if smallest else v > best):
            best, best_tag = v, tag
    return float(best), best_tag


def _try_bures_povm(channel: BinaryChannel) -> Povm | None:
    try:
        return bures_optimal_measurement(channel.rho0, channel.rho1).optimal_povm
    except ConditioningError:
        return None


def _max_kl_detail(
    rho0: DensityMatrix, rho1: DensityMatrix, config: SearchConfig
) -> tuple[float, str, int]:
    candidates = sample_povms(rho0.dim, config)
    if config.include_special:
        try:
            candidates.append(("bures", bures_optimal_measurement(rho0, rho1).optimal_povm))
        except ConditioningError:
            pass
        try:
            lowered = lowering_apply(rho1.mat, rho0.mat)
            _, v = eig_hermitian(lowered)
            povm = Povm(tuple(v[:, b : b + 1] @ dagger(v[:, b : b + 1]) for b in range(v.shape[1])))
            candidates.append(("fuchs-kl", povm))
        except ConditioningError:
            pass
    best = None
    best_tag = ""
    divergent = 0
    for tag, povm in candidates:
        try:
            v = kl_divergence(outcome_distribution(rho0, povm), outcome_distribution(rho1, povm))
        except DivergenceInfiniteError:
            divergent += 1
            continue
        if best is None or v > best:
            best, best_tag = v, tag
    if best is None:
        raise DivergenceInfiniteError("every candidate measurement produced an infinite divergence")
    return float(best), best_tag, divergent


def _bures_symmetry_check(rho0, rho1, bures_res) -> CheckResult:
    swapped = bures_optimal_measurement(rho1, rho0)
    a = bures_res.optimal_povm.elements
    b = swapped.optimal_povm.elements
    worst = 0.0
    for side_a, side_b in ((a, b), (b, a)):
        for e in side_a:
            nearest = min(float(np.abs(e - f).max()) for f in side_b)
            worst = max(worst, nearest)
    return _check("fidelity.bures_symmetry", 1e-7 - worst)


def _mn_inverse_check(rho0, rho1) -> CheckResult:
    m = likelihood_operator(rho0, rho1)
    n = likelihood_operator(rho1, rho0)
    residual = float(np.abs(m @ n - np.eye(rho0.dim)).max())
    return _check("likelihood.mn_inverse", 1e-8 - residual)


def _likelihood_ratio_check(rho0, rho1, bures_res) -> CheckResult:
    p0 = outcome_distribution(rho0, bures_res.optimal_povm)
    p1 = outcome_distribution(rho1, bures_res.optimal_povm)
    worst = 0.0
    for b, m_b in enumerate(bures_res.likelihood_eigenvalues):
        if p1[b] <= 1e-12:
            continue
        worst = max(worst, abs(m_b - np.sqrt(p0[b] / p1[b])))
    return _check("likelihood.ratio_consistency", 1e-7 - worst)


def _commuting_reduction_check(channel, root, comm_norm) -> CheckResult:
    name = "fidelity.commuting_reduction"
    if comm_norm > COMMUTING_ATOL:
        return CheckResult(name, "skipped", note="states do not commute")
    # A common eigenbasis: the mean state's eigenbasis diagonalizes both
    # unless its spectrum is degenerate.
    _, v = eig_hermitian(channel.mixture(0.5).mat)
    d0 = dagger(v) @ channel.rho0.mat @ v
    d1 = dagger(v) @ channel.rho1.mat @ v
    off0 = float(np.abs(d0 - np.diag(np.diagonal(d0))).max())
    off1 = float(np.abs(d1 - np.diag(np.diagonal(d1))).max())
    if max(off0, off1) > 1e-8:
        return CheckResult(name, "skipped", note="degenerate common eigenbasis")
    coeff = float(np.sum(np.sqrt(np.clip(np.diagonal(d0).real, 0, None) * np.clip(np.diagonal(d1).real, 0, None))))
    return _check(name, 1e-9 - abs(root - coeff))
