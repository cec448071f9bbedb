"""Validated quantum-state and measurement types plus seeded samplers.

Matrices are dense complex ndarrays throughout; the dataclasses here exist to
carry the validated invariants (unit trace, positivity, completeness), not to
hide the arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, ValidationError
from .linalg import as_square_matrix, check_hermitian, commutator_norm, eig_hermitian

TRACE_ATOL = 1e-9
EIG_NEG_ATOL = 1e-10
COMPLETENESS_ATOL = 1e-8

# States below this smallest eigenvalue are refused by operations that need
# an inverse square root.
INVERTIBILITY_FLOOR = 1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator."""

    mat: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.mat, "density matrix")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"density matrix trace is {tr.real:.12g}, expected 1 within {TRACE_ATOL:.1e}")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if w[0] < -EIG_NEG_ATOL:
            raise ValidationError(f"density matrix has negative eigenvalue {w[0]:.6e}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending spectrum, clamped at zero."""
        return np.clip(eig_hermitian(self.mat).eigenvalues, 0.0, None)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mat)[0])


@dataclass(frozen=True)
class Povm:
    """Finite sequence of non-negative Hermitian operators summing to identity."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.elements) < 1:
            raise ValidationError("a POVM needs at least one element")
        mats = []
        dim = None
        for i, e in enumerate(self.elements):
            m = check_hermitian(e, f"POVM element {i}")
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise ShapeError(f"POVM element {i} has dim {m.shape[0]}, expected {dim}")
            w_min = np.linalg.eigvalsh(m)[0]
            if w_min < -EIG_NEG_ATOL:
                raise ValidationError(f"POVM element {i} has negative eigenvalue {w_min:.6e}")
            mats.append(m)
        total = sum(mats)
        residual = np.abs(total - np.eye(dim)).max()
        if residual > COMPLETENESS_ATOL:
            raise ValidationError(
                f"POVM is not complete: sum of elements deviates from identity by {residual:.3e} (max entry)"
            )
        object.__setattr__(self, "elements", tuple(mats))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class BinaryChannel:
    """Two signal states with a prior: state 1 is sent with probability t."""

    rho0: DensityMatrix
    rho1: DensityMatrix
    t: float = 0.5

    def __post_init__(self):
        if self.rho0.dim != self.rho1.dim:
            raise ShapeError(f"signal states have different dims: {self.rho0.dim} vs {self.rho1.dim}")
        if not (0.0 <= self.t <= 1.0):
            raise ValidationError(f"prior t must lie in [0, 1], got {self.t}")

    @property
    def dim(self) -> int:
        return self.rho0.dim

    @property
    def delta(self) -> np.ndarray:
        """Difference operator rho1 - rho0."""
        return self.rho1.mat - self.rho0.mat

    def mixture(self, t: float | None = None) -> DensityMatrix:
        """The mean state (1-t) rho0 + t rho1 (channel prior by default)."""
        t = self.t if t is None else t
        return DensityMatrix((1.0 - t) * self.rho0.mat + t * self.rho1.mat)

    def with_prior(self, t: float) -> "BinaryChannel":
        return BinaryChannel(self.rho0, self.rho1, t)

    def commutator_norm(self) -> float:
        return commutator_norm(self.rho0.mat, self.rho1.mat)


def validate_density(m) -> DensityMatrix:
    """Validate an arbitrary matrix as a density matrix."""
    return DensityMatrix(as_square_matrix(m, "density matrix"))


def validate_povm(elements) -> Povm:
    """Validate a sequence of matrices as a POVM, preserving element order."""
    return Povm(tuple(np.asarray(e, dtype=complex) for e in elements))


def outcome_distribution(rho: DensityMatrix, povm: Povm) -> np.ndarray:
    """Born-rule outcome probabilities tr(rho E_b), clamped at zero.

    The traces must be real up to 1e-9; tiny negative probabilities from
    round-off are clamped on read.
    """
    if rho.dim != povm.dim:
        raise ShapeError(f"dimension mismatch: state is {rho.dim}, POVM is {povm.dim}")
    traces = np.array([np.trace(rho.mat @ e) for e in povm.elements])
    if np.abs(traces.imag).max() > 1e-9:
        raise ValidationError(f"outcome probability has imaginary part {np.abs(traces.imag).max():.3e}")
    return np.clip(traces.real, 0.0, None)


def random_density(dim: int, seed: int) -> DensityMatrix:
    """Full-rank random state: G G^dag / tr(G G^dag) with G complex Gaussian."""
    g = _complex_gaussian(dim, seed)
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def random_basis_povm(dim: int, seed: int) -> Povm:
    """Rank-one projectors onto a Haar-ish random orthonormal basis."""
    u = random_unitary(dim, seed)
    cols = [u[:, j : j + 1] for j in range(dim)]
    return Povm(tuple(c @ c.conj().T for c in cols))


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Unitary from the QR factorization of a complex Gaussian matrix.

    The R diagonal's phases are absorbed into Q so the draw is determined by
    the seed alone, not the QR sign convention.
    """
    q, r = np.linalg.qr(_complex_gaussian(dim, seed))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_channel(dim: int, seed: int, t: float = 0.5) -> BinaryChannel:
    """Channel with independent random signal states from seeds (seed, seed+1)."""
    return BinaryChannel(random_density(dim, seed), random_density(dim, seed + 1), t)


def _complex_gaussian(dim: int, seed: int) -> np.ndarray:
    if dim < 1:
        raise ValidationError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
