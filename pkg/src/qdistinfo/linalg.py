"""Dense complex-matrix primitives: Hermitian eigendecomposition with a fixed
phase convention, spectral matrix functions, the polar unitary, and the
lowering super-operator that inverts the symmetric product A -> (rho A + A rho)/2.

All functions are pure and operate on square complex ndarrays.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, RankError, ShapeError, ValidationError

# Eigenvalues with |lambda| at or below this floor are treated as zero when
# they appear in 1/(lambda_j + lambda_k) screens.
EIG_FLOOR = 1e-12

# Round-off can push a positive-semidefinite spectrum slightly negative;
# eigenvalues above -NEGATIVE_CLAMP are clamped to zero instead of rejected.
NEGATIVE_CLAMP = 1e-10

# Tolerance for relative Hermiticity deviation: |H - H^dag| per entry against
# 1 + max|H|.
HERM_RTOL = 1e-10

# Phase convention: the pivot component of an eigenvector must have modulus
# above this to anchor the phase.
_PHASE_PIVOT_TOL = 1e-8


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and a unitary whose column j is the unit
    eigenvector for eigenvalue j."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a^dag) / 2, used to scrub round-off."""
    return (a + a.conj().T) / 2


def as_square_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex ndarray or raise ShapeError."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ShapeError(f"{name} must be a square matrix with dim >= 1, got shape {a.shape}")
    return a


def check_hermitian(m, name: str = "operator") -> np.ndarray:
    """Validate Hermiticity within HERM_RTOL * (1 + max|entry|).

    Returns the coerced complex ndarray. Raises ValidationError naming the
    worst-offending entry pair.
    """
    a = as_square_matrix(m, name)
    dev = np.abs(a - a.conj().T)
    tol = HERM_RTOL * (1.0 + np.abs(a).max())
    if dev.max() > tol:
        j, k = np.unravel_index(int(dev.argmax()), dev.shape)
        raise ValidationError(
            f"{name} is not Hermitian: entries ({j},{k}) and ({k},{j}) differ by "
            f"{dev[j, k]:.3e} (tolerance {tol:.3e})"
        )
    return a


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry norm of the commutator [a, b]."""
    return float(np.abs(a @ b - b @ a).max())


def eig_hermitian(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian operator.

    Eigenvalues come out ascending. Each eigenvector's phase is fixed by
    making its first component of modulus > 1e-8 real and positive, so the
    decomposition (and any projective measurement built from it) is
    reproducible for a fixed input.
    """
    a = check_hermitian(h)
    w, v = np.linalg.eigh(hermitize(a))
    v = _fix_phases(v)
    return EigenDecomposition(w, v)


def _fix_phases(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        idx = np.nonzero(np.abs(col) > _PHASE_PIVOT_TOL)[0]
        if idx.size == 0:
            continue
        pivot = col[idx[0]]
        v[:, j] = col * (pivot.conjugate() / abs(pivot))
    return v


def apply_spectral_function(
    h,
    f: Callable[[np.ndarray], np.ndarray],
    negative_clamp: float = NEGATIVE_CLAMP,
    require_nonnegative: bool = False,
) -> np.ndarray:
    """Apply a scalar real function to a Hermitian operator through its spectrum.

    Returns V diag(f(lambda)) V^dag, re-symmetrized as (X + X^dag)/2. When
    ``require_nonnegative`` is set (square roots, logarithms, inverse powers),
    eigenvalues above ``-negative_clamp`` are clamped to zero and anything
    more negative raises DomainError; a non-finite f value (e.g. log of a
    clamped zero) also raises DomainError.
    """
    w, v = eig_hermitian(h)
    if require_nonnegative:
        if w.min() < -negative_clamp:
            raise DomainError(
                f"spectral function needs a positive semidefinite operator; "
                f"found eigenvalue {w.min():.6e} below -{negative_clamp:.1e}"
            )
        w = np.clip(w, 0.0, None)
    fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = w[~np.isfinite(fw)][0]
        raise DomainError(f"spectral function is not finite at eigenvalue {bad:.6e}")
    x = (v * fw) @ v.conj().T
    return hermitize(x)


def sqrtm_psd(h, negative_clamp: float = NEGATIVE_CLAMP) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian operator."""
    return apply_spectral_function(h, np.sqrt, negative_clamp, require_nonnegative=True)


def logm_pd(h, negative_clamp: float = NEGATIVE_CLAMP) -> np.ndarray:
    """Logarithm of a positive definite Hermitian operator."""
    return apply_spectral_function(h, np.log, negative_clamp, require_nonnegative=True)


def invsqrtm_pd(h, negative_clamp: float = NEGATIVE_CLAMP) -> np.ndarray:
    """Inverse square root of a positive definite Hermitian operator."""
    return apply_spectral_function(
        h, lambda w: 1.0 / np.sqrt(w), negative_clamp, require_nonnegative=True
    )


def polar_unitary(a) -> np.ndarray:
    """The unitary U, from the polar decomposition of ``a``, with U a = sqrt(a^dag a).

    This U maximizes |tr(W a)| over all unitaries W, the maximum being
    tr sqrt(a^dag a). Requires ``a`` invertible: smallest singular value above
    1e-12 times the largest.
    """
    m = as_square_matrix(a)
    u, s, vh = np.linalg.svd(m)
    if s[-1] <= 1e-12 * s[0]:
        raise RankError(
            f"polar unitary needs an invertible matrix; singular values span "
            f"[{s[-1]:.3e}, {s[0]:.3e}]"
        )
    # a = u diag(s) vh, so sqrt(a^dag a) = vh^dag diag(s) vh and U = (u vh)^dag.
    return (u @ vh).conj().T


def lowering_apply(rho, a, eigenvalue_floor: float = EIG_FLOOR) -> np.ndarray:
    """Apply the lowering super-operator of a state: solve (rho L + L rho)/2 = a.

    In rho's eigenbasis the solution scales entries by 2/(lambda_j + lambda_k);
    entries whose eigenvalue pair sums to at most ``eigenvalue_floor`` are set
    to zero (they vanish identically for operators supported on rho's range).
    """
    r = as_square_matrix(rho, "rho")
    am = check_hermitian(a, "operand")
    if r.shape != am.shape:
        raise ShapeError(f"dimension mismatch: rho is {r.shape[0]}x{r.shape[0]}, operand is {am.shape[0]}x{am.shape[0]}")
    w, v = eig_hermitian(r)
    a_eig = v.conj().T @ am @ v
    denom = w[:, None] + w[None, :]
    scale = np.where(denom > eigenvalue_floor, 2.0 / np.where(denom > eigenvalue_floor, denom, 1.0), 0.0)
    out = v @ (scale * a_eig) @ v.conj().T
    return hermitize(out)
