"""Entropies and entropic coherence measures (all in bits)."""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, NotDistribution, NotPositive
from .linalg import dagger, eigvalsh, jacobi_eigh
from .states import DensityOperator, _matrix_of, as_basis

EIG_CLAMP = 1e-10
SUPPORT_TOL = 1e-10


def _clamp_small_negative(x: float) -> float:
    return 0.0 if -1e-12 <= x < 0.0 else x


def shannon_entropy(p) -> float:
    """-sum p log2 p with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise NotDistribution(f"not a probability vector: {p.tolist()}")
    p = np.clip(p, 0.0, 1.0)
    nz = p[p > 0]
    return _clamp_small_negative(float(-np.sum(nz * np.log2(nz))))


def spectrum_entropy(w: np.ndarray) -> np.ndarray:
    """Entropy of eigenvalue rows (last axis), vectorized; no normalization check.

    Eigenvalues in [-1e-10, 0) count as zero; anything more negative is
    an invalid input.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < -EIG_CLAMP):
        raise NotPositive(f"eigenvalue {w.min():.3e} is below -{EIG_CLAMP:.0e}")
    w = np.clip(w, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, -w * np.log2(np.where(w > 0, w, 1.0)), 0.0)
    return np.sum(terms, axis=-1)


def entropy_of_matrices(m: np.ndarray) -> np.ndarray:
    """Von Neumann entropy of a stack of density matrices (no validation)."""
    return spectrum_entropy(eigvalsh(m))


def von_neumann_entropy(rho) -> float:
    m = _matrix_of(rho)
    return _clamp_small_negative(float(entropy_of_matrices(m)))


def relative_entropy(rho, sigma) -> float:
    """Tr rho log2 rho - Tr rho log2 sigma, or ``math.inf`` on support violation."""
    a, b = _matrix_of(rho), _matrix_of(sigma)
    if a.shape != b.shape:
        raise DimensionMismatch(f"relative entropy of {a.shape} and {b.shape} operators")
    w, v = jacobi_eigh(b)
    rotated = np.real(np.diagonal(dagger(v) @ a @ v))
    kernel = w <= SUPPORT_TOL
    if np.sum(rotated[kernel]) > SUPPORT_TOL:
        return math.inf
    cross = -float(np.sum(rotated[~kernel] * np.log2(w[~kernel])))
    value = cross - von_neumann_entropy(a)
    return 0.0 if -1e-9 <= value < 0 else value


def coherence_batch(m: np.ndarray, basis_unitary: np.ndarray | None = None) -> np.ndarray:
    """S(Delta rho) - S(rho) for a stack of density matrices."""
    if basis_unitary is not None:
        m = dagger(basis_unitary) @ m @ basis_unitary
    diag = np.real(np.diagonal(m, axis1=-2, axis2=-1))
    value = spectrum_entropy(diag) - entropy_of_matrices(m)
    return np.where((value < 0) & (value >= -1e-9), 0.0, value)


def pure_coherence_batch(psi: np.ndarray, basis_unitary: np.ndarray | None = None) -> np.ndarray:
    """Coherence of pure states (rows of ``psi``): the entropy of |<i|psi>|^2."""
    if basis_unitary is not None:
        psi = psi @ np.conj(basis_unitary)
    return spectrum_entropy(np.abs(psi) ** 2)


def coherence_rel_entropy(rho, basis=None) -> float:
    """Relative entropy of coherence S(Delta(rho)) - S(rho)."""
    m = _matrix_of(rho)
    b = as_basis(basis, m.shape[0])
    if b.dim != m.shape[0]:
        raise DimensionMismatch(f"basis dimension {b.dim} differs from state dimension {m.shape[0]}")
    u = None if b.is_computational else b.unitary
    return float(coherence_batch(m[None], u)[0])


def coherence_l1(rho, basis=None) -> float:
    m = _matrix_of(rho)
    b = as_basis(basis, m.shape[0])
    if b.dim != m.shape[0]:
        raise DimensionMismatch(f"basis dimension {b.dim} differs from state dimension {m.shape[0]}")
    r = dagger(b.unitary) @ m @ b.unitary
    return float(np.sum(np.abs(r)) - np.sum(np.abs(np.diagonal(r))))


def dephased_entropy(rho: DensityOperator, basis=None) -> float:
    m = _matrix_of(rho)
    b = as_basis(basis, m.shape[0])
    r = dagger(b.unitary) @ m @ b.unitary
    return shannon_entropy(np.real(np.diagonal(r)))
