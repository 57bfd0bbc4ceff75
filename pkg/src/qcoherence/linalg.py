"""Dense complex matrix primitives.

The eigensolver is a cyclic complex Jacobi method written against numpy
array operations. It works on a single Hermitian matrix or on a stack of
them, so grid searches can diagonalize thousands of small operators in one
call without a Python loop per matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, Overflow

MAX_DIM = 4096
HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the matching eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex array and reject NaN/Inf entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def max_norm(a) -> float:
    """Largest absolute entry; the norm used for every tolerance check."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_error(a: np.ndarray) -> float:
    return max_norm(a - dagger(a))


def unitarity_error(u: np.ndarray) -> float:
    return max_norm(dagger(u) @ u - np.eye(u.shape[-1]))


def _check_cap(rows: int, cols: int) -> None:
    if rows > MAX_DIM or cols > MAX_DIM:
        raise Overflow(f"result of shape {rows}x{cols} exceeds the {MAX_DIM}x{MAX_DIM} cap")


def jacobi_eigh(a: np.ndarray, *, vectors: bool = True, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of one or more Hermitian matrices.

    ``a`` has shape (..., n, n). Returns ``(w, v)`` with unsorted eigenvalues
    ``w`` of shape (..., n) and eigenvectors ``v`` (columns) of shape
    (..., n, n), or ``v=None`` when ``vectors`` is false. Hermiticity is the
    caller's responsibility here; see :func:`eig_hermitian` for the checked
    entry point.
    """
    a = np.array(a, dtype=complex, copy=True)
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n))
    a = 0.5 * (a + dagger(a))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy() if vectors else None

    if n > 1:
        scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
        # Off-diagonal mass below this is roundoff for the matrix's own scale.
        target = (1e-15 * scale) ** 2 + 1e-300
        pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
        offmask = ~np.eye(n, dtype=bool)
        for _ in range(max_sweeps):
            off = np.sum(np.abs(a[:, offmask]) ** 2, axis=1)
            if np.all(off <= target):
                break
            for p, q in pairs:
                _rotate(a, v, p, q)
        else:
            off = np.sum(np.abs(a[:, offmask]) ** 2, axis=1)
            if np.any(off > target):
                raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    w = w.reshape(batch_shape + (n,))
    if v is not None:
        v = v.reshape(batch_shape + (n, n))
    return w, v


def _rotate(a: np.ndarray, v: np.ndarray | None, p: int, q: int) -> None:
    b = a[:, p, q]
    mag = np.abs(b)
    active = mag > 1e-300
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, b / safe, 1.0)
    app = np.real(a[:, p, p])
    aqq = np.real(a[:, q, q])
    with np.errstate(over="ignore", invalid="ignore"):
        theta = (aqq - app) / (2.0 * safe)
        t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(active & np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on the (p, q) plane.
    jqp = -s * np.conj(phase)
    jqq = c * np.conj(phase)

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q]
    a[:, :, p] = col_p * c[:, None] + col_q * jqp[:, None]
    a[:, :, q] = col_p * s[:, None] + col_q * jqq[:, None]
    row_p = a[:, p, :].copy()
    row_q = a[:, q, :]
    a[:, p, :] = row_p * c[:, None] + row_q * np.conj(jqp)[:, None]
    a[:, q, :] = row_p * s[:, None] + row_q * np.conj(jqq)[:, None]
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    a[:, p, p] = np.real(a[:, p, p])
    a[:, q, q] = np.real(a[:, q, q])

    if v is not None:
        vp = v[:, :, p].copy()
        vq = v[:, :, q]
        v[:, :, p] = vp * c[:, None] + vq * jqp[:, None]
        v[:, :, q] = vp * s[:, None] + vq * jqq[:, None]


def eigvalsh(a) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix or stack of matrices."""
    w, _ = jacobi_eigh(np.asarray(a, dtype=complex), vectors=False)
    return np.sort(w, axis=-1)


def eig_hermitian(a, *, tol: float = HERMITIAN_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending. Each eigenvector is rescaled so that
    its first component with magnitude above 1e-12 is real and positive,
    which makes the output reproducible.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is not square: {m.shape}")
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"max |A - A^dagger| = {err:.3e} exceeds {tol:.0e}")
    w, v = jacobi_eigh(m)
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            lead = col[idx[0]]
            v[:, k] = col * (np.conj(lead) / abs(lead))
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def tensor_product(*ms) -> np.ndarray:
    """Kronecker product with the (i*rB + k, j*cB + l) index layout."""
    if not ms:
        raise ValueError("tensor_product needs at least one factor")
    mats = [as_matrix(m) for m in ms]
    rows = reduce(lambda x, y: x * y, (m.shape[0] for m in mats))
    cols = reduce(lambda x, y: x * y, (m.shape[1] for m in mats))
    _check_cap(rows, cols)
    return reduce(np.kron, mats)


def _check_dims(dim: int, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatch(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != dim:
        raise DimensionMismatch(f"dims {dims} have product {int(np.prod(dims))}, matrix dimension is {dim}")
    return dims


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``."""
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"partial_trace needs a square matrix, got {m.shape}")
    dims = _check_dims(m.shape[0], dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise DimensionMismatch(f"keep={keep} is not a non-empty subset of range({n})")
    t = m.reshape(dims + dims)
    row_idx = list(range(n))
    col_idx = [i if i not in keep else n + i for i in range(n)]
    out_idx = keep + [n + k for k in keep]
    out = np.einsum(t, row_idx + col_idx, out_idx)
    dk = int(np.prod([dims[k] for k in keep]))
    return out.reshape(dk, dk)


def permute_subsystems(m: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a square operator: new factor k is old ``order[k]``."""
    dims = tuple(dims)
    n = len(dims)
    d = m.shape[-1]
    t = m.reshape(dims + dims)
    t = np.transpose(t, list(order) + [n + o for o in order])
    return t.reshape(d, d)


def embed_operator(op: np.ndarray, dims: Sequence[int], subsystems: Sequence[int]) -> np.ndarray:
    """Return ``op`` acting on ``subsystems`` tensored with identity elsewhere."""
    dims = tuple(dims)
    subsystems = list(subsystems)
    rest = [i for i in range(len(dims)) if i not in subsystems]
    d_rest = int(np.prod([dims[i] for i in rest])) if rest else 1
    full = np.kron(op, np.eye(d_rest))
    order = subsystems + rest
    inverse = list(np.argsort(order))
    new_dims = [dims[i] for i in order]
    t = full.reshape(tuple(new_dims) * 2)
    n = len(dims)
    t = np.transpose(t, inverse + [n + i for i in inverse])
    return t.reshape(full.shape)
