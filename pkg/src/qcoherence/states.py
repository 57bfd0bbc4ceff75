"""Density operators, pure states, reference bases and dephasing."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadParameter,
    BadPhaseCount,
    DimensionMismatch,
    NotHermitian,
    NotPositive,
    NotUnitary,
    NotUnitTrace,
    ParseError,
)
from .gates import UnitaryGate
from .linalg import (
    as_matrix,
    dagger,
    eigvalsh,
    embed_operator,
    hermiticity_error,
    max_norm,
    unitarity_error,
)

STATE_TOL = 1e-10


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _dims_for(dim: int, dims: Sequence[int] | None) -> tuple[int, ...]:
    if dims is None:
        return (dim,)
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims) or math.prod(dims) != dim:
        raise DimensionMismatch(f"dims {dims} do not multiply to dimension {dim}")
    return dims


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix with subsystem dims.

    Construction validates every invariant and raises NotHermitian,
    NotUnitTrace or NotPositive with the measured deviation.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = None

    def __post_init__(self):
        m = as_matrix(self.matrix, name="density matrix")
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
        dims = _dims_for(m.shape[0], self.dims)
        herm = hermiticity_error(m)
        if herm > STATE_TOL:
            raise NotHermitian(f"Hermiticity violated: max |rho - rho^dagger| = {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > STATE_TOL:
            raise NotUnitTrace(f"unit trace violated: |Tr rho - 1| = {abs(tr - 1.0):.3e}")
        m = 0.5 * (m + dagger(m))
        low = float(eigvalsh(m)[0])
        if low < -STATE_TOL:
            raise NotPositive(f"positivity violated: smallest eigenvalue {low:.6g} < -{STATE_TOL:.0e}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...] = None

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise ValueError("amplitudes must be a non-empty finite vector")
        dev = abs(np.linalg.norm(v) - 1.0)
        if dev > STATE_TOL:
            raise NotUnitTrace(f"state norm deviates from 1 by {dev:.3e}")
        object.__setattr__(self, "amplitudes", _frozen(v))
        object.__setattr__(self, "dims", _dims_for(v.size, self.dims))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.amplitudes, np.conj(self.amplitudes)), self.dims)


@dataclass(frozen=True)
class ReferenceBasis:
    """Orthonormal basis (the columns of ``unitary``) that defines incoherence."""

    unitary: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        u = as_matrix(self.unitary, name="basis")
        if u.shape[0] != u.shape[1]:
            raise NotUnitary(f"basis matrix must be square, got {u.shape}")
        err = unitarity_error(u)
        if err > STATE_TOL:
            raise NotUnitary(f"basis is not orthonormal: max |U^dagger U - I| = {err:.3e}")
        object.__setattr__(self, "unitary", _frozen(u))

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    @property
    def is_computational(self) -> bool:
        return bool(np.array_equal(self.unitary, np.eye(self.dim)))

    @classmethod
    def computational(cls, d: int) -> "ReferenceBasis":
        return cls(np.eye(d), f"computational:{d}")

    @classmethod
    def bell(cls) -> "ReferenceBasis":
        """Columns Phi+, Phi-, Psi+, Psi- in the |00>,|01>,|10>,|11> layout."""
        r = 1 / math.sqrt(2)
        u = np.array(
            [[r, r, 0, 0],
             [0, 0, r, r],
             [0, 0, r, -r],
             [r, -r, 0, 0]],
        )
        return cls(u, "bell")

    @classmethod
    def from_gate(cls, gate: UnitaryGate, label: str | None = None) -> "ReferenceBasis":
        return cls(gate.matrix, label or gate.spec)

    def tensor(self, other: "ReferenceBasis") -> "ReferenceBasis":
        return ReferenceBasis(np.kron(self.unitary, other.unitary), f"{self.label}*{other.label}")


def as_basis(basis, d: int) -> ReferenceBasis:
    """``None`` means the computational basis of dimension ``d``."""
    if basis is None:
        return ReferenceBasis.computational(d)
    if isinstance(basis, ReferenceBasis):
        return basis
    if isinstance(basis, UnitaryGate):
        return ReferenceBasis.from_gate(basis)
    return ReferenceBasis(basis)


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, DensityOperator):
        return rho.matrix
    if isinstance(rho, PureState):
        v = rho.amplitudes
        return np.outer(v, np.conj(v))
    return as_matrix(rho)


def density_from_matrix(m, dims: Sequence[int] | None = None) -> DensityOperator:
    return DensityOperator(as_matrix(m), None if dims is None else tuple(dims))


def pure_state(amplitudes, dims: Sequence[int] | None = None, *, normalize: bool = False) -> PureState:
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if normalize:
        v = v / np.linalg.norm(v)
    return PureState(v, None if dims is None else tuple(dims))


def dephase_matrix(m: np.ndarray, basis_unitary: np.ndarray | None = None) -> np.ndarray:
    """Full dephasing of a raw matrix (or stack) in the given basis."""
    if basis_unitary is None:
        diag = np.diagonal(m, axis1=-2, axis2=-1)
        out = np.zeros_like(m)
        idx = np.arange(m.shape[-1])
        out[..., idx, idx] = diag
        return out
    u = basis_unitary
    rotated = dagger(u) @ m @ u
    diag = np.real(np.diagonal(rotated, axis1=-2, axis2=-1))
    return (u * diag[..., None, :]) @ dagger(u)


def dephase(rho, basis=None, subsystems: Iterable[int] | None = None) -> DensityOperator:
    """Remove coherence between distinct basis elements of the chosen subsystems.

    With ``subsystems=None`` every subsystem is dephased and ``basis`` must
    span the whole space. For a subset, ``basis`` spans only the joint space
    of those subsystems and the map is sum_i (P_i x I) rho (P_i x I).
    """
    if not isinstance(rho, DensityOperator):
        rho = density_from_matrix(_matrix_of(rho))
    dims = rho.dims
    n = len(dims)
    sel = list(range(n)) if subsystems is None else sorted(set(int(s) for s in subsystems))
    if not sel or any(s < 0 or s >= n for s in sel):
        raise DimensionMismatch(f"subsystems {sel} not a subset of range({n})")
    d_sel = math.prod(dims[s] for s in sel)
    b = as_basis(basis, d_sel)
    if b.dim != d_sel:
        raise DimensionMismatch(f"basis dimension {b.dim} does not match the selected subsystems' dimension {d_sel}")
    if len(sel) == n:
        out = dephase_matrix(rho.matrix, None if b.is_computational else b.unitary)
    else:
        out = np.zeros_like(rho.matrix)
        for i in range(d_sel):
            vec = b.unitary[:, i]
            proj = embed_operator(np.outer(vec, np.conj(vec)), dims, sel)
            out += proj @ rho.matrix @ proj
    return DensityOperator(out, dims)


def is_incoherent(rho, basis=None, tol: float = 1e-9) -> bool:
    if tol <= 0:
        raise BadParameter("tol must be positive")
    m = _matrix_of(rho)
    b = as_basis(basis, m.shape[0])
    rotated = dagger(b.unitary) @ m @ b.unitary
    off = rotated - np.diag(np.diagonal(rotated))
    return max_norm(off) <= tol


def maximally_coherent(d: int, phases: Sequence[float] | None = None, mode: str = "free") -> PureState:
    """(1/sqrt d)(1, e^{i t_1}, ..., e^{i t_{d-1}}).

    In ``canonical`` mode every phase must be 0 or pi.
    """
    if d < 2:
        raise BadParameter(f"maximally coherent states need d >= 2, got {d}")
    phases = [0.0] * (d - 1) if phases is None else [float(p) for p in phases]
    if len(phases) != d - 1:
        raise BadPhaseCount(f"expected {d - 1} phases for d={d}, got {len(phases)}")
    if mode == "canonical":
        for p in phases:
            r = math.remainder(p, math.pi)
            if abs(r) > 1e-12:
                raise BadParameter(f"canonical mode admits phases 0 or pi only, got {p}")
    elif mode != "free":
        raise BadParameter(f"unknown mode {mode!r}")
    amps = np.exp(1j * np.array([0.0] + phases)) / math.sqrt(d)
    if mode == "canonical":
        amps = np.sign(np.real(amps)) / math.sqrt(d) + 0j
    return PureState(amps)


def canonical_phase_patterns(d: int) -> list[tuple[float, ...]]:
    """All 2^{d-1} phase vectors over {0, pi}, lexicographically ordered."""
    return list(itertools.product((0.0, math.pi), repeat=d - 1))


def phase_vectors(phases: np.ndarray) -> np.ndarray:
    """Rows (1, e^{i t_1}, ...)/sqrt(d) for a (N, d-1) array of phases."""
    phases = np.atleast_2d(np.asarray(phases, dtype=float))
    d = phases.shape[1] + 1
    full = np.concatenate([np.zeros((phases.shape[0], 1)), phases], axis=1)
    return np.exp(1j * full) / math.sqrt(d)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)


def random_density(d: int, seed=None, dims: Sequence[int] | None = None) -> DensityOperator:
    """G G^dagger / Tr(G G^dagger) for a complex Gaussian G."""
    if d < 1:
        raise BadParameter("d must be positive")
    g = _ginibre(_rng(seed), d, d)
    m = g @ dagger(g)
    return DensityOperator(m / np.trace(m).real, None if dims is None else tuple(dims))


def random_unitary(d: int, seed=None) -> UnitaryGate:
    """Haar-distributed unitary via QR (Gram-Schmidt) of a Gaussian matrix."""
    if d < 1:
        raise BadParameter("d must be positive")
    q, r = np.linalg.qr(_ginibre(_rng(seed), d, d))
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return UnitaryGate(q * ph[None, :], f"random:{d}")


def random_pure(d: int, seed=None, dims: Sequence[int] | None = None) -> PureState:
    if d < 1:
        raise BadParameter("d must be positive")
    v = _ginibre(_rng(seed), d, 1)[:, 0]
    return PureState(v / np.linalg.norm(v), None if dims is None else tuple(dims))


def random_diagonal_density(d: int, seed=None) -> DensityOperator:
    """Incoherent state with Dirichlet(1) weights on the computational basis."""
    p = _rng(seed).dirichlet(np.ones(d))
    return DensityOperator(np.diag(p))


# State file format.


def _encode_complex(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _decode_complex(item, where: str) -> complex:
    if isinstance(item, (int, float)):
        return complex(item)
    if isinstance(item, list) and len(item) == 2 and all(isinstance(x, (int, float)) for x in item):
        return complex(item[0], item[1])
    raise ParseError(f"{where}: expected a number or [re, im] pair, got {item!r}")


def state_to_json(state) -> dict:
    if isinstance(state, PureState):
        return {"dims": list(state.dims), "amplitudes": [_encode_complex(z) for z in state.amplitudes]}
    return {"dims": list(state.dims), "matrix": [[_encode_complex(z) for z in row] for row in state.matrix]}


def state_from_json(doc) -> DensityOperator | PureState:
    if not isinstance(doc, dict):
        raise ParseError("state document must be a JSON object")
    dims = doc.get("dims")
    if dims is not None and (not isinstance(dims, list) or not all(isinstance(d, int) for d in dims)):
        raise ParseError(f"field 'dims': expected a list of integers, got {dims!r}")
    if "matrix" in doc:
        rows = doc["matrix"]
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise ParseError("field 'matrix': expected a list of rows")
        m = np.array(
            [[_decode_complex(x, f"matrix[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(rows)]
        )
        return density_from_matrix(m, dims)
    if "amplitudes" in doc:
        amps = doc["amplitudes"]
        if not isinstance(amps, list) or not amps:
            raise ParseError("field 'amplitudes': expected a non-empty list")
        v = np.array([_decode_complex(x, f"amplitudes[{i}]") for i, x in enumerate(amps)])
        return pure_state(v, dims)
    raise ParseError("state document needs a 'matrix' or an 'amplitudes' field")


def load_state(path) -> DensityOperator | PureState:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return state_from_json(doc)


def save_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state)) + "\n")


def load_basis(path) -> ReferenceBasis:
    """Basis file: {"label": ..., "unitary": [[[re, im], ...], ...]} (columns are basis vectors)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "unitary" not in doc:
        raise ParseError(f"{path}: basis document needs a 'unitary' field")
    rows = doc["unitary"]
    m = np.array([[_decode_complex(x, f"unitary[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])
    return ReferenceBasis(m, str(doc.get("label", Path(path).stem)))
