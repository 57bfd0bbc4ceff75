"""Cohering power of unitaries, decohering power of channels, and sup-cohering
power of system-ancilla interaction unitaries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import KrausChannel
from .errors import BadParameter, DimensionMismatch
from .gates import build_gate
from .measures import coherence_batch, entropy_of_matrices, pure_coherence_batch
from .optimize import Axis, maximize, minimize
from .states import ReferenceBasis, as_basis, canonical_phase_patterns, phase_vectors

TIE_TOL = 1e-12
MAX_GRID_POINTS = 65536
MODES = ("canonical", "free")


@dataclass(frozen=True)
class PowerResult:
    value: float
    maximizer: dict
    mode: str
    grid_spec: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class MaxCoherentSet:
    """Candidate maximally coherent states on a d-dimensional system.

    ``canonical`` holds the 2^{d-1} real sign patterns (for a qubit, |+>
    and |->). ``free`` holds every phase vector and is searched on a
    periodic grid of ``resolution`` points per phase, then refined.
    """

    mode: str = "free"
    d: int = 2
    resolution: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise BadParameter(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.d < 2:
            raise BadParameter("maximally coherent sets need d >= 2")
        if self.resolution is not None and self.resolution < 2:
            raise BadParameter("grid resolution must be at least 2")

    def points_per_phase(self) -> int:
        if self.resolution is not None:
            return self.resolution
        if self.d == 2:
            return 64
        per = 16
        while per ** (self.d - 1) > MAX_GRID_POINTS and per > 2:
            per -= 2
        return per

    def canonical_phases(self) -> np.ndarray:
        return np.array(canonical_phase_patterns(self.d), dtype=float)

    def axes(self) -> list[Axis]:
        return [Axis(0.0, 2 * math.pi, self.points_per_phase(), periodic=True) for _ in range(self.d - 1)]


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1 - x) * math.log2(1 - x))


def _first_best(values: np.ndarray, best: float) -> int:
    return int(np.flatnonzero(np.abs(values - best) <= TIE_TOL)[0])


def cohering_power(u, basis=None, input_basis=None) -> PowerResult:
    """max_i C_re(U |i><i| U^dagger) over the incoherent basis states.

    Coherence is measured in ``basis``. The inputs |i> are the columns of
    ``input_basis``, which defaults to ``basis``. Passing a different input
    basis evaluates states prepared in one basis and read out in another.
    """
    gate = build_gate(u)
    d = gate.dim
    b = as_basis(basis, d)
    b_in = b if input_basis is None else as_basis(input_basis, d)
    if b.dim != d or b_in.dim != d:
        raise DimensionMismatch(f"gate dimension {d} does not match basis dimension {b.dim}/{b_in.dim}")
    outputs = gate.matrix @ b_in.unitary
    psi = outputs.T
    rho = psi[:, :, None] * np.conj(psi[:, None, :])
    values = coherence_batch(rho, None if b.is_computational else b.unitary)
    best = float(values.max())
    idx = _first_best(values, best)
    return PowerResult(
        value=best,
        maximizer={"basis_index": idx},
        mode="exact",
        grid_spec={"candidates": d, "basis": b.label, "input_basis": b_in.label},
    )


def cohering_power_zyz(gamma: float) -> float:
    """Closed form for e^{i a} Rz(b) Ry(gamma) Rz(c): H(cos^2(gamma/2), sin^2(gamma/2))."""
    return binary_entropy(math.cos(gamma / 2) ** 2)


def _candidate_states(phases: np.ndarray, basis: ReferenceBasis) -> np.ndarray:
    psi = phase_vectors(phases)
    if not basis.is_computational:
        psi = psi @ basis.unitary.T
    return psi


def _mset_for(channel_dim: int, mset) -> MaxCoherentSet:
    if mset is None:
        return MaxCoherentSet("free", channel_dim)
    if isinstance(mset, str):
        return MaxCoherentSet(mset, channel_dim)
    if mset.d != channel_dim:
        raise DimensionMismatch(f"candidate set dimension {mset.d} differs from channel dimension {channel_dim}")
    return mset


def _search_over_set(objective, mset: MaxCoherentSet, *, maximize_it: bool, hints=None):
    """Optimize ``objective(phases (N, d-1)) -> (N,)`` over the candidate set.

    ``hints`` are extra free-mode phase vectors scored alongside the grid.
    """
    if mset.mode == "canonical":
        phases = mset.canonical_phases()
        values = np.asarray(objective(phases), dtype=float)
        best = float(values.max() if maximize_it else values.min())
        idx = _first_best(values, best)
        return best, phases[idx], {"candidates": len(phases)}
    search = maximize if maximize_it else minimize
    res = search(objective, mset.axes(), extra=None if hints is None else np.atleast_2d(hints))
    spec = {
        "points_per_phase": mset.points_per_phase(),
        "grid_points": res.grid_points,
        "refinement_iterations": res.iterations,
        "final_step": res.final_step,
        "evaluations": res.evaluations,
    }
    return res.value, res.x, spec


def _output_coherence(channel: KrausChannel, basis: ReferenceBasis):
    u = None if basis.is_computational else basis.unitary

    def objective(phases):
        psi = _candidate_states(phases, basis)
        rho = psi[:, :, None] * np.conj(psi[:, None, :])
        return coherence_batch(channel.apply_raw(rho), u)

    return objective


def decohering_power(channel: KrausChannel, mset=None, basis=None, hints=None) -> PowerResult:
    """log2 d - min over maximally coherent |psi> of C_re(E(|psi><psi|))."""
    d = channel.dim
    b = as_basis(basis, d)
    if b.dim != d:
        raise DimensionMismatch(f"basis dimension {b.dim} differs from channel dimension {d}")
    ms = _mset_for(d, mset)
    low, phases, spec = _search_over_set(_output_coherence(channel, b), ms, maximize_it=False, hints=hints)
    value = math.log2(d) - low
    return PowerResult(
        value=float(value),
        maximizer={"phases": [float(p) for p in phases], "output_coherence": float(low)},
        mode=ms.mode,
        grid_spec=spec,
    )


def max_output_entropy(channel: KrausChannel, mset=None, basis=None) -> PowerResult:
    """max over the candidate set of S(E(|psi><psi|))."""
    d = channel.dim
    b = as_basis(basis, d)
    ms = _mset_for(d, mset)

    def objective(phases):
        psi = _candidate_states(phases, b)
        rho = psi[:, :, None] * np.conj(psi[:, None, :])
        return entropy_of_matrices(channel.apply_raw(rho))

    high, phases, spec = _search_over_set(objective, ms, maximize_it=True)
    return PowerResult(float(high), {"phases": [float(p) for p in phases]}, ms.mode, spec)


def sup_cohering_power(u, dims=(2, 2), mode: str = "canonical", resolution: int | None = None,
                       basis=None) -> PowerResult:
    """max C_re(U |psi>|e>) over maximally coherent |psi> on A and basis states |e> on E."""
    gate = build_gate(u)
    d_a, d_e = (int(x) for x in dims)
    if d_a * d_e != gate.dim:
        raise DimensionMismatch(f"dims {d_a}x{d_e} do not factor the gate dimension {gate.dim}")
    if d_a < 2:
        raise DimensionMismatch("system A needs dimension >= 2")
    b = as_basis(basis, gate.dim)
    u_meas = None if b.is_computational else b.unitary
    ms = MaxCoherentSet(mode, d_a, resolution)

    best = None
    for e in range(d_e):
        anc = np.zeros(d_e)
        anc[e] = 1.0

        def objective(phases, anc=anc):
            psi_a = phase_vectors(phases)
            joint = np.einsum("na,e->nae", psi_a, anc).reshape(len(psi_a), -1)
            return pure_coherence_batch(joint @ gate.matrix.T, u_meas)

        value, phases, spec = _search_over_set(objective, ms, maximize_it=True)
        if best is None or value > best[0] + TIE_TOL:
            best = (value, phases, e, spec)
    value, phases, e, spec = best
    return PowerResult(
        value=float(value),
        maximizer={"phases": [float(p) for p in phases], "ancilla_index": e},
        mode=mode,
        grid_spec=spec,
    )
