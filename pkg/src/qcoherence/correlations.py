"""Bipartite coherence and correlation quantities.

Subsystem A is factor 0 and B is factor 1. Incoherence on AB refers to the
product basis basis_a x basis_b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotBipartite, UnsupportedDimension, UnsupportedOperation
from .gates import UnitaryGate, build_gate
from .linalg import dagger, eig_hermitian, eigvalsh, partial_trace
from .measures import (
    coherence_rel_entropy,
    entropy_of_matrices,
    spectrum_entropy,
    von_neumann_entropy,
)
from .optimize import Axis, minimize
from .report import VerificationReport, at_least, equal, info
from .states import (
    DensityOperator,
    PureState,
    ReferenceBasis,
    _matrix_of,
    as_basis,
    dephase,
    density_from_matrix,
)

BRANCH_CUTOFF = 1e-12
IDENTITY_TOL = 1e-9
GRID_TOL = 1e-6


@dataclass(frozen=True)
class BipartiteState:
    state: DensityOperator
    basis_a: ReferenceBasis = None
    basis_b: ReferenceBasis = None

    def __post_init__(self):
        st = self.state
        if isinstance(st, PureState):
            st = st.density()
        elif not isinstance(st, DensityOperator):
            st = density_from_matrix(st, (2, 2) if np.shape(st)[0] == 4 else None)
        if len(st.dims) != 2:
            raise NotBipartite(f"expected two subsystems, got dims {st.dims}")
        d_a, d_b = st.dims
        ba = as_basis(self.basis_a, d_a)
        bb = as_basis(self.basis_b, d_b)
        if ba.dim != d_a or bb.dim != d_b:
            raise DimensionMismatch(f"local bases ({ba.dim}, {bb.dim}) do not match dims {st.dims}")
        object.__setattr__(self, "state", st)
        object.__setattr__(self, "basis_a", ba)
        object.__setattr__(self, "basis_b", bb)

    @property
    def dims(self) -> tuple[int, int]:
        return self.state.dims

    @property
    def product_basis(self) -> ReferenceBasis:
        return self.basis_a.tensor(self.basis_b)

    def reduced_a(self) -> DensityOperator:
        return DensityOperator(partial_trace(self.state.matrix, self.dims, [0]))

    def reduced_b(self) -> DensityOperator:
        return DensityOperator(partial_trace(self.state.matrix, self.dims, [1]))


def as_bipartite(rho, dims=None) -> BipartiteState:
    if isinstance(rho, BipartiteState):
        return rho
    if isinstance(rho, PureState):
        rho = rho.density()
    if not isinstance(rho, DensityOperator):
        rho = density_from_matrix(_matrix_of(rho), dims)
    elif dims is not None and tuple(dims) != rho.dims:
        rho = DensityOperator(rho.matrix, tuple(dims))
    return BipartiteState(rho)


def qi_relative_entropy(rho) -> float:
    """S(Delta_A(rho)) - S(rho): distance to the quantum-incoherent states."""
    bs = as_bipartite(rho)
    chi = dephase(bs.state, bs.basis_a, [0])
    value = von_neumann_entropy(chi) - von_neumann_entropy(bs.state)
    return 0.0 if -IDENTITY_TOL <= value < 0 else value


def measurement_branches(bs: BipartiteState, basis_a=None):
    """Outcome probabilities p_i and conditional states of B after measuring A."""
    d_a, d_b = bs.dims
    vecs = as_basis(basis_a, d_a).unitary if basis_a is not None else bs.basis_a.unitary
    t = bs.state.matrix.reshape(d_a, d_b, d_a, d_b)
    branches = []
    for i in range(d_a):
        a = vecs[:, i]
        block = np.einsum("x,xbyc,y->bc", np.conj(a), t, a)
        p = float(np.real(np.trace(block)))
        branches.append((p, block / p if p > BRANCH_CUTOFF else None))
    return branches


def discord_fixed_basis(rho) -> float:
    """S(rho_A) - S(rho_AB) + sum_i p_i S(rho_B|i), measuring A in its reference basis."""
    bs = as_bipartite(rho)
    value = von_neumann_entropy(bs.reduced_a()) - von_neumann_entropy(bs.state)
    for p, cond in measurement_branches(bs):
        if cond is not None:
            value += p * float(entropy_of_matrices(cond))
    return 0.0 if -1e-12 <= value < 0 else value


def _qubit_basis(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """(N, 2, 2) unitaries with columns (cos t/2, e^{i f} sin t/2) and its orthogonal partner."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    u = np.empty(theta.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 0] = e * s
    u[..., 0, 1] = -np.conj(e) * s
    u[..., 1, 1] = c
    return u


def _bloch_angles(u: np.ndarray) -> tuple[float, float]:
    a0 = u[:, 0]
    theta = 2 * math.acos(min(1.0, abs(a0[0])))
    phi = float(np.angle(a0[1]) - np.angle(a0[0])) % (2 * math.pi) if abs(a0[1]) > 1e-15 else 0.0
    return theta, phi


@dataclass(frozen=True)
class DeficitResult:
    value: float
    theta: float
    phi: float
    basis: np.ndarray
    grid_spec: dict = field(default_factory=dict)


def optimize_deficit(rho, points: int = 64, iterations: int = 32) -> DeficitResult:
    """Minimize S(Delta_A^b(rho)) - S(rho) over qubit bases b of A."""
    bs = as_bipartite(rho)
    d_a, d_b = bs.dims
    if d_a != 2:
        raise UnsupportedDimension(f"one-way deficit is implemented for a qubit A only, got d_A = {d_a}")
    t = bs.state.matrix.reshape(2, d_b, 2, d_b)
    s_rho = von_neumann_entropy(bs.state)

    def objective(x):
        u = _qubit_basis(x[:, 0], x[:, 1])
        blocks = np.einsum("nxi,xbyc,nyi->nibc", np.conj(u), t, u)
        w = eigvalsh(blocks.reshape(-1, d_b, d_b)).reshape(len(x), -1)
        return spectrum_entropy(w) - s_rho

    axes = [Axis(0.0, math.pi, points), Axis(0.0, 2 * math.pi, points, periodic=True)]
    extra = np.array([_bloch_angles(bs.basis_a.unitary)])
    res = minimize(objective, axes, iterations=iterations, extra=extra)
    value = 0.0 if -IDENTITY_TOL <= res.value < 0 else res.value
    theta, phi = float(res.x[0]), float(res.x[1])
    spec = {"grid": [points, points], "refinement_iterations": iterations, "evaluations": res.evaluations}
    return DeficitResult(float(value), theta, phi, _qubit_basis(np.array(theta), np.array(phi)), spec)


def one_way_deficit(rho, points: int = 64, iterations: int = 32) -> float:
    return optimize_deficit(rho, points, iterations).value


def ree_pure(psi, dims=None) -> float:
    """Relative entropy of entanglement of a pure bipartite state: S(Tr_B |psi><psi|)."""
    if isinstance(psi, DensityOperator):
        raise NotBipartite("ree_pure needs a pure state vector")
    if not isinstance(psi, PureState):
        psi = PureState(np.asarray(psi, dtype=complex), None if dims is None else tuple(dims))
    elif dims is not None:
        psi = PureState(psi.amplitudes, tuple(dims))
    if len(psi.dims) != 2:
        raise NotBipartite(f"expected two subsystems, got dims {psi.dims}")
    d_a, d_b = psi.dims
    m = psi.amplitudes.reshape(d_a, d_b)
    return von_neumann_entropy(m @ dagger(m))


@dataclass(frozen=True)
class ChainReport:
    operation: str
    pure: bool
    values: dict
    margins: dict

    def holds(self, tol: float = IDENTITY_TOL) -> bool:
        return all(m >= -tol for m in self.margins.values())

    def equalities(self, tol: float = IDENTITY_TOL) -> bool:
        return all(abs(m) <= tol for m in self.margins.values())


def _chain_operation(op, d: int) -> UnitaryGate:
    if isinstance(op, UnitaryGate):
        spec = op.spec
    else:
        spec = str(op).strip()
    if spec == "CNOT":
        if d != 2:
            raise DimensionMismatch(f"CNOT needs a qubit system, got d = {d}")
        return build_gate("CNOT")
    if spec.startswith("GCNOT"):
        gate = build_gate(spec) if ":" in spec else build_gate("GCNOT", d)
        if gate.dim != d * d:
            raise DimensionMismatch(f"{gate.spec} does not act on a {d}-level system with a {d}-level ancilla")
        return gate
    raise UnsupportedOperation(f"chain checks support CNOT and GCNOT only, got {spec!r}")


def _pure_vector(rho_a) -> np.ndarray | None:
    if isinstance(rho_a, PureState):
        return rho_a.amplitudes
    m = _matrix_of(rho_a)
    purity = float(np.real(np.trace(m @ m)))
    if purity < 1 - 1e-10:
        return None
    return eig_hermitian(m).eigenvectors[:, -1]


def verify_coherence_chain(rho_a, op="GCNOT") -> ChainReport:
    """Coherence of rho_A against the global coherence after an incoherent
    system-ancilla unitary, and for pure inputs against the correlation and
    entanglement of the output."""
    m = _matrix_of(rho_a)
    d = m.shape[0]
    gate = _chain_operation(op, d)
    anc = np.zeros((d, d))
    anc[0, 0] = 1.0
    out = gate.matrix @ np.kron(m, anc) @ dagger(gate.matrix)
    c_a = coherence_rel_entropy(m)
    c_ae = coherence_rel_entropy(out)
    values = {"C_A": c_a, "C_AE": c_ae}
    margins = {"C_A-C_AE": c_a - c_ae}
    vec = _pure_vector(rho_a)
    if vec is not None:
        e0 = np.zeros(d)
        e0[0] = 1.0
        out_vec = gate.matrix @ np.kron(vec, e0)
        e_re = ree_pure(PureState(out_vec / np.linalg.norm(out_vec), (d, d)))
        q = qi_relative_entropy(DensityOperator(out, (d, d)))
        values["Q"] = q
        values["E"] = e_re
        margins["C_AE-Q"] = c_ae - q
        margins["Q-E"] = q - e_re
    return ChainReport(gate.spec, vec is not None, values, margins)


def compact_relation_terms(rho) -> tuple[float, float, float]:
    """(C_re(chi), C_re^{->}(rho), C_re(rho)) with chi = Delta_A(rho), all in the product basis."""
    bs = as_bipartite(rho)
    prod = bs.product_basis
    chi = dephase(bs.state, bs.basis_a, [0])
    return coherence_rel_entropy(chi, prod), qi_relative_entropy(bs), coherence_rel_entropy(bs.state, prod)


def verify_deficit_relations(rho, *, label: str = "state", points: int = 64) -> VerificationReport:
    bs = as_bipartite(rho)
    if bs.dims[0] != 2:
        raise UnsupportedDimension(f"deficit relations need a qubit A, got d_A = {bs.dims[0]}")
    report = VerificationReport(f"deficit[{label}]")
    c_a = coherence_rel_entropy(bs.reduced_a(), bs.basis_a)
    disc = discord_fixed_basis(bs)
    qi = qi_relative_entropy(bs)
    report.checks.append(equal(f"{label}:local-coherence-plus-discord", "coherence-discord-identity",
                               c_a + disc, qi, IDENTITY_TOL))
    c_chi, qi2, c_ab = compact_relation_terms(bs)
    report.checks.append(equal(f"{label}:compact-relation", "compact-relation", c_chi + qi2, c_ab, IDENTITY_TOL))

    opt = optimize_deficit(bs, points)
    report.checks.append(at_least(f"{label}:deficit-below-qi", "deficit-upper-bound", qi, opt.value, GRID_TOL))

    rotated = BipartiteState(bs.state, ReferenceBasis(opt.basis, "deficit-optimal"), bs.basis_b)
    c_a_opt = coherence_rel_entropy(rotated.reduced_a(), rotated.basis_a)
    disc_opt = discord_fixed_basis(rotated)
    report.checks.append(equal(f"{label}:tradeoff-at-deficit-basis", "deficit-tradeoff",
                               c_a_opt + disc_opt, opt.value, GRID_TOL,
                               note="local coherence + discord in the deficit-optimal basis"))
    report.checks.append(at_least(f"{label}:tradeoff-at-reference-basis", "deficit-tradeoff",
                                  c_a + disc, opt.value, GRID_TOL,
                                  note="local coherence + discord in the reference basis"))
    regime = "equality" if abs(c_a + disc - opt.value) <= GRID_TOL else "strict"
    report.checks.append(info(f"{label}:strong-tradeoff-regime", "deficit-tradeoff", c_a + disc, opt.value,
                              note=f"reference basis is {'' if regime == 'equality' else 'not '}deficit-optimal"))
    return report
