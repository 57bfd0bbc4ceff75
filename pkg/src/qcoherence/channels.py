"""CPTP channels in Kraus form: presets, application, predicates and dilation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadParameter, DimensionMismatch, ParseError, UnknownPreset
from .gates import PAULI_X, PAULI_Y, PAULI_Z, UnitaryGate, build_gate
from .linalg import as_matrix, dagger, max_norm, partial_trace, tensor_product
from .states import (
    DensityOperator,
    _matrix_of,
    as_basis,
    dephase_matrix,
    random_density,
)

CPTP_TOL = 1e-9
PREDICATE_TOL = 1e-9
PRESETS = ("bit_flip", "phase_flip", "bit_phase_flip", "amplitude_damping", "depolarizing")


@dataclass(frozen=True)
class KrausChannel:
    kraus_ops: tuple
    param_tag: str = "custom"
    params: tuple = field(default=(), compare=False)

    def __post_init__(self):
        ops = [as_matrix(k, name="Kraus operator") for k in self.kraus_ops]
        if not ops:
            raise DimensionMismatch("a channel needs at least one Kraus operator")
        d = ops[0].shape[1]
        if any(k.shape != (ops[0].shape[0], d) or k.shape[0] != d for k in ops):
            raise DimensionMismatch("Kraus operators must share one square shape")
        stack = np.array(ops)
        err = max_norm(np.einsum("kji,kjl->il", np.conj(stack), stack) - np.eye(d))
        if err > CPTP_TOL:
            raise BadParameter(f"not trace preserving: max |sum K^dagger K - I| = {err:.3e}")
        stack.flags.writeable = False
        object.__setattr__(self, "kraus_ops", stack)

    @property
    def dim(self) -> int:
        return self.kraus_ops.shape[1]

    @cached_property
    def unital(self) -> bool:
        return is_unital(self)

    @cached_property
    def dephasing_commuting(self) -> bool:
        return commutes_with_dephasing(self)

    def apply_raw(self, m: np.ndarray) -> np.ndarray:
        """sum_k K m K^dagger for a matrix or a stack of matrices."""
        k = self.kraus_ops
        if m.ndim == 2:
            return np.einsum("kij,jl,kml->im", k, m, np.conj(k))
        return np.einsum("kij,njl,kml->nim", k, m, np.conj(k))

    def __str__(self):
        return self.param_tag


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel([np.eye(d)], f"identity:{d}", (d,))


def preset_channel(name: str, param: float) -> KrausChannel:
    """Standard qubit noise channels.

    ``amplitude_damping(eta)`` uses eta as the survival amplitude squared,
    so eta = 1 is the identity and eta = 0 relaxes everything to |0>.
    ``depolarizing(p)`` is (1-p) rho + p I/2.
    """
    param = float(param)
    if name not in PRESETS:
        raise UnknownPreset(f"unknown channel preset {name!r}; choose from {', '.join(PRESETS)}")
    if not 0.0 <= param <= 1.0 or math.isnan(param):
        raise BadParameter(f"{name} parameter must lie in [0, 1], got {param}")
    eye = np.eye(2)
    if name == "bit_flip":
        ops = [math.sqrt(1 - param) * eye, math.sqrt(param) * PAULI_X]
    elif name == "phase_flip":
        ops = [math.sqrt(1 - param) * eye, math.sqrt(param) * PAULI_Z]
    elif name == "bit_phase_flip":
        ops = [math.sqrt(1 - param) * eye, math.sqrt(param) * PAULI_Y]
    elif name == "amplitude_damping":
        ops = [np.diag([1.0, math.sqrt(param)]), np.array([[0.0, math.sqrt(1 - param)], [0.0, 0.0]])]
    else:
        q = math.sqrt(param / 4)
        ops = [math.sqrt(1 - 3 * param / 4) * eye, q * PAULI_X, q * PAULI_Y, q * PAULI_Z]
    return KrausChannel(ops, f"{name}:{param!r}", (param,))


def parse_channel_spec(text: str) -> KrausChannel:
    """``<preset>:<param>``, ``identity[:d]`` or ``dilation:<gate spec>``.

    For dilations the ancilla is taken to be one qubit.
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    if name == "identity":
        try:
            return identity_channel(int(rest) if rest else 2)
        except ValueError:
            raise ParseError(f"{text!r}: expected identity:<d>") from None
    if name == "dilation":
        return dilate(build_gate(rest), 2)
    if name in PRESETS:
        try:
            value = float(rest)
        except ValueError:
            raise ParseError(f"{text!r}: expected {name}:<number>") from None
        return preset_channel(name, value)
    raise UnknownPreset(f"unknown channel spec {text!r}")


def apply_channel(channel: KrausChannel, rho) -> DensityOperator:
    m = _matrix_of(rho)
    if m.shape[0] != channel.dim:
        raise DimensionMismatch(f"channel acts on dimension {channel.dim}, state has {m.shape[0]}")
    dims = rho.dims if isinstance(rho, DensityOperator) else None
    return DensityOperator(channel.apply_raw(m), dims)


def dilate(u, ancilla_dim: int) -> KrausChannel:
    """Kraus operators K_e = (I x <e|) U (I x |0>) of a system-ancilla unitary."""
    gate = build_gate(u)
    d = gate.dim
    if ancilla_dim < 1 or d % ancilla_dim:
        raise DimensionMismatch(f"unitary dimension {d} is not divisible by ancilla dimension {ancilla_dim}")
    ds = d // ancilla_dim
    t = gate.matrix.reshape(ds, ancilla_dim, ds, ancilla_dim)
    ops = [t[:, e, :, 0] for e in range(ancilla_dim)]
    return KrausChannel(ops, f"dilation[{gate.spec}]", (gate.spec, ancilla_dim))


def channel_tensor(e: KrausChannel, f: KrausChannel) -> KrausChannel:
    ops = [tensor_product(k, l) for k in e.kraus_ops for l in f.kraus_ops]
    return KrausChannel(ops, f"{e.param_tag}*{f.param_tag}")


def probe_states(d: int) -> list[np.ndarray]:
    """Fixed probe set: matrix units turned into states, plus 20 seeded random states.

    Diagonal units give |i><i|; each pair i<j gives the two pure states
    (|i>+|j>)/sqrt2 and (|i>+i|j>)/sqrt2, whose span covers the real and
    imaginary parts of the off-diagonal units.
    """
    probes = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        probes.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            for phase in (1.0, 1j):
                v = np.zeros(d, dtype=complex)
                v[i], v[j] = 1 / math.sqrt(2), phase / math.sqrt(2)
                probes.append(np.outer(v, np.conj(v)))
    rng = np.random.default_rng(20160901)
    probes.extend(random_density(d, rng).matrix for _ in range(20))
    return probes


def commutes_with_dephasing(channel: KrausChannel, basis=None) -> bool:
    """Decide [E, Delta] = 0 on the fixed probe set with tolerance 1e-9."""
    b = as_basis(basis, channel.dim)
    if b.dim != channel.dim:
        raise DimensionMismatch(f"basis dimension {b.dim} differs from channel dimension {channel.dim}")
    u = None if b.is_computational else b.unitary
    stack = np.array(probe_states(channel.dim))
    lhs = channel.apply_raw(dephase_matrix(stack, u))
    rhs = dephase_matrix(channel.apply_raw(stack), u)
    return max_norm(lhs - rhs) <= PREDICATE_TOL


def is_unital(channel: KrausChannel) -> bool:
    d = channel.dim
    mixed = np.eye(d) / d
    return max_norm(channel.apply_raw(mixed) - mixed) <= PREDICATE_TOL


def channel_deviation(e: KrausChannel, f: KrausChannel) -> float:
    """Largest output deviation over the probe set; Kraus sets are not unique."""
    if e.dim != f.dim:
        raise DimensionMismatch(f"channels act on dimensions {e.dim} and {f.dim}")
    stack = np.array(probe_states(e.dim))
    return max_norm(e.apply_raw(stack) - f.apply_raw(stack))


def stinespring_output(u: UnitaryGate, rho, ancilla_dim: int) -> np.ndarray:
    """Tr_E[U (rho x |0><0|) U^dagger], computed without Kraus operators."""
    m = _matrix_of(rho)
    anc = np.zeros((ancilla_dim, ancilla_dim))
    anc[0, 0] = 1.0
    joint = u.matrix @ np.kron(m, anc) @ dagger(u.matrix)
    return partial_trace(joint, (m.shape[0], ancilla_dim), [0])
