"""Unitary gate constructors and the gate spec-string grammar.

Spec strings, as accepted by :func:`parse_gate_spec` and the CLI::

    X | Y | Z | H | I[:d] | CNOT | Rz:beta | Ry:gamma | ZYZ:alpha,beta,gamma,delta
    GCNOT:d | U_adc:eta | controlled:n:<inner spec>
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import BadParameter, DimensionMismatch, NotUnitary, ParseError, UnknownPreset
from .linalg import as_matrix, unitarity_error

UNITARY_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex, copy=True)
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class UnitaryGate:
    """A validated unitary together with a tag saying how it was built."""

    matrix: np.ndarray
    spec: str = "matrix"
    params: tuple = field(default=(), compare=False)

    def __post_init__(self):
        m = as_matrix(self.matrix, name="gate")
        if m.shape[0] != m.shape[1]:
            raise NotUnitary(f"gate matrix is not square: {m.shape}")
        err = unitarity_error(m)
        if err > UNITARY_TOL:
            raise NotUnitary(f"max |U^dagger U - I| = {err:.3e} exceeds {UNITARY_TOL:.0e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __str__(self):
        return self.spec


def rz(beta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * beta), np.exp(0.5j * beta)])


def ry(gamma: float) -> np.ndarray:
    c, s = math.cos(gamma / 2), math.sin(gamma / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def zyz(alpha: float, beta: float, gamma: float, delta: float) -> np.ndarray:
    """e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    return np.exp(1j * alpha) * (rz(beta) @ ry(gamma) @ rz(delta))


def gcnot(d: int) -> np.ndarray:
    """|i>|j> -> |i>|i+j mod d>; the first factor is the control."""
    if d < 2:
        raise BadParameter(f"GCNOT needs d >= 2, got {d}")
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            m[i * d + (i + j) % d, i * d + j] = 1.0
    return m


def u_adc(eta: float) -> np.ndarray:
    """System-environment interaction unitary of the amplitude damping channel.

    Ordering is |system, environment>; ``eta`` is the probability that an
    excitation stays in the system.
    """
    if not 0.0 <= eta <= 1.0:
        raise BadParameter(f"eta must lie in [0, 1], got {eta}")
    a, b = math.sqrt(eta), math.sqrt(1.0 - eta)
    return np.array(
        [[1, 0, 0, 0],
         [0, a, b, 0],
         [0, -b, a, 0],
         [0, 0, 0, 1]],
        dtype=complex,
    )


def controlled(n: int, u: np.ndarray) -> np.ndarray:
    """Apply ``u`` to the trailing qubits iff all ``n`` leading control bits are 1."""
    if n < 1:
        raise BadParameter(f"need at least one control qubit, got {n}")
    u = as_matrix(u)
    k = u.shape[0]
    m = np.eye((2 ** n) * k, dtype=complex)
    m[-k:, -k:] = u
    return m


def _floats(text: str, count: int, spec: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != count:
        raise ParseError(f"{spec!r}: expected {count} comma-separated numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"{spec!r}: {exc}") from None


def _int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{spec!r}: expected an integer, got {text!r}") from None


def build_gate(spec: Any, *args) -> UnitaryGate:
    """Build a :class:`UnitaryGate` from a spec string, a tuple, or a matrix.

    Examples: ``build_gate("H")``, ``build_gate("ZYZ", 0, 0.3, 1.1, 0.2)``,
    ``build_gate("controlled", 2, "H")``, ``build_gate("U_adc:0.36")``,
    ``build_gate(np.eye(4))``.
    """
    if isinstance(spec, UnitaryGate):
        return spec
    if not isinstance(spec, str):
        return UnitaryGate(as_matrix(spec), "matrix")
    if args:
        return _build(spec, list(args))
    return parse_gate_spec(spec)


def parse_gate_spec(text: str) -> UnitaryGate:
    text = text.strip()
    name, _, rest = text.partition(":")
    key = name.strip()
    if key == "controlled":
        n_text, sep, inner = rest.partition(":")
        if not sep or not inner:
            raise ParseError(f"{text!r}: expected controlled:<n>:<gate spec>")
        return _build("controlled", [_int(n_text, text), parse_gate_spec(inner)])
    if key in ("X", "Y", "Z", "H", "CNOT") and not rest:
        return _build(key, [])
    if key == "I":
        return _build("I", [_int(rest, text)] if rest else [])
    if key in ("Rz", "Ry", "U_adc"):
        return _build(key, _floats(rest, 1, text))
    if key == "ZYZ":
        return _build(key, _floats(rest, 4, text))
    if key == "GCNOT":
        return _build(key, [_int(rest, text)])
    raise UnknownPreset(f"unknown gate spec {text!r}")


def _build(name: str, args: list) -> UnitaryGate:
    fixed = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z, "H": HADAMARD, "CNOT": gcnot(2)}
    if name in fixed:
        if args:
            raise BadParameter(f"{name} takes no parameters")
        return UnitaryGate(fixed[name], name)
    if name == "I":
        d = int(args[0]) if args else 2
        if d < 1:
            raise BadParameter(f"identity dimension must be positive, got {d}")
        return UnitaryGate(np.eye(d), f"I:{d}", (d,))
    if name == "Rz":
        return UnitaryGate(rz(args[0]), f"Rz:{args[0]!r}", tuple(args))
    if name == "Ry":
        return UnitaryGate(ry(args[0]), f"Ry:{args[0]!r}", tuple(args))
    if name == "ZYZ":
        if len(args) != 4:
            raise BadParameter("ZYZ takes four angles (alpha, beta, gamma, delta)")
        return UnitaryGate(zyz(*args), "ZYZ:" + ",".join(repr(float(a)) for a in args), tuple(args))
    if name == "GCNOT":
        d = int(args[0])
        return UnitaryGate(gcnot(d), f"GCNOT:{d}", (d,))
    if name == "U_adc":
        eta = float(args[0])
        return UnitaryGate(u_adc(eta), f"U_adc:{eta!r}", (eta,))
    if name == "controlled":
        n, inner = int(args[0]), build_gate(args[1])
        if inner.dim & (inner.dim - 1):
            raise DimensionMismatch(f"controlled target must act on qubits, got dimension {inner.dim}")
        return UnitaryGate(controlled(n, inner.matrix), f"controlled:{n}:{inner.spec}", (n, inner.spec))
    if name == "matrix":
        return UnitaryGate(as_matrix(args[0]), "matrix")
    raise UnknownPreset(f"unknown gate {name!r}")
