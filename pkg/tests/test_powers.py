import math

import numpy as np
import pytest

from qcoherence.channels import channel_tensor, dilate, identity_channel, preset_channel
from qcoherence.errors import BadParameter, DimensionMismatch
from qcoherence.gates import build_gate
from qcoherence.measures import coherence_rel_entropy
from qcoherence.optimize import Axis, maximize, minimize
from qcoherence.powers import (
    MaxCoherentSet,
    binary_entropy,
    cohering_power,
    cohering_power_zyz,
    decohering_power,
    max_output_entropy,
    sup_cohering_power,
)
from qcoherence.states import ReferenceBasis, random_unitary


def test_optimizer_finds_interior_minimum():
    axes = [Axis(-1.0, 1.0, 9), Axis(0.0, 2 * math.pi, 16, periodic=True)]

    def f(x):
        return (x[:, 0] - 0.123) ** 2 + (1 - np.cos(x[:, 1] - 2.0))

    res = minimize(f, axes)
    assert np.allclose(res.x, [0.123, 2.0], atol=1e-6)
    assert np.isclose(maximize(lambda x: -f(x), axes).value, 0.0, atol=1e-10)


def test_optimizer_is_deterministic():
    axes = [Axis(0.0, 1.0, 7)]
    a = minimize(lambda x: np.sin(7 * x[:, 0]), axes)
    b = minimize(lambda x: np.sin(7 * x[:, 0]), axes)
    assert a.x.tolist() == b.x.tolist() and a.value == b.value


def test_hadamard_and_paulis():
    assert np.isclose(cohering_power("H").value, 1.0, atol=1e-12)
    for g in ("X", "Y", "Z", "I:3", "CNOT", "GCNOT:3"):
        assert abs(cohering_power(g).value) <= 1e-12


def test_zyz_closed_form(rng):
    for _ in range(10):
        a, b, g, d = rng.uniform(-math.pi, math.pi, 4)
        assert np.isclose(cohering_power(build_gate("ZYZ", a, b, g, d)).value, cohering_power_zyz(g), atol=1e-9)
    assert np.isclose(cohering_power_zyz(math.pi / 3), 0.811278124459, atol=1e-9)


def test_bell_basis_readout():
    hh = build_gate(np.kron(build_gate("H").matrix, build_gate("H").matrix))
    bell = ReferenceBasis.bell()
    assert np.isclose(cohering_power(hh, bell, input_basis=ReferenceBasis.computational(4)).value, 1.0)
    # H x H maps the Bell basis onto itself up to phases.
    assert abs(cohering_power(hh, bell).value) <= 1e-12


def test_cohering_power_dimension_check():
    with pytest.raises(DimensionMismatch):
        cohering_power("H", ReferenceBasis.bell())


def test_max_coherent_set_validation():
    with pytest.raises(BadParameter):
        MaxCoherentSet("loose", 2)
    assert MaxCoherentSet("free", 2).points_per_phase() == 64
    assert MaxCoherentSet("free", 4).points_per_phase() == 16


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.9])
def test_canonical_qubit_identity(p):
    plus = np.full((2, 2), 0.5)
    for name in ("phase_flip", "bit_phase_flip", "amplitude_damping", "depolarizing"):
        ch = preset_channel(name, p)
        out = coherence_rel_entropy(ch.apply_raw(plus))
        assert np.isclose(decohering_power(ch, "canonical").value + out, 1.0, atol=1e-9)
    assert abs(decohering_power(preset_channel("bit_flip", p), "canonical").value) <= 1e-9


def test_free_mode_bit_flip_sees_y_states():
    ch = preset_channel("bit_flip", 0.5)
    res = decohering_power(ch, "free")
    assert np.isclose(res.value, 1.0, atol=1e-9)
    assert np.isclose(res.value, max_output_entropy(ch, "free").value, atol=1e-6)


def test_identity_channel_has_zero_decohering_power():
    assert abs(decohering_power(identity_channel(3), "free").value) <= 1e-9


def test_tensor_decohering_canonical():
    e, f = preset_channel("phase_flip", 0.3), preset_channel("depolarizing", 0.6)
    joint = decohering_power(channel_tensor(e, f), MaxCoherentSet("canonical", 4)).value
    parts = decohering_power(e, "canonical").value + decohering_power(f, "canonical").value
    assert joint >= parts - 1e-9


@pytest.mark.parametrize("eta", [0.0, 0.25, 0.5, 1.0])
def test_sup_cohering_adc(eta):
    u = build_gate("U_adc", eta)
    assert np.isclose(sup_cohering_power(u).value, 1 + 0.5 * binary_entropy(eta), atol=1e-9)
    assert np.isclose(cohering_power(u).value, binary_entropy(eta), atol=1e-9)
    d = decohering_power(dilate(u, 2), "free").value
    assert d + sup_cohering_power(u, mode="free").value >= 1 - 1e-6


def test_sup_cohering_dims_check():
    with pytest.raises(DimensionMismatch):
        sup_cohering_power("CNOT", (2, 3))


def test_random_unitary_power_bounds(rng):
    for d in (2, 3, 4):
        c = cohering_power(random_unitary(d, rng)).value
        assert 0 <= c <= math.log2(d) + 1e-12
