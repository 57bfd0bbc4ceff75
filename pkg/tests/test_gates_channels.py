import math

import numpy as np
import pytest

from qcoherence.channels import (
    PRESETS,
    KrausChannel,
    apply_channel,
    channel_deviation,
    channel_tensor,
    commutes_with_dephasing,
    dilate,
    is_unital,
    parse_channel_spec,
    preset_channel,
    stinespring_output,
)
from qcoherence.errors import BadParameter, NotUnitary, ParseError, UnknownPreset
from qcoherence.gates import build_gate, controlled, gcnot, parse_gate_spec, u_adc
from qcoherence.states import maximally_coherent, random_density, random_unitary

KET0 = np.diag([1.0, 0.0])


def test_gate_specs():
    assert np.allclose(parse_gate_spec("H").matrix, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    assert parse_gate_spec("GCNOT:3").dim == 9
    assert parse_gate_spec("controlled:2:X").dim == 8
    assert np.allclose(parse_gate_spec("CNOT").matrix, gcnot(2))
    with pytest.raises(ParseError):
        parse_gate_spec("Rz:abc")
    with pytest.raises(UnknownPreset):
        parse_gate_spec("Q")


def test_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        build_gate(np.array([[1, 1], [0, 1]]))


def test_gcnot_is_permutation():
    g = gcnot(3)
    assert np.allclose(np.abs(g), np.abs(g) ** 2)
    # |i>|j> -> |i>|i+j mod 3>
    assert g[3 * 2 + (2 + 1) % 3, 3 * 2 + 1] == 1


def test_controlled_block():
    u = random_unitary(2, 3).matrix
    c = controlled(1, u)
    assert np.allclose(c[:2, :2], np.eye(2)) and np.allclose(c[2:, 2:], u)


def test_u_adc_edges():
    assert np.allclose(u_adc(1.0), np.eye(4))
    swap_like = u_adc(0.0)
    assert np.allclose(swap_like @ np.array([0, 0, 1, 0]), np.array([0, 1, 0, 0]))


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_presets_are_cptp(name, p):
    ch = preset_channel(name, p)
    total = sum(k.conj().T @ k for k in ch.kraus_ops)
    assert np.allclose(total, np.eye(2), atol=1e-12)


def test_preset_errors():
    with pytest.raises(BadParameter):
        preset_channel("bit_flip", 1.5)
    with pytest.raises(UnknownPreset):
        preset_channel("erasure", 0.1)
    with pytest.raises(ParseError):
        parse_channel_spec("phase_flip:x")


def test_amplitude_damping_parameter_is_transmissivity():
    excited = np.diag([0.0, 1.0])
    assert np.allclose(apply_channel(preset_channel("amplitude_damping", 0.0), excited).matrix, KET0)
    assert np.allclose(apply_channel(preset_channel("amplitude_damping", 1.0), excited).matrix, excited)


def test_phase_flip_half_dephases():
    out = apply_channel(preset_channel("phase_flip", 0.5), maximally_coherent(2).density())
    assert np.allclose(out.matrix, np.eye(2) / 2)


def test_predicates():
    ad = preset_channel("amplitude_damping", 0.4)
    assert not is_unital(ad)
    # Damping maps diagonals to diagonals and scales coherences uniformly.
    assert commutes_with_dephasing(ad)
    for name in ("bit_flip", "phase_flip", "bit_phase_flip", "depolarizing"):
        ch = preset_channel(name, 0.3)
        assert is_unital(ch) and commutes_with_dephasing(ch)
    h_conj = KrausChannel([build_gate("H").matrix], "hadamard")
    assert not commutes_with_dephasing(h_conj)


def test_dilation_recovers_amplitude_damping():
    for eta in np.linspace(0, 1, 11):
        ad = preset_channel("amplitude_damping", float(eta))
        assert channel_deviation(dilate(build_gate("U_adc", float(eta)), 2), ad) <= 1e-10


def test_dilation_matches_partial_trace(rng):
    u = random_unitary(6, rng)
    ch = dilate(u, 3)
    rho = random_density(2, rng).matrix
    assert np.allclose(ch.apply_raw(rho), stinespring_output(u, rho, 3), atol=1e-12)


def test_channel_tensor(rng):
    e, f = preset_channel("bit_flip", 0.2), preset_channel("amplitude_damping", 0.7)
    a, b = random_density(2, rng).matrix, random_density(2, rng).matrix
    joint = apply_channel(channel_tensor(e, f), np.kron(a, b)).matrix
    assert np.allclose(joint, np.kron(apply_channel(e, a).matrix, apply_channel(f, b).matrix), atol=1e-12)
