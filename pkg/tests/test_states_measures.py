import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcoherence.errors import BadPhaseCount, NotDistribution, NotPositive, NotUnitTrace, ParseError
from qcoherence.measures import (
    coherence_l1,
    coherence_rel_entropy,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from qcoherence.states import (
    DensityOperator,
    ReferenceBasis,
    dephase,
    is_incoherent,
    load_state,
    maximally_coherent,
    random_density,
    random_diagonal_density,
    random_pure,
    save_state,
)


def test_density_validation():
    with pytest.raises(NotUnitTrace):
        DensityOperator(np.eye(2))
    with pytest.raises(NotPositive, match="eigenvalue"):
        DensityOperator(np.array([[1.2, 0], [0, -0.2]]))


def test_dephase_and_incoherent():
    rho = DensityOperator(np.array([[0.5, 0.25], [0.25, 0.5]]))
    assert np.allclose(dephase(rho).matrix, np.eye(2) / 2)
    assert is_incoherent(dephase(rho))
    assert not is_incoherent(rho)


def test_dephase_subsystem_of_bell():
    bell = np.zeros((4, 4))
    bell[np.ix_([0, 3], [0, 3])] = 0.5
    out = dephase(DensityOperator(bell, (2, 2)), subsystems=[0])
    assert np.allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]))


def test_maximally_coherent():
    assert np.isclose(coherence_rel_entropy(maximally_coherent(2).density()), 1.0)
    assert np.isclose(coherence_rel_entropy(maximally_coherent(4).density()), 2.0)
    with pytest.raises(BadPhaseCount):
        maximally_coherent(3, [0.1])
    with pytest.raises(ValueError):
        maximally_coherent(2, [0.3], mode="canonical")


def test_measure_examples():
    rho = np.array([[0.5, 0.25], [0.25, 0.5]])
    # S(diag) = 1, S(rho) = H(0.75)
    h = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert np.isclose(coherence_rel_entropy(rho), 1 - h, atol=1e-12)
    assert np.isclose(coherence_rel_entropy(rho), 0.188722, atol=1e-6)
    assert np.isclose(coherence_l1(rho), 0.5)
    assert np.isclose(shannon_entropy([0.5, 0.5]), 1.0)
    with pytest.raises(NotDistribution):
        shannon_entropy([0.7, 0.7])


def test_bell_basis_coherence():
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    rho = np.outer(phi, phi)
    assert np.isclose(coherence_rel_entropy(rho), 1.0)
    assert np.isclose(coherence_rel_entropy(rho, ReferenceBasis.bell()), 0.0, atol=1e-12)


def test_entropy_matches_numpy_oracle(rng):
    for d in (2, 3, 4):
        rho = random_density(d, rng)
        w = np.clip(np.linalg.eigvalsh(rho.matrix), 1e-300, None)
        assert np.isclose(von_neumann_entropy(rho), -np.sum(w * np.log2(w)), atol=1e-10)


def test_relative_entropy_infinite_off_support():
    assert relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0])) == math.inf
    assert relative_entropy(np.diag([1.0, 0.0]), np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 2**32 - 1))
def test_coherence_bounds_and_closed_form(d, seed):
    rng = np.random.default_rng(seed)
    rho = random_density(d, rng)
    c = coherence_rel_entropy(rho)
    assert -1e-10 <= c <= math.log2(d) + 1e-10
    sigma = random_diagonal_density(d, rng)
    assert relative_entropy(rho, sigma) >= c - 1e-9
    assert np.isclose(relative_entropy(rho, dephase(rho)), c, atol=1e-9)


def test_pure_state_coherence_is_dephased_entropy(rng):
    psi = random_pure(3, rng)
    p = np.abs(psi.amplitudes) ** 2
    assert np.isclose(coherence_rel_entropy(psi.density()), shannon_entropy(p), atol=1e-10)


def test_state_roundtrip(tmp_path, rng):
    rho = random_density(3, rng)
    path = tmp_path / "rho.json"
    save_state(rho, path)
    back = load_state(path)
    assert np.array_equal(back.matrix, rho.matrix)


def test_state_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"matrix": [[0.5, 0.5],\n [0.5, }')
    with pytest.raises(ParseError, match="line 2"):
        load_state(bad)
    bad.write_text(json.dumps({"matrix": [[0.5, "x"], [0, 0.5]]}))
    with pytest.raises(ParseError, match=r"matrix\[0\]\[1\]"):
        load_state(bad)
