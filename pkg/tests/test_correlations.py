import math

import numpy as np
import pytest

from qcoherence.correlations import (
    compact_relation_terms,
    discord_fixed_basis,
    one_way_deficit,
    qi_relative_entropy,
    ree_pure,
    verify_coherence_chain,
    verify_deficit_relations,
)
from qcoherence.errors import NotBipartite, UnsupportedDimension
from qcoherence.measures import coherence_rel_entropy
from qcoherence.states import DensityOperator, pure_state, random_density, random_pure

BELL = pure_state([1, 0, 0, 1], (2, 2), normalize=True).density()


def test_bell_values():
    assert np.isclose(qi_relative_entropy(BELL), 1.0)
    assert np.isclose(discord_fixed_basis(BELL), 1.0)
    assert np.isclose(one_way_deficit(BELL), 1.0, atol=1e-6)


def test_product_state_is_uncorrelated():
    plus = np.full((2, 2), 0.5)
    rho = DensityOperator(np.kron(plus, np.diag([0.3, 0.7])), (2, 2))
    assert abs(discord_fixed_basis(rho)) <= 1e-9
    # A product with a coherent A still has QI coherence on A.
    assert np.isclose(qi_relative_entropy(rho), 1.0, atol=1e-9)
    assert abs(one_way_deficit(rho)) <= 1e-6


def test_ree_pure():
    psi = pure_state([math.sqrt(0.8), 0, 0, math.sqrt(0.2)], (2, 2))
    assert np.isclose(ree_pure(psi), 0.721928094887, atol=1e-9)
    with pytest.raises(NotBipartite):
        ree_pure(pure_state([1, 0]))


def test_identities_on_random_states(rng):
    for _ in range(10):
        rho = random_density(4, rng, (2, 2))
        rep = verify_deficit_relations(rho, points=32)
        assert rep.passed, rep.to_table()
        c_chi, qi, c_ab = compact_relation_terms(rho)
        assert np.isclose(c_chi + qi, c_ab, atol=1e-9)


def test_deficit_needs_qubit_a(rng):
    with pytest.raises(UnsupportedDimension):
        one_way_deficit(random_density(6, rng, (3, 2)))


def test_chain_mixed_monotone(rng):
    for d, op in ((2, "CNOT"), (3, "GCNOT")):
        r = verify_coherence_chain(random_density(d, rng), op)
        assert not r.pure
        assert r.values["C_A"] >= r.values["C_AE"] - 1e-9


@pytest.mark.parametrize("d", [2, 3])
def test_chain_pure_equalities(rng, d):
    psi = random_pure(d, rng)
    r = verify_coherence_chain(psi, "GCNOT")
    v = r.values
    assert r.pure and r.equalities()
    assert np.isclose(v["C_A"], coherence_rel_entropy(psi.density()), atol=1e-12)
    assert np.isclose(v["C_A"], v["E"], atol=1e-9)
