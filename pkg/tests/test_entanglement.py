import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from efsc.coherent import fidelity, normalize, product_state, tensor, cat
from efsc.entanglement import (
    ConditioningWarning,
    NumericalConsistencyError,
    ReducedDensity2,
    StructureError,
    decompose,
    eigenvalues_2x2,
    entropy,
    entropy_2x2,
    entropy_gram,
    half_pi_eigenvalues,
    reduced_density,
    reduced_spectrum_gram,
    state_entropy,
)
from efsc.fock import entropy_fock
from efsc.protocol import OUTCOMES, ProtocolConfig, conditional_states

angles = st.floats(0.3, 2.85)
amps = st.floats(0.5, 2.5)


def test_product_state_has_zero_entropy():
    s = product_state(1, 1 + 1j, -0.4)
    assert entropy_gram(s).entropy == pytest.approx(0, abs=1e-12)
    assert entropy_2x2(s).entropy == pytest.approx(0, abs=1e-12)


def test_well_separated_bell_form_is_one_ebit():
    a = 6.0
    s = product_state(1, a, -a) + product_state(1, -a, a)
    assert entropy_2x2(s).entropy == pytest.approx(1.0, abs=1e-12)
    assert entropy_gram(s).entropy == pytest.approx(1.0, abs=1e-12)


def test_antisymmetric_form_is_one_ebit_for_any_overlap():
    s = product_state(1, 0.3, 0.1j) - product_state(1, 0.1j, 0.3)
    assert entropy_2x2(s).entropy == pytest.approx(1.0, abs=1e-9)


def test_symmetric_form_follows_overlap_formula():
    # |u>|v> + |v>|u> has spectrum (1 +- |<u|v>|)^2 / (2 (1 + |<u|v>|^2))
    u, v = 0.8, -0.5j
    s = product_state(1, u, v) + product_state(1, v, u)
    x = math.exp(-0.5 * abs(u - v) ** 2)
    want = sorted([(1 - x) ** 2 / (2 * (1 + x * x)), (1 + x) ** 2 / (2 * (1 + x * x))])
    got = sorted(eigenvalues_2x2(reduced_density(decompose(s))))
    assert got == pytest.approx(want, abs=1e-12)


def test_rank_three_is_rejected_by_2x2_route():
    s = product_state(1, 0, 0) + product_state(1, 2, 2) + product_state(1, -2j, 2j)
    with pytest.raises(StructureError):
        decompose(s)
    e, analytic = state_entropy(s)
    assert analytic is None
    assert e == pytest.approx(entropy_fock(s), abs=1e-7)
    assert len(entropy_gram(s).eigenvalues) == 3


@given(amps, amps, angles, angles, st.sampled_from(OUTCOMES))
def test_three_routes_agree(a1, a2, t1, t2, o):
    r = conditional_states(ProtocolConfig(a1, a2, t1, t2))[o]
    e2 = entropy_2x2(r.state).entropy
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        eg1 = entropy_gram(r.state, 1).entropy
        eg2 = entropy_gram(r.state, 2).entropy
    assert e2 == pytest.approx(eg1, abs=1e-8)
    assert eg1 == pytest.approx(eg2, abs=1e-8)
    assert -1e-12 <= e2 <= 1 + 1e-12
    assert e2 == pytest.approx(entropy_fock(r.state), abs=1e-7)


@given(amps, angles, st.sampled_from(OUTCOMES))
def test_decomposition_reassembles_state(a, t, o):
    r = conditional_states(ProtocolConfig.symmetric(a, t))[o]
    dec = decompose(r.state)
    assert fidelity(dec.reassemble(), r.state) == pytest.approx(1.0, abs=1e-10)
    rho = reduced_density(dec)
    assert np.trace(rho.entries).real == pytest.approx(1.0, abs=1e-10)
    assert rho.det <= 0.25 + 1e-12
    lp, lm = eigenvalues_2x2(rho)
    assert lp + lm == 1.0
    lam, _ = reduced_spectrum_gram(r.state)
    assert lam.sum() == pytest.approx(1.0, abs=1e-10)


def test_atom_a_level_sets_the_right_angle_spectrum(half_pi_states):
    # g on atom A: flat spectrum; f on atom A: the overlap-limited spectrum
    for alpha, cs in half_pi_states.items():
        lam_f = sorted(half_pi_eigenvalues(alpha))
        for o, r in cs.items():
            got = sorted(eigenvalues_2x2(reduced_density(decompose(r.state))))
            want = [0.5, 0.5] if o.startswith("g1") else lam_f
            assert got == pytest.approx(want, abs=1e-10), (alpha, o)


def test_collinear_limit_flagged():
    s = normalize(tensor(cat(1.0, 1.0), cat(1.0, 1.0)))
    dec = decompose(s)
    assert dec.collinear
    assert entropy_2x2(s).entropy == pytest.approx(0.0, abs=1e-12)


def test_entropy_clamping_and_errors():
    assert entropy([1.0, -5e-13]).entropy == 0.0
    with pytest.raises(NumericalConsistencyError):
        entropy([1.1, -0.1])
    with pytest.raises(NumericalConsistencyError):
        eigenvalues_2x2(ReducedDensity2(np.eye(2)))
    assert entropy([0.5, 0.5], base=math.e).entropy == pytest.approx(math.log(2))


def test_ill_conditioned_gram_warns():
    s = product_state(1, 0.0, 0.0) + product_state(1, 1e-4, 1e-4j) + product_state(1, 2e-4, -1e-4)
    with pytest.warns(ConditioningWarning):
        res = entropy_gram(s)
    assert res.warnings
