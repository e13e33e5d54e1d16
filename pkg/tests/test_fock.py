import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid
from scipy.special import eval_hermite, factorial

from efsc.coherent import product_state
from efsc.fock import (
    TruncationError,
    TruncationPolicy,
    coherent_to_fock,
    dispersive_exponential_check,
    hermite_functions,
    partial_trace,
    position_density,
    superstate_to_fock,
    wigner_fock,
)

amp = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("a,n_max", [(3, 51), (4, 68)])
def test_policy_sizes(a, n_max):
    pol = TruncationPolicy.for_amplitude(a)
    assert pol.n_max == n_max
    assert pol.tail_mass(a) < 1e-12


def test_truncation_too_small_raises():
    with pytest.raises(TruncationError):
        coherent_to_fock(3.0, TruncationPolicy(10))


@given(amp)
def test_coherent_vector_normalized_and_poissonian(a):
    v = coherent_to_fock(a, TruncationPolicy.for_amplitude(3))
    assert np.vdot(v, v).real == pytest.approx(1.0, abs=1e-12)
    n = np.arange(v.size)
    assert (n * abs(v) ** 2).sum() == pytest.approx(abs(a) ** 2, abs=1e-9)


@given(st.floats(-7, 7), amp, st.sampled_from("gef"))
def test_dispersive_exponential_matches_label_rule(theta, a, level):
    pol = TruncationPolicy.for_amplitude(3)
    got = dispersive_exponential_check(theta, a, level, pol)
    u = complex(math.cos(theta), math.sin(theta))
    want = {
        "g": coherent_to_fock(a * u, pol),
        "e": coherent_to_fock(a / u, pol) / u,
        "f": coherent_to_fock(a, pol),
    }[level]
    assert np.abs(got - want).max() <= 1e-10


def test_hermite_functions_against_scipy():
    x = np.linspace(-4, 4, 17)
    h = hermite_functions(x, 12)
    for n in range(12):
        ref = eval_hermite(n, x) * np.exp(-x * x / 2) / math.sqrt(2.0**n * factorial(n) * math.sqrt(math.pi))
        assert np.abs(h[n] - ref).max() < 1e-12


def test_partial_trace_of_product_is_pure():
    s = product_state(1, 1 + 0.5j, -0.7j)
    pol = TruncationPolicy.for_state(s)
    rho = partial_trace(superstate_to_fock(s, pol), 1, pol.dim)
    v = coherent_to_fock(1 + 0.5j, pol)
    assert np.abs(rho - np.outer(v, v.conj())).max() < 1e-12
    rho4 = np.kron(np.outer(v, v.conj()), np.eye(pol.dim) / pol.dim)
    assert np.abs(partial_trace(rho4, 1, pol.dim) - rho).max() < 1e-12


def test_wigner_orientation_coherent_peak():
    # alpha = i sits at (x, p) = (0, sqrt2)
    pol = TruncationPolicy.for_amplitude(1)
    v = coherent_to_fock(1j, pol)
    rho = np.outer(v, v.conj())
    assert wigner_fock(rho, 0.0, math.sqrt(2)) * math.pi == pytest.approx(1.0, abs=1e-12)
    assert wigner_fock(rho, 0.0, -math.sqrt(2)) < 1e-3


def test_wigner_number_state_closed_form():
    rho = np.zeros((4, 4))
    rho[1, 1] = 1
    x, p = np.meshgrid(np.linspace(-3, 3, 13), np.linspace(-3, 3, 13))
    r2 = x * x + p * p
    assert np.abs(wigner_fock(rho, x, p) - (2 * r2 - 1) * np.exp(-r2) / math.pi).max() < 1e-14


def test_position_density_normalized():
    pol = TruncationPolicy.for_amplitude(2)
    v = coherent_to_fock(2.0, pol)
    x = np.linspace(-8, 12, 4001)
    dens = position_density(np.outer(v, v.conj()), x)
    assert trapezoid(dens, x) == pytest.approx(1.0, abs=1e-9)
    assert x[np.argmax(dens)] == pytest.approx(2 * math.sqrt(2), abs=1e-2)
