"""Brute-force number-basis backend used to cross-check the coherent-state algebra.

Two-mode vectors are stored mode-1-major: index = n1 * (n_max + 1) + n2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .coherent import AtomLabel, SuperState

TAIL_TOL = 1e-12


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class TruncationPolicy:
    n_max: int

    @classmethod
    def for_amplitude(cls, alpha_max: float) -> "TruncationPolicy":
        a = abs(alpha_max)
        return cls(int(math.ceil(a * a + 10 * a + 12)))

    @classmethod
    def for_state(cls, state: SuperState) -> "TruncationPolicy":
        return cls.for_amplitude(max(abs(b) for t in state.terms for b in t.fields))

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def tail_mass(self, alpha: complex) -> float:
        # Poisson(|alpha|^2) probability of n > n_max
        return float(gammainc(self.n_max + 1, abs(alpha) ** 2))


def coherent_to_fock(alpha: complex, policy: TruncationPolicy) -> np.ndarray:
    """<n|alpha> for n = 0..n_max, evaluated in log space."""
    alpha = complex(alpha)
    tail = policy.tail_mass(alpha)
    if tail > TAIL_TOL:
        raise TruncationError(f"tail mass {tail:.2e} for |alpha| = {abs(alpha):.3f} at n_max = {policy.n_max}")
    n = np.arange(policy.dim)
    out = np.zeros(policy.dim, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    logmag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    out[:] = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    if abs(out[-1]) > 1e-8:
        raise TruncationError(f"last coefficient {abs(out[-1]):.2e} exceeds 1e-8")
    return out


def superstate_to_fock(state: SuperState, policy: TruncationPolicy | None = None) -> np.ndarray:
    if state.atom_indices:
        raise ValueError("field-only state expected")
    policy = policy or TruncationPolicy.for_state(state)
    out = np.zeros(policy.dim**state.n_modes, dtype=complex)
    for t in state.terms:
        vec = np.ones(1, dtype=complex)
        for b in t.fields:
            vec = np.kron(vec, coherent_to_fock(b, policy))
        out += t.coefficient * vec
    return out


def dispersive_exponential_check(theta: float, alpha: complex, level: AtomLabel | str, policy=None) -> np.ndarray:
    """exp(-i theta (s+ s- + n s3)) applied to |level>|alpha>, field part only."""
    lv = level.level if isinstance(level, AtomLabel) else level
    policy = policy or TruncationPolicy.for_amplitude(abs(alpha))
    n = np.arange(policy.dim)
    # s+ s- = |e><e|, s3 = |e><e| - |g><g|, |f> decoupled
    energy = {"g": -n, "e": 1 + n, "f": 0 * n}[lv]
    return np.exp(-1j * theta * energy) * coherent_to_fock(alpha, policy)


def partial_trace(psi_or_rho: np.ndarray, mode: int, dim: int) -> np.ndarray:
    """Reduced density of ``mode`` (1 or 2) for a two-mode pure vector or density matrix."""
    x = np.asarray(psi_or_rho, dtype=complex)
    if x.ndim == 1:
        m = x.reshape(dim, dim)
        if mode == 2:
            m = m.T
        rho = m @ m.conj().T
    else:
        r = x.reshape(dim, dim, dim, dim)
        rho = np.einsum("ijkj->ik", r) if mode == 1 else np.einsum("ijil->jl", r)
    return rho / np.trace(rho).real


def density_spectrum(rho: np.ndarray) -> np.ndarray:
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[::-1]
    lam = np.clip(lam, 0.0, None)
    return lam / lam.sum()


def entropy_fock(state: SuperState, mode: int = 1, base: float = 2.0) -> float:
    policy = TruncationPolicy.for_state(state)
    psi = superstate_to_fock(state, policy)
    lam = density_spectrum(partial_trace(psi, mode, policy.dim))
    nz = lam[lam > 1e-15]
    return float(-(nz * np.log(nz)).sum() / math.log(base))


def reduced_density_fock(state: SuperState, mode: int = 1) -> np.ndarray:
    policy = TruncationPolicy.for_state(state)
    return partial_trace(superstate_to_fock(state, policy), mode, policy.dim)


def wigner_fock(rho: np.ndarray, x, p) -> np.ndarray:
    """W(x, p) = (1/pi) Tr[rho D(z) P D(z)^dag], z = (x + i p)/sqrt2, P the parity.

    Sums rho_mn times the displaced-parity matrix elements <n|D P D^dag|m>,
    generated by the Laguerre three-term recurrence over the whole grid.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    z = (x + 1j * p) / math.sqrt(2.0)
    dim = rho.shape[0]
    two_z = 2.0 * z
    w = np.zeros(np.broadcast(x, p).shape, dtype=complex)
    # row[n] holds the element for (m, n), m the current outer index
    row = [None] * dim
    row[0] = np.exp(-2.0 * np.abs(z) ** 2) + 0j
    w += rho[0, 0].real * row[0]
    for n in range(1, dim):
        row[n] = two_z * row[n - 1] / math.sqrt(n)
        w += 2.0 * (rho[0, n] * row[n]).real
    for m in range(1, dim):
        prev = row[m].copy()
        row[m] = (np.conj(two_z) * prev - math.sqrt(m) * row[m - 1]) / math.sqrt(m)
        w += rho[m, m].real * row[m]
        for n in range(m + 1, dim):
            nxt = (two_z * row[n - 1] - math.sqrt(m) * prev) / math.sqrt(n)
            prev = row[n].copy()
            row[n] = nxt
            w += 2.0 * (rho[m, n] * row[n]).real
    return w.real / math.pi


def hermite_functions(x: np.ndarray, dim: int) -> np.ndarray:
    """<x|n> for n < dim, rows indexed by n (normalized Hermite functions)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((dim,) + x.shape)
    out[0] = math.pi**-0.25 * np.exp(-0.5 * x * x)
    if dim > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(2, dim):
        out[n] = math.sqrt(2.0 / n) * x * out[n - 1] - math.sqrt((n - 1) / n) * out[n - 2]
    return out


def position_density(rho: np.ndarray, x) -> np.ndarray:
    """<x|rho|x> on the quadrature x = (a + a^dag)/sqrt2."""
    h = hermite_functions(np.asarray(x, dtype=float), rho.shape[0])
    return np.einsum("m...,mn,n...->...", h, rho, h).real
