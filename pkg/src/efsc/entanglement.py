"""Bipartite entanglement of two-mode coherent superpositions.

Two independent routes to the reduced spectrum:

* the 2x2 route: split the state into two product blocks ``a|mu1>|nu2> + b|nu1>|mu2>``,
  orthogonalize each mode's pair and diagonalize the 2x2 reduced matrix;
* the Gram route: reduced density in the (non-orthogonal) coherent label basis,
  diagonalized through the label Gram matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .coherent import (
    BasisTerm,
    SuperState,
    inner_product,
    normalize,
    overlap_matrix,
    single_mode_labels,
)

COLLINEAR_Q = 1e-9
EIG_CLAMP = 1e-12
GRAM_COND_WARN = 1e12
# tolerated trace drift of the 2x2 reduced matrix (norm cancellation in low-probability branches)
TRACE_TOL = 1e-6


class StructureError(ValueError):
    """State is not a sum of two product blocks."""


class NumericalConsistencyError(ArithmeticError):
    pass


class ConditioningWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class BipartiteDecomposition:
    mu1: SuperState
    nu1: SuperState
    mu2: SuperState
    nu2: SuperState
    coeff_a: complex
    coeff_b: complex
    p1: complex
    p2: complex
    q1: float
    q2: float

    @property
    def collinear(self) -> bool:
        return self.q1 <= COLLINEAR_Q or self.q2 <= COLLINEAR_Q

    def reassemble(self) -> SuperState:
        return _kron(self.mu1, self.nu2).scaled(self.coeff_a) + _kron(self.nu1, self.mu2).scaled(self.coeff_b)


@dataclass(frozen=True)
class ReducedDensity2:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("reduced density must be 2x2")
        object.__setattr__(self, "entries", m)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries).real)


@dataclass(frozen=True)
class EntropyResult:
    entropy: float
    eigenvalues: tuple[float, ...]
    warnings: tuple[str, ...] = field(default=())


def _kron(a: SuperState, b: SuperState) -> SuperState:
    terms = tuple(
        BasisTerm(x.coefficient * y.coefficient, (), x.fields + y.fields) for x in a.terms for y in b.terms
    )
    return SuperState(terms, n_modes=2)


def _label_index(labels: list[complex], b: complex) -> int:
    return int(np.argmin([abs(b - l) for l in labels]))


def coefficient_matrix(state: SuperState):
    """C[i, j] such that state = sum C_ij |a_i>|b_j> over distinct labels a, b."""
    if state.n_modes != 2 or state.atom_indices:
        raise StructureError("need a field-only two-mode state")
    l1 = single_mode_labels(state, 1)
    l2 = single_mode_labels(state, 2)
    c = np.zeros((len(l1), len(l2)), dtype=complex)
    for t in state.terms:
        c[_label_index(l1, t.fields[0]), _label_index(l2, t.fields[1])] += t.coefficient
    return np.array(l1, dtype=complex), np.array(l2, dtype=complex), c


def _one_mode(labels: np.ndarray, coeffs: np.ndarray) -> SuperState:
    terms = tuple(BasisTerm(complex(c), (), (complex(b),)) for b, c in zip(labels, coeffs) if abs(c) > 0)
    return SuperState(terms, n_modes=1)


def orthonormalize_pair(mu: SuperState, nu: SuperState) -> tuple[complex, float]:
    """Return (p, q) with p = <mu|nu>, q = sqrt(1 - |p|^2); inputs must be unit-norm."""
    for name, s in (("mu", mu), ("nu", nu)):
        n2 = s.norm2()
        if abs(n2 - 1.0) > 1e-10:
            raise ValueError(f"{name} is not normalized (<{name}|{name}> = {n2})")
    p = inner_product(mu, nu)
    q = math.sqrt(max(0.0, 1.0 - abs(p) ** 2))
    return p, q


def decompose(state: SuperState) -> BipartiteDecomposition:
    """Split a two-mode state into two normalized product blocks.

    Uses a rank factorization of the label coefficient matrix; distinct coherent
    labels are linearly independent, so its rank bounds the Schmidt rank.
    """
    l1, l2, c = coefficient_matrix(state)
    u, s, vh = np.linalg.svd(c)
    if len(s) > 2 and s[2] > 1e-12 * s[0]:
        raise StructureError(f"coefficient matrix has rank > 2 (singular values {s[:4]})")
    factors = []
    for k in range(2):
        sk = s[k] if k < len(s) else 0.0
        if sk <= 1e-13 * s[0]:
            # rank-1 (product) input: duplicate the first block with zero weight
            a, b, w = factors[0][0], factors[0][1], 0.0
        else:
            a = _one_mode(l1, u[:, k])
            b = _one_mode(l2, vh[k, :])
            na, nb = math.sqrt(a.norm2()), math.sqrt(b.norm2())
            a, b, w = a.scaled(1 / na), b.scaled(1 / nb), sk * na * nb
        factors.append((a, b, w))
    (mu1, nu2, wa), (nu1, mu2, wb) = factors
    p1, q1 = orthonormalize_pair(mu1, nu1)
    p2, q2 = orthonormalize_pair(mu2, nu2)
    # state may be unnormalized; the decomposition describes the normalized state
    scale = 1.0 / math.sqrt(state.norm2())
    return BipartiteDecomposition(mu1, nu1, mu2, nu2, wa * scale, wb * scale, p1, p2, q1, q2)


def reduced_density(dec: BipartiteDecomposition) -> ReducedDensity2:
    """Mode-1 reduced density in the orthonormalized basis {|mu1>, (|nu1> - p1|mu1>)/q1}."""
    a, b = dec.coeff_a, dec.coeff_b
    # state = M[0,0]|00> + M[0,1]|01> + M[1,0]|10>, second index is mode 2
    m = np.array([[a * dec.p2 + b * dec.p1, a * dec.q2], [b * dec.q1, 0.0]], dtype=complex)
    return ReducedDensity2(m @ m.conj().T)


def eigenvalues_2x2(rho: ReducedDensity2) -> tuple[float, float]:
    """lambda_pm = (1 +- sqrt(1 - 4 det rho)) / 2.

    For a unit-trace Hermitian rho, 1 - 4 det = (rho00 - rho11)^2 + 4 |rho01|^2; the
    sum-of-squares form avoids the cancellation that costs sqrt(eps) near det = 1/4.
    """
    m = rho.entries
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise NumericalConsistencyError(f"reduced density has trace {tr:.12g}")
    m = m / tr
    root = math.sqrt((m[0, 0] - m[1, 1]).real ** 2 + 4.0 * abs(0.5 * (m[0, 1] + m[1, 0].conjugate())) ** 2)
    lam_minus = 0.5 * (1.0 - root)
    if lam_minus < -EIG_CLAMP:
        raise NumericalConsistencyError(f"1 - 4 det(rho) < 0 (lambda_- = {lam_minus:.3e})")
    return 0.5 * (1.0 + root), max(lam_minus, 0.0)


def entropy(eigs, base: float = 2.0) -> EntropyResult:
    """Von Neumann entropy from a spectrum; tiny negative eigenvalues clamp to 0."""
    lam = np.asarray(eigs, dtype=float)
    if np.any(lam < -EIG_CLAMP):
        raise NumericalConsistencyError(f"negative eigenvalue {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    nz = lam[lam > 0]
    e = float(-(nz * np.log(nz)).sum() / math.log(base))
    return EntropyResult(max(e, 0.0), tuple(float(x) for x in lam))


def entropy_2x2(state: SuperState) -> EntropyResult:
    """Entropy through decompose -> reduced_density -> eigenvalues_2x2."""
    return entropy(eigenvalues_2x2(reduced_density(decompose(state))))


def reduced_spectrum_gram(state: SuperState, mode: int = 1):
    """Nonzero reduced spectrum of ``mode`` and the Gram condition number."""
    l1, l2, c = coefficient_matrix(normalize(state))
    if mode == 2:
        l1, l2, c = l2, l1, c.T
    g1 = overlap_matrix(l1[:, None], l1[None, :])
    g2 = overlap_matrix(l2[:, None], l2[None, :])
    # rho = sum_ii' R_ii' |a_i><a_i'|, R = C G2^T C^dag
    r = c @ g2.T @ c.conj().T
    w, v = np.linalg.eigh(g1)
    cond = float(w.max() / max(w.min(), 1e-300))
    keep = w > 1e-14 * w.max()
    sq = v[:, keep] * np.sqrt(w[keep])
    h = sq.conj().T @ r @ sq
    lam = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    lam = lam[::-1]
    lam = lam / lam.sum()
    return lam[lam > EIG_CLAMP], cond


def entropy_gram(state: SuperState, mode: int = 1, base: float = 2.0) -> EntropyResult:
    lam, cond = reduced_spectrum_gram(state, mode)
    res = entropy(lam, base)
    if cond > GRAM_COND_WARN:
        msg = f"ill-conditioned Gram matrix (condition {cond:.2e})"
        warnings.warn(msg, ConditioningWarning, stacklevel=2)
        return EntropyResult(res.entropy, res.eigenvalues, (msg,))
    return res


def state_entropy(state: SuperState) -> tuple[float, float | None]:
    """(entropy, analytic entropy or None); falls back to Gram when the 2x2 route does not apply."""
    try:
        analytic = entropy_2x2(state).entropy
    except StructureError:
        return entropy_gram(state).entropy, None
    return analytic, analytic


def half_pi_eigenvalues(alpha: float) -> tuple[float, float]:
    """Printed closed-form reduced spectrum of the non-quasi-Bell rows at theta = pi/2, alpha1 = alpha2."""
    x = math.exp(-abs(alpha) ** 2)
    den = 2.0 * (1.0 + x * x)
    return (1.0 - x) ** 2 / den, (1.0 + x) ** 2 / den
