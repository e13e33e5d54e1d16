"""Finite superpositions of multimode coherent states tensored with atomic registers.

A :class:`SuperState` is a list of product terms ``c |atoms>|beta_1>|beta_2>...``.
Atomic levels are orthonormal, coherent labels are not; all inner products are
evaluated exactly through the coherent overlap formula.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

LEVELS = ("g", "e", "f")

# label-equality tolerance for coherent amplitudes reached by different rotation paths
LABEL_TOL = 1e-12
# coefficients at or below this magnitude are dropped by merge_terms
CULL_TOL = 1e-14
# squared norm below which a state counts as null
NULL_NORM2 = 1e-28


class ShapeError(ValueError):
    """Operands have incompatible atom registers or mode counts."""


class DegenerateStateError(ArithmeticError):
    """State (or projected component) is numerically null."""

    def __init__(self, message: str, probability: float = 0.0):
        super().__init__(message)
        self.probability = probability


@dataclass(frozen=True, order=True)
class AtomLabel:
    index: int
    level: str

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown atomic level {self.level!r}")
        if self.index not in (1, 2, 3):
            raise ValueError(f"atom index must be 1, 2 or 3, got {self.index}")

    def __str__(self) -> str:
        return f"{self.level}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "AtomLabel":
        return cls(int(text[1:]), text[0])


@dataclass(frozen=True)
class BasisTerm:
    coefficient: complex
    atoms: tuple[AtomLabel, ...]
    fields: tuple[complex, ...]

    def same_labels(self, other: "BasisTerm", tol: float = LABEL_TOL) -> bool:
        return self.atoms == other.atoms and all(
            abs(a - b) <= tol for a, b in zip(self.fields, other.fields)
        )


@dataclass(frozen=True)
class SuperState:
    terms: tuple[BasisTerm, ...]
    is_normalized: bool = False
    n_modes: int = field(default=2)

    def __post_init__(self):
        for t in self.terms:
            if len(t.fields) != self.n_modes:
                raise ShapeError(f"term has {len(t.fields)} modes, state has {self.n_modes}")

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def atom_indices(self) -> tuple[int, ...]:
        if not self.terms:
            return ()
        return tuple(a.index for a in self.terms[0].atoms)

    def scaled(self, factor: complex) -> "SuperState":
        return SuperState(
            tuple(BasisTerm(t.coefficient * factor, t.atoms, t.fields) for t in self.terms),
            n_modes=self.n_modes,
        )

    def __add__(self, other: "SuperState") -> "SuperState":
        if other.n_modes != self.n_modes:
            raise ShapeError("mode count mismatch")
        return SuperState(self.terms + other.terms, n_modes=self.n_modes)

    def __sub__(self, other: "SuperState") -> "SuperState":
        return self + other.scaled(-1.0)

    def __mul__(self, factor: complex) -> "SuperState":
        return self.scaled(factor)

    __rmul__ = __mul__

    def norm2(self) -> float:
        return inner_product(self, self).real

    # --- serialization -----------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {
                "re": t.coefficient.real,
                "im": t.coefficient.imag,
                "atoms": [str(a) for a in t.atoms],
                "fields": [{"re": b.real, "im": b.imag} for b in t.fields],
            }
            for t in self.terms
        ]

    @classmethod
    def from_json(cls, data: Sequence[dict], is_normalized: bool = False) -> "SuperState":
        terms = tuple(
            BasisTerm(
                complex(d["re"], d["im"]),
                tuple(sorted(AtomLabel.parse(a) for a in d.get("atoms", []))),
                tuple(complex(f["re"], f["im"]) for f in d["fields"]),
            )
            for d in data
        )
        n_modes = len(terms[0].fields) if terms else 2
        return cls(terms, is_normalized=is_normalized, n_modes=n_modes)


def _check_finite(*values: complex) -> None:
    for v in values:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"non-finite coherent amplitude {v!r}")


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """<alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)."""
    alpha, beta = complex(alpha), complex(beta)
    _check_finite(alpha, beta)
    if alpha == beta:
        return 1.0 + 0.0j
    return cmath.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + alpha.conjugate() * beta)


def overlap_matrix(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Elementwise-broadcast version of :func:`coherent_overlap` for label arrays."""
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    return np.exp(-0.5 * np.abs(left) ** 2 - 0.5 * np.abs(right) ** 2 + np.conj(left) * right)


def product_state(coefficient: complex, *fields: complex, atoms: Iterable[AtomLabel] = ()) -> SuperState:
    """Single-term state ``coefficient |atoms>|fields...>``."""
    fields = tuple(complex(f) for f in fields)
    _check_finite(*fields)
    term = BasisTerm(complex(coefficient), tuple(sorted(atoms)), fields)
    return SuperState((term,), n_modes=len(fields))


def tensor(*factors: SuperState) -> SuperState:
    """Tensor product of field-only single- or multi-mode states (modes concatenated)."""
    terms: list[BasisTerm] = [BasisTerm(1.0 + 0j, (), ())]
    for fac in factors:
        terms = [
            BasisTerm(a.coefficient * b.coefficient, tuple(sorted(a.atoms + b.atoms)), a.fields + b.fields)
            for a in terms
            for b in fac.terms
        ]
    return SuperState(tuple(terms), n_modes=sum(f.n_modes for f in factors))


def _arrays(s: SuperState):
    coeffs = np.array([t.coefficient for t in s.terms], dtype=complex)
    fields = np.array([t.fields for t in s.terms], dtype=complex).reshape(len(s.terms), s.n_modes)
    return coeffs, fields


def inner_product(a: SuperState, b: SuperState) -> complex:
    """<a|b>, antilinear in the first argument."""
    if a.n_modes != b.n_modes:
        raise ShapeError(f"mode count mismatch: {a.n_modes} vs {b.n_modes}")
    if a.terms and b.terms and a.atom_indices != b.atom_indices:
        raise ShapeError(f"atom registers differ: {a.atom_indices} vs {b.atom_indices}")
    if not a.terms or not b.terms:
        return 0.0 + 0.0j
    ca, fa = _arrays(a)
    cb, fb = _arrays(b)
    gram = np.ones((len(ca), len(cb)), dtype=complex)
    for m in range(a.n_modes):
        gram *= overlap_matrix(fa[:, m][:, None], fb[:, m][None, :])
    # atomic labels are orthonormal
    same = np.array([[ta.atoms == tb.atoms for tb in b.terms] for ta in a.terms])
    return complex(np.conj(ca) @ (gram * same) @ cb)


def merge_terms(s: SuperState) -> SuperState:
    """Sum coefficients of label-equal terms and drop negligible ones."""
    keys: list[BasisTerm] = []
    sums: list[complex] = []
    for t in s.terms:
        for i, k in enumerate(keys):
            if k.same_labels(t):
                sums[i] += t.coefficient
                break
        else:
            keys.append(t)
            sums.append(t.coefficient)
    terms = tuple(
        BasisTerm(c, k.atoms, k.fields) for k, c in zip(keys, sums) if abs(c) > CULL_TOL
    )
    return SuperState(terms, n_modes=s.n_modes)


def normalize(s: SuperState) -> SuperState:
    """Unit-norm copy of ``s`` (merged); the global phase is left untouched."""
    s = merge_terms(s)
    n2 = s.norm2()
    if not n2 > NULL_NORM2:
        raise DegenerateStateError(f"cannot normalize a null state (<s|s> = {n2:.3e})", n2)
    out = s.scaled(1.0 / math.sqrt(n2))
    return SuperState(out.terms, is_normalized=True, n_modes=s.n_modes)


def fidelity(a: SuperState, b: SuperState) -> float:
    """|<a|b>| for two states, normalizing both first."""
    return abs(inner_product(normalize(a), normalize(b)))


def cat(alpha: complex, phase: complex = 1.0) -> SuperState:
    """Unnormalized single-mode ``|alpha> + phase |-alpha>``."""
    return product_state(1.0, alpha) + product_state(phase, -alpha)


def single_mode_labels(s: SuperState, mode: int) -> list[complex]:
    """Distinct coherent labels (merge tolerance) carried by one mode."""
    out: list[complex] = []
    for t in s.terms:
        b = t.fields[mode - 1]
        if not any(abs(b - o) <= LABEL_TOL for o in out):
            out.append(b)
    return out
