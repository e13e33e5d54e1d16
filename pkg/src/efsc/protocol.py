"""Three-atom, two-cavity preparation circuit and conditional atomic measurement.

Atom A (index 1) uses the (g, f) level pair, atoms B and C (indices 2, 3) use
(g, e). Cavity interactions are the endpoint unitaries of the dispersive
Hamiltonian ``chi (s+ s- + a^dag a s3)`` with ``s3 = |e><e| - |g><g|``:

    g: |beta> -> |beta e^{+i theta}>
    e: |beta> -> e^{-i theta} |beta e^{-i theta}>
    f: |beta> -> |beta>
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

from .coherent import (
    AtomLabel,
    BasisTerm,
    DegenerateStateError,
    SuperState,
    merge_terms,
    normalize,
    product_state,
)

SQRT1_2 = 1.0 / math.sqrt(2.0)

# Table order; psi_j <-> OUTCOMES[j - 1]
OUTCOMES = (
    "g1g2g3",
    "g1e2g3",
    "f1g2g3",
    "f1e2g3",
    "g1g2e3",
    "g1e2e3",
    "f1g2e3",
    "f1e2e3",
)
QUASI_BELL = ("g1g2g3", "f1g2g3", "g1e2e3", "f1e2e3")  # psi_1, psi_3, psi_6, psi_8
NON_QUASI_BELL = ("g1e2g3", "f1e2g3", "g1g2e3", "f1g2e3")  # psi_2, psi_4, psi_5, psi_7


class ProtocolSequenceError(RuntimeError):
    """An operation targets an atom that is not in the register."""


@dataclass(frozen=True)
class ProtocolConfig:
    alpha1: complex
    alpha2: complex
    theta1: float
    theta2: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "theta1", "theta2", "delta"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def symmetric(cls, alpha: complex, theta: float, delta: float = 0.0) -> "ProtocolConfig":
        return cls(alpha, alpha, theta, theta, delta)


@dataclass(frozen=True)
class PulseSpec:
    kind: Literal["half_pi", "pi"]
    atom_index: int
    upper: Literal["e", "f"]
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("half_pi", "pi"):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        if self.kind == "pi" and self.upper != "f":
            raise ValueError("pi pulses only drive the (g, f) pair")


@dataclass(frozen=True)
class MeasurementOutcome:
    levels: tuple[str, str, str]

    def __post_init__(self):
        a, b, c = self.levels
        if a not in "gf" or b not in "ge" or c not in "ge":
            raise ValueError(f"not a measurable outcome: {self.levels}")

    @classmethod
    def parse(cls, label: "str | MeasurementOutcome") -> "MeasurementOutcome":
        if isinstance(label, MeasurementOutcome):
            return label
        text = label.strip()
        if len(text) != 6 or text[1::2] != "123":
            raise ValueError(f"bad outcome label {label!r}")
        return cls((text[0], text[2], text[4]))

    @property
    def label(self) -> str:
        return "".join(f"{lv}{i}" for i, lv in enumerate(self.levels, start=1))

    @property
    def index(self) -> int:
        """1-based row number ``j`` of psi_j."""
        return OUTCOMES.index(self.label) + 1

    def __str__(self) -> str:
        return self.label


def all_outcomes() -> list[MeasurementOutcome]:
    return [MeasurementOutcome.parse(o) for o in OUTCOMES]


@dataclass(frozen=True)
class ConditionalResult:
    outcome: MeasurementOutcome
    state: SuperState
    probability: float

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.label,
            "probability": self.probability,
            "state": self.state.to_json(),
        }


# --- elementary operations ---------------------------------------------------


def _find_atom(term: BasisTerm, atom_index: int) -> int:
    for pos, a in enumerate(term.atoms):
        if a.index == atom_index:
            return pos
    raise ProtocolSequenceError(f"atom {atom_index} is not in the register")


def add_atom(s: SuperState, atom_index: int, level: str = "g") -> SuperState:
    """Tensor a fresh atom in ``level`` onto every term."""
    new = AtomLabel(atom_index, level)
    terms = []
    for t in s.terms:
        if any(a.index == atom_index for a in t.atoms):
            raise ProtocolSequenceError(f"atom {atom_index} already present")
        terms.append(BasisTerm(t.coefficient, tuple(sorted(t.atoms + (new,))), t.fields))
    return SuperState(tuple(terms), n_modes=s.n_modes)


def _pulse_matrix(pulse: PulseSpec) -> dict[str, list[tuple[str, complex]]]:
    ph = cmath.exp(1j * pulse.phase)
    x = pulse.upper
    if pulse.kind == "half_pi":
        return {
            "g": [("g", SQRT1_2), (x, SQRT1_2 * ph)],
            x: [("g", SQRT1_2 / ph), (x, -SQRT1_2)],
        }
    return {"g": [(x, ph)], x: [("g", -1.0 / ph)]}


def _apply_pulse(s: SuperState, pulse: PulseSpec) -> SuperState:
    rules = _pulse_matrix(pulse)
    out: list[BasisTerm] = []
    for t in s.terms:
        pos = _find_atom(t, pulse.atom_index)
        level = t.atoms[pos].level
        if level not in rules:
            out.append(t)  # outside the driven pair
            continue
        for new_level, amp in rules[level]:
            atoms = list(t.atoms)
            atoms[pos] = AtomLabel(pulse.atom_index, new_level)
            out.append(BasisTerm(t.coefficient * amp, tuple(atoms), t.fields))
    return merge_terms(SuperState(tuple(out), n_modes=s.n_modes))


def apply_pi2(s: SuperState, pulse: PulseSpec) -> SuperState:
    """Ramsey pi/2 pulse: g -> (g + e^{i d} x)/sqrt2, x -> (e^{-i d} g - x)/sqrt2."""
    if pulse.kind != "half_pi":
        raise ValueError("apply_pi2 needs a half_pi pulse")
    return _apply_pulse(s, pulse)


def apply_pi(s: SuperState, pulse: PulseSpec) -> SuperState:
    """Ramsey pi pulse on (g, f): g -> e^{i d} f, f -> -e^{-i d} g."""
    if pulse.kind != "pi":
        raise ValueError("apply_pi needs a pi pulse")
    return _apply_pulse(s, pulse)


def apply_dispersive(s: SuperState, atom_index: int, mode_index: int, theta: float) -> SuperState:
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    if not 1 <= mode_index <= s.n_modes:
        raise ProtocolSequenceError(f"mode {mode_index} not present")
    rot = cmath.exp(1j * theta)
    out = []
    for t in s.terms:
        level = t.atoms[_find_atom(t, atom_index)].level
        fields = list(t.fields)
        coeff = t.coefficient
        if level == "g":
            fields[mode_index - 1] *= rot
        elif level == "e":
            fields[mode_index - 1] /= rot
            coeff /= rot
        out.append(BasisTerm(coeff, t.atoms, tuple(fields)))
    return merge_terms(SuperState(tuple(out), n_modes=s.n_modes))


# --- full circuit ------------------------------------------------------------


def circuit(cfg: ProtocolConfig):
    """Ordered list of (zone name, operation) closures making up the circuit."""
    d = cfg.delta
    return [
        ("A:in", lambda s: add_atom(s, 1)),
        ("R1", lambda s: apply_pi2(s, PulseSpec("half_pi", 1, "f", d))),
        ("A:C1", lambda s: apply_dispersive(s, 1, 1, cfg.theta1)),
        ("R2", lambda s: apply_pi(s, PulseSpec("pi", 1, "f", d))),
        ("A:C2", lambda s: apply_dispersive(s, 1, 2, cfg.theta2)),
        ("R3", lambda s: apply_pi2(s, PulseSpec("half_pi", 1, "f", d))),
        ("B:in", lambda s: add_atom(s, 2)),
        ("R4", lambda s: apply_pi2(s, PulseSpec("half_pi", 2, "e", d))),
        ("B:C1", lambda s: apply_dispersive(s, 2, 1, cfg.theta1)),
        # cavity C2 is detuned off for atom B
        ("R5", lambda s: apply_pi2(s, PulseSpec("half_pi", 2, "e", d))),
        ("C:in", lambda s: add_atom(s, 3)),
        ("R6", lambda s: apply_pi2(s, PulseSpec("half_pi", 3, "e", d))),
        # cavity C1 is detuned off for atom C
        ("C:C2", lambda s: apply_dispersive(s, 3, 2, cfg.theta2)),
        ("R7", lambda s: apply_pi2(s, PulseSpec("half_pi", 3, "e", d))),
    ]


def initial_state(cfg: ProtocolConfig) -> SuperState:
    return product_state(1.0, cfg.alpha1, cfg.alpha2)


def run_protocol(cfg: ProtocolConfig, stop_after: str | None = None) -> SuperState:
    """Propagate ``|alpha1>|alpha2>`` through the circuit.

    ``stop_after`` names a zone (e.g. ``"R5"``) to return an intermediate state.
    """
    s = initial_state(cfg)
    for name, op in circuit(cfg):
        s = op(s)
        if name == stop_after:
            return s
    if stop_after is not None:
        raise ValueError(f"unknown zone {stop_after!r}")
    return normalize(s)


def project_atoms(s: SuperState, outcome: MeasurementOutcome | str) -> ConditionalResult:
    """Project onto an atomic outcome; returns the normalized field state and its probability."""
    outcome = MeasurementOutcome.parse(outcome)
    if s.atom_indices != (1, 2, 3):
        raise ProtocolSequenceError("projection needs all three atoms")
    want = tuple(AtomLabel(i, lv) for i, lv in enumerate(outcome.levels, start=1))
    kept = tuple(BasisTerm(t.coefficient, (), t.fields) for t in s.terms if t.atoms == want)
    branch = merge_terms(SuperState(kept, n_modes=s.n_modes))
    total = s.norm2()
    prob = branch.norm2() / total if branch.terms else 0.0
    if prob <= 1e-28:
        raise DegenerateStateError(f"outcome {outcome.label} has zero probability", prob)
    return ConditionalResult(outcome, normalize(branch), float(prob))


def conditional_states(cfg: ProtocolConfig) -> dict[str, ConditionalResult | None]:
    """All eight outcomes of one run; zero-probability outcomes map to None."""
    final = run_protocol(cfg)
    out: dict[str, ConditionalResult | None] = {}
    for o in OUTCOMES:
        try:
            out[o] = project_atoms(final, o)
        except DegenerateStateError:
            out[o] = None
    return out


# --- reference constructors (transcribed, independent of the circuit) -------


def _ket(c: complex, b: complex) -> SuperState:
    return product_state(c, b)


def _kron(a: SuperState, b: SuperState) -> SuperState:
    terms = tuple(
        BasisTerm(x.coefficient * y.coefficient, (), x.fields + y.fields) for x in a.terms for y in b.terms
    )
    return SuperState(terms, n_modes=2)


def table_factors(outcome: MeasurementOutcome | str, cfg: ProtocolConfig):
    """The four one-mode cats (mu1, nu1, mu2, nu2) of a table row, general theta."""
    o = MeasurementOutcome.parse(outcome)
    s2 = 1.0 if o.levels[1] == "g" else -1.0
    s3 = 1.0 if o.levels[2] == "g" else -1.0
    a1, a2 = complex(cfg.alpha1), complex(cfg.alpha2)
    u1, u2 = cmath.exp(1j * cfg.theta1), cmath.exp(1j * cfg.theta2)
    mu1 = _ket(1, a1 * u1**2) + _ket(s2 / u1, a1)
    nu1 = _ket(1, a1 * u1) + _ket(s2 / u1, a1 / u1)
    nu2 = _ket(1, a2 * u2) + _ket(s3 / u2, a2 / u2)
    mu2 = _ket(1, a2 * u2**2) + _ket(s3 / u2, a2)
    return mu1, nu1, mu2, nu2


def reference_state(outcome: MeasurementOutcome | str, cfg: ProtocolConfig, normalized: bool = True) -> SuperState:
    """Conditional field state written directly from its tabulated closed form.

    ``(pre/8) [mu1 nu2 -/+ nu1 mu2]`` with the minus sign for atom A in g and
    ``pre = (-1 if atom A in f) * e^{i k delta}``, k = number of excited atoms.
    """
    o = MeasurementOutcome.parse(outcome)
    mu1, nu1, mu2, nu2 = table_factors(o, cfg)
    block_sign = -1.0 if o.levels[0] == "g" else 1.0
    k = sum(lv != "g" for lv in o.levels)
    pre = (-1.0 if o.levels[0] == "f" else 1.0) * cmath.exp(1j * k * cfg.delta) / 8.0
    s = (_kron(mu1, nu2) + _kron(nu1, mu2).scaled(block_sign)).scaled(pre)
    return normalize(s) if normalized else s


# Quarter-turn specialisation: each row is
#   pre [ (|a1> + c1 |-a1>)(|i a2> + c2 |-i a2>) + sign (|i a1> + c3 |-i a1>)(|a2> + c4 |-a2>) ]
_HALF_PI_ROWS = {
    #            pre   c1   c2   sign c3   c4
    "g1g2g3": (-1j, 1j, -1j, -1, -1j, 1j),
    "g1e2g3": (1j, -1j, -1j, 1, 1j, 1j),
    "f1g2g3": (1j, 1j, -1j, 1, -1j, 1j),
    "f1e2g3": (-1j, -1j, -1j, -1, 1j, 1j),
    "g1g2e3": (-1j, 1j, 1j, 1, -1j, -1j),
    "g1e2e3": (1j, -1j, 1j, -1, 1j, -1j),
    "f1g2e3": (1j, 1j, 1j, -1, -1j, -1j),
    "f1e2e3": (-1j, -1j, 1j, 1, 1j, -1j),
}


def half_pi_state(outcome: MeasurementOutcome | str, alpha1: complex, alpha2: complex) -> SuperState:
    """Horizontal/vertical cat pair states at theta1 = theta2 = pi/2 (normalized)."""
    o = MeasurementOutcome.parse(outcome)
    pre, c1, c2, sign, c3, c4 = _HALF_PI_ROWS[o.label]
    a1, a2 = complex(alpha1), complex(alpha2)
    first = _kron(_ket(1, a1) + _ket(c1, -a1), _ket(1, 1j * a2) + _ket(c2, -1j * a2))
    second = _kron(_ket(1, 1j * a1) + _ket(c3, -1j * a1), _ket(1, a2) + _ket(c4, -a2))
    return normalize((first + second.scaled(sign)).scaled(pre / 8.0))

