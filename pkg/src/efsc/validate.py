"""Cross-module oracle suite: circuit vs transcribed table, entropy routes, Wigner paths."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .coherent import inner_product
from .entanglement import ConditioningWarning, entropy_2x2, entropy_gram
from .fock import entropy_fock, reduced_density_fock, wigner_fock
from .protocol import OUTCOMES, ProtocolConfig, conditional_states, half_pi_state, reference_state
from .wigner import PhaseSpaceGrid, closed_form_wigner, fit_general_params, reduced_wigner


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.value <= self.tol

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: {self.value:.3e} (tol {self.tol:.0e})"


def _grid(level: str):
    if level == "fast":
        return itertools.product([math.pi / 2], [1.0, 2.0], [0.0, 0.7])
    return itertools.product([math.pi / 6, math.pi / 3, math.pi / 2], [0.5, 1.0, 2.0, 3.0], [0.0, 0.7])


def _protocol_checks(level: str) -> Iterator[CheckResult]:
    fid, psum, ent, fock = 0.0, 0.0, 0.0, 0.0
    for theta, alpha, delta in _grid(level):
        cfg = ProtocolConfig.symmetric(alpha, theta, delta)
        cs = conditional_states(cfg)
        psum = max(psum, abs(sum(r.probability for r in cs.values() if r) - 1.0))
        for o, r in cs.items():
            fid = max(fid, abs(abs(inner_product(reference_state(o, cfg), r.state)) - 1.0))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ConditioningWarning)
                e2, eg = entropy_2x2(r.state).entropy, entropy_gram(r.state).entropy
            ent = max(ent, abs(e2 - eg))
            if level == "full" and alpha <= 3:
                fock = max(fock, abs(entropy_fock(r.state) - e2))
    yield CheckResult("circuit vs transcribed table (|1 - fidelity|)", fid, 1e-10)
    yield CheckResult("outcome probabilities sum to one", psum, 1e-10)
    yield CheckResult("entropy: 2x2 route vs Gram route", ent, 1e-7)
    if level == "full":
        yield CheckResult("entropy: Fock partial trace vs 2x2 route", fock, 1e-7)


def _half_pi_checks(level: str) -> Iterator[CheckResult]:
    dev = 0.0
    for alpha in ([1.0, 2.0] if level == "fast" else [0.5, 1.0, 2.0, 3.0]):
        cfg = ProtocolConfig.symmetric(alpha, math.pi / 2)
        for o in OUTCOMES:
            dev = max(dev, abs(abs(inner_product(half_pi_state(o, alpha, alpha), reference_state(o, cfg))) - 1.0))
    yield CheckResult("right-angle cat forms vs general table", dev, 1e-10)


def _wigner_checks(level: str) -> Iterator[CheckResult]:
    grid = PhaseSpaceGrid.square(6.0, 41)
    X, P = grid.mesh()
    dual, fock = 0.0, 0.0
    for o, r in conditional_states(ProtocolConfig.symmetric(2.0, math.pi / 2)).items():
        _, w1, w2 = closed_form_wigner(fit_general_params(r.state), grid)
        k1, k2 = reduced_wigner(r.state, 1, grid), reduced_wigner(r.state, 2, grid)
        dual = max(dual, np.abs(w1.values - k1.values).max(), np.abs(w2.values - k2.values).max())
        if level == "full":
            fock = max(fock, np.abs(wigner_fock(reduced_density_fock(r.state, 1), X, P) - k1.values).max())
    yield CheckResult("Wigner: dyad kernel vs closed form", dual, 1e-8)
    if level == "full":
        for theta in (math.pi / 6, math.pi / 3):
            for r in conditional_states(ProtocolConfig.symmetric(2.0, theta)).values():
                k2 = reduced_wigner(r.state, 2, grid).values
                fock = max(fock, np.abs(wigner_fock(reduced_density_fock(r.state, 2), X, P) - k2).max())
        yield CheckResult("Wigner: dyad kernel vs Fock displaced parity", fock, 1e-8)


SUITES: tuple[Callable[[str], Iterator[CheckResult]], ...] = (_protocol_checks, _half_pi_checks, _wigner_checks)


def run_validation(level: str = "fast", echo: Callable[[str], None] = print) -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError(f"unknown level {level!r}")
    results = []
    for suite in SUITES:
        for res in suite(level):
            echo(res.line())
            results.append(res)
    return results
