"""Entropy sweeps over (theta1, theta2, alpha1, alpha2)."""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .coherent import DegenerateStateError
from .config import ConfigError, SweepSpec
from .entanglement import ConditioningWarning, entropy_2x2, entropy_gram, StructureError
from .protocol import MeasurementOutcome, ProtocolConfig, project_atoms, run_protocol

CSV_HEADER = "axis1,axis2,outcome,entropy,entropy_gram,probability,flags"


@dataclass(frozen=True)
class SweepRow:
    axis1: float
    axis2: float | None
    outcome: str
    entropy: float
    entropy_gram: float
    probability: float
    flags: str = ""

    def csv(self) -> str:
        a2 = "" if self.axis2 is None else f"{self.axis2:.17g}"
        return f"{self.axis1:.17g},{a2},{self.outcome},{self.entropy:.17g},{self.entropy_gram:.17g},{self.probability:.17g},{self.flags}"


def cell_config(spec: SweepSpec, v1: float, v2: float | None) -> ProtocolConfig:
    p = {}
    fx = spec.fixed
    for shared, pair in (("theta", ("theta1", "theta2")), ("alpha", ("alpha1", "alpha2"))):
        if shared in fx:
            p[pair[0]] = p[pair[1]] = fx[shared]
        for k in pair:
            if k in fx:
                p[k] = fx[k]
    for axis, v in ((spec.axis1, v1), (spec.axis2, v2)):
        if axis is None:
            continue
        if axis.name in ("theta", "alpha"):
            p[axis.name + "1"] = p[axis.name + "2"] = v
        else:
            p[axis.name] = v
    on_axis = {a.name for a in (spec.axis1, spec.axis2) if a is not None}
    # ratios tie the second mode to the first unless the second mode is swept itself
    for ratio, first, second in (("theta_ratio", "theta1", "theta2"), ("alpha_ratio", "alpha1", "alpha2")):
        if ratio in fx and second not in on_axis and first in p:
            p[second] = fx[ratio] * p[first]
    missing = {"theta1", "theta2", "alpha1", "alpha2"} - set(p)
    if missing:
        raise ConfigError(f"sweep leaves {sorted(missing)} unset")
    return ProtocolConfig(p["alpha1"], p["alpha2"], p["theta1"], p["theta2"], fx.get("delta", 0.0))


def _cell(args) -> list[SweepRow]:
    spec, v1, v2 = args
    cfg = cell_config(spec, v1, v2)
    full = run_protocol(cfg)
    rows = []
    for label in spec.outcomes:
        try:
            res = project_atoms(full, MeasurementOutcome.parse(label))
        except DegenerateStateError as exc:
            rows.append(SweepRow(v1, v2, label, math.nan, math.nan, exc.probability, "degenerate"))
            continue
        flags = []
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ConditioningWarning)
            e_gram = entropy_gram(res.state).entropy
        if caught:
            flags.append("ill_conditioned")
        try:
            e = entropy_2x2(res.state).entropy
        except StructureError:
            e = e_gram
            flags.append("gram_only")
        rows.append(SweepRow(v1, v2, label, e, e_gram, res.probability, "|".join(flags)))
    return rows


def entropy_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRow]:
    """Rows in row-major grid order (axis1 outer, axis2 inner, outcomes in table order)."""
    v2s = spec.axis2.values() if spec.axis2 is not None else [None]
    jobs = [(spec, v1, v2) for v1 in spec.axis1.values() for v2 in v2s]
    for _, v1, v2 in jobs:
        cell_config(spec, v1, v2)  # fail fast on incomplete specs
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_cell, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        chunks = [_cell(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]


def write_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(r.csv() + "\n")


def write_json(rows: list[SweepRow], path) -> None:
    def clean(d):
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}

    with open(path, "w") as fh:
        json.dump([clean(asdict(r)) for r in rows], fh, indent=1)
