"""JSON config parsing for protocol runs and entropy sweeps."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .protocol import OUTCOMES, MeasurementOutcome, ProtocolConfig


class ConfigError(ValueError):
    pass


_ANGLE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(deg|rad)\s*$")


def parse_angle(value) -> float:
    """Radians from a bare number (radians) or a string with an explicit ``deg``/``rad`` suffix."""
    if isinstance(value, bool):
        raise ConfigError(f"bad angle {value!r}")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        m = _ANGLE.match(value)
        if not m:
            raise ConfigError(f"angle {value!r} needs a 'deg' or 'rad' suffix")
        out = float(m.group(1))
        if m.group(2) == "deg":
            out = math.radians(out)
    else:
        raise ConfigError(f"bad angle {value!r}")
    if not math.isfinite(out):
        raise ConfigError(f"angle must be finite, got {value!r}")
    return out


def parse_amplitude(value) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"bad amplitude {value!r}")
    try:
        if isinstance(value, dict):
            out = complex(float(value["re"]), float(value.get("im", 0.0)))
        elif isinstance(value, str):
            out = complex(value.replace(" ", "").replace("i", "j"))
        else:
            out = complex(value)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad amplitude {value!r}") from exc
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise ConfigError(f"amplitude must be finite, got {value!r}")
    return out


def load_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def protocol_config(data: dict) -> ProtocolConfig:
    """Accepts alpha1/alpha2/theta1/theta2 or the shared shortcuts ``alpha``/``theta``; delta optional."""
    known = {"alpha", "alpha1", "alpha2", "theta", "theta1", "theta2", "delta", "outcome", "mode"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")

    def pick(name, shared, parse):
        if name in data:
            return parse(data[name])
        if shared in data:
            return parse(data[shared])
        raise ConfigError(f"missing {name!r} (or shared {shared!r})")

    return ProtocolConfig(
        alpha1=pick("alpha1", "alpha", parse_amplitude),
        alpha2=pick("alpha2", "alpha", parse_amplitude),
        theta1=pick("theta1", "theta", parse_angle),
        theta2=pick("theta2", "theta", parse_angle),
        delta=parse_angle(data.get("delta", 0.0)),
    )


def parse_outcomes(value) -> list[str]:
    if value in (None, "all"):
        return list(OUTCOMES)
    items = [value] if isinstance(value, str) else list(value)
    try:
        return [MeasurementOutcome.parse(v).label for v in items]
    except (ValueError, TypeError, AttributeError) as exc:
        raise ConfigError(f"bad outcome {value!r}") from exc


AXIS_NAMES = ("theta1", "theta2", "alpha1", "alpha2", "theta", "alpha")


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    steps: int

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.min]
        h = (self.max - self.min) / (self.steps - 1)
        return [self.min + k * h for k in range(self.steps)]


@dataclass(frozen=True)
class SweepSpec:
    outcomes: tuple[str, ...]
    axis1: Axis
    axis2: Axis | None = None
    fixed: dict = field(default_factory=dict)


def _axis(d) -> Axis:
    if not isinstance(d, dict):
        raise ConfigError("axis must be an object {name, min, max, steps}")
    name = d.get("name")
    if name not in AXIS_NAMES:
        raise ConfigError(f"axis name must be one of {AXIS_NAMES}, got {name!r}")
    conv = parse_angle if name.startswith("theta") else (lambda v: float(parse_amplitude(v).real))
    try:
        steps = int(d["steps"])
        lo, hi = conv(d["min"]), conv(d["max"])
    except KeyError as exc:
        raise ConfigError(f"axis {name!r} missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"axis {name!r}: {exc}") from exc
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    if steps > 1 and not hi > lo:
        raise ConfigError(f"axis {name!r}: max must exceed min")
    return Axis(name, lo, hi, steps)


def _covers(name: str) -> set[str]:
    return {"theta": {"theta1", "theta2"}, "alpha": {"alpha1", "alpha2"}}.get(name, {name})


def sweep_spec(data: dict) -> SweepSpec:
    extra = set(data) - {"outcome", "axis1", "axis2", "fixed"}
    if extra:
        raise ConfigError(f"unknown sweep keys: {sorted(extra)}")
    if "axis1" not in data:
        raise ConfigError("sweep spec needs axis1")
    a1 = _axis(data["axis1"])
    a2 = _axis(data["axis2"]) if data.get("axis2") is not None else None
    if a2 is not None and _covers(a1.name) & _covers(a2.name):
        raise ConfigError("axes overlap")
    fixed = dict(data.get("fixed", {}))
    bad = set(fixed) - {"alpha1", "alpha2", "theta1", "theta2", "alpha", "theta", "delta", "theta_ratio", "alpha_ratio"}
    if bad:
        raise ConfigError(f"unknown fixed keys: {sorted(bad)}")
    parsed = {}
    for k, v in fixed.items():
        if k.startswith("theta") and not k.endswith("ratio") or k == "delta":
            parsed[k] = parse_angle(v)
        else:
            parsed[k] = float(parse_amplitude(v).real)
    return SweepSpec(tuple(parse_outcomes(data.get("outcome"))), a1, a2, parsed)
