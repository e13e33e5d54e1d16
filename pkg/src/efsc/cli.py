"""Command-line front end: ``efsc {run,entropy-sweep,wigner,validate}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from importlib import metadata
from pathlib import Path

from .coherent import DegenerateStateError
from .config import ConfigError, load_json, parse_angle, parse_outcomes, protocol_config, sweep_spec
from .entanglement import ConditioningWarning, entropy_gram, state_entropy
from .protocol import MeasurementOutcome, ProtocolConfig, project_atoms, run_protocol
from .sweep import entropy_sweep, write_csv, write_json
from .validate import run_validation
from .wigner import (
    CONVENTION,
    PhaseSpaceGrid,
    WignerField,
    axis_sign_changes,
    lobe_positions,
    negativity_volume,
    reduced_wigner,
)

PRODUCT_TOL = 1e-8
GLOBAL_DEFAULTS = {"out_dir": ".", "threads": 1, "seed": 0, "format": "csv"}


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _config_record(cfg: ProtocolConfig) -> dict:
    a1, a2 = complex(cfg.alpha1), complex(cfg.alpha2)
    return {
        "alpha1": {"re": a1.real, "im": a1.imag},
        "alpha2": {"re": a2.real, "im": a2.imag},
        "theta1": cfg.theta1,
        "theta2": cfg.theta2,
        "delta": cfg.delta,
    }


def _write_manifest(out_dir: Path, command: str, config, outcome, outputs: list[str], **extra) -> Path:
    missing = [p for p in outputs if not (out_dir / p).is_file()]
    if missing:
        raise RuntimeError(f"refusing to write manifest; missing outputs {missing}")
    body = {
        "command": command,
        "config": config,
        "outcome": outcome,
        "outputs": sorted(outputs),
        "tool_version": tool_version(),
        "convention": CONVENTION,
        **extra,
    }
    path = out_dir / f"manifest-{command}.json"
    path.write_text(json.dumps(body, indent=2, sort_keys=True))
    return path


def cmd_run(args) -> int:
    cfg = protocol_config(load_json(args.config))
    labels = parse_outcomes(args.outcome)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    full = run_protocol(cfg)
    outputs, summary = [], {}
    for label in labels:
        try:
            res = project_atoms(full, MeasurementOutcome.parse(label))
        except DegenerateStateError as exc:
            summary[label] = {"probability": exc.probability, "degenerate": True, "file": None}
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            e, analytic = state_entropy(res.state)
            e_gram = entropy_gram(res.state).entropy
        name = f"state_{label}.json"
        body = res.to_json() | {"entropy": e, "entropy_gram": e_gram, "config": _config_record(cfg)}
        (out / name).write_text(json.dumps(body, indent=2))
        outputs.append(name)
        summary[label] = {
            "probability": res.probability,
            "degenerate": False,
            "entropy": e,
            "product_state": bool(e <= PRODUCT_TOL),
            "file": name,
        }
        if analytic is None:
            summary[label]["entropy_route"] = "gram"
    outcome = "all" if len(labels) == 8 else labels
    _write_manifest(out, "run", _config_record(cfg), outcome, outputs, outcomes=summary)
    print(f"wrote {len(outputs)} state file(s) to {out}")
    return 0


def cmd_entropy_sweep(args) -> int:
    spec_data = load_json(args.spec)
    spec = sweep_spec(spec_data)
    rows = entropy_sweep(spec, threads=args.threads)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = args.out or f"entropy_sweep.{args.format}"
    (write_csv if args.format == "csv" else write_json)(rows, out / name)
    outcome = "all" if len(spec.outcomes) == 8 else list(spec.outcomes)
    _write_manifest(out, "entropy-sweep", spec_data, outcome, [name], rows=len(rows))
    print(f"wrote {len(rows)} rows to {out / name}")
    return 0


def _grid_for(cfg: ProtocolConfig, mode: int, args, zoom: bool) -> PhaseSpaceGrid:
    if zoom:
        return PhaseSpaceGrid.square(args.zoom_width, args.grid)
    if args.half_width is not None:
        return PhaseSpaceGrid.square(args.half_width, args.grid)
    return PhaseSpaceGrid.wide(abs(cfg.alpha1 if mode == 1 else cfg.alpha2), args.grid)


def _write_field(fld: WignerField, out: Path, stem: str, fmt: str, ppm: bool, meta: dict) -> list[str]:
    names = []
    if fmt == "csv":
        fld.to_csv(out / f"{stem}.csv")
        names.append(f"{stem}.csv")
    else:
        (out / f"{stem}.values.json").write_text(
            json.dumps({"x": fld.grid.x.tolist(), "p": fld.grid.p.tolist(), "W": fld.values.tolist()})
        )
        names.append(f"{stem}.values.json")
    fld.write_sidecar(out / f"{stem}.json", **meta)
    names.append(f"{stem}.json")
    if ppm:
        fld.to_ppm(out / f"{stem}.ppm")
        names.append(f"{stem}.ppm")
    return names


def cmd_wigner(args) -> int:
    data = load_json(args.config)
    base = protocol_config(data)
    label = MeasurementOutcome.parse(parse_outcomes(args.outcome or data.get("outcome", "g1g2g3"))[0]).label
    mode = int(args.mode or data.get("mode", 1))
    if mode not in (1, 2):
        raise ConfigError("mode must be 1 or 2")
    thetas = [parse_angle(t) for t in args.theta.split(",")] if args.theta else [None]
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs, fields_meta = [], []
    for theta in thetas:
        cfg = base if theta is None else ProtocolConfig(base.alpha1, base.alpha2, theta, theta, base.delta)
        res = project_atoms(run_protocol(cfg), label)
        tag = "" if theta is None else f"_theta{math.degrees(theta):g}deg"
        for zoom in ([False, True] if args.zoom else [False]):
            grid = _grid_for(cfg, mode, args, zoom)
            fld = reduced_wigner(res.state, mode, grid)
            lobes = lobe_positions(fld) if not zoom else None
            meta = {
                "state": {"outcome": label, "mode": mode, "config": _config_record(cfg), "probability": res.probability},
                "min": fld.min,
                "max": float(fld.values.max()),
                "integral": fld.integral(),
                "negativity_volume": negativity_volume(fld),
            }
            if lobes is not None:
                meta["lobes"] = [list(p) for p in lobes.peaks]
                if lobes.note:
                    meta["lobe_note"] = lobes.note
            else:
                meta["axis_sign_changes"] = list(axis_sign_changes(fld))
            stem = f"wigner_{label}_m{mode}{tag}{'_zoom' if zoom else ''}"
            outputs += _write_field(fld, out, stem, args.format, args.ppm, meta)
            fields_meta.append({"stem": stem, "min": meta["min"], "negativity_volume": meta["negativity_volume"]})
    _write_manifest(out, "wigner", _config_record(base), label, outputs, fields=fields_meta)
    print(f"wrote {len(fields_meta)} field(s) to {out}")
    return 0


def cmd_validate(args) -> int:
    results = run_validation(args.level)
    failed = [r for r in results if not r.ok]
    if failed:
        print(f"first failure: {failed[0].name} = {failed[0].value:.3e} exceeds {failed[0].tol:.0e}", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=argparse.SUPPRESS, help="output directory (default: .)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="reserved; nothing is random")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="efsc", parents=[common], description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="run the circuit and write conditional states")
    r.add_argument("config")
    r.add_argument("--outcome", default="all")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("entropy-sweep", parents=[common], help="entropy over a parameter grid")
    s.add_argument("spec")
    s.add_argument("--out", default=None, help="file name inside --out-dir")
    s.set_defaults(func=cmd_entropy_sweep)

    w = sub.add_parser("wigner", parents=[common], help="reduced Wigner function maps")
    w.add_argument("config")
    w.add_argument("--outcome", default=None)
    w.add_argument("--mode", type=int, default=None)
    w.add_argument("--grid", type=int, default=201, help="points per axis")
    w.add_argument("--half-width", type=float, default=None, help="override the wide-view half width")
    w.add_argument("--zoom", action="store_true", help="also write a central zoom field")
    w.add_argument("--zoom-width", type=float, default=1.5)
    w.add_argument("--theta", default=None, help="comma list overriding theta1 = theta2, e.g. 90deg,60deg")
    w.add_argument("--ppm", action="store_true", help="also write a PPM heatmap")
    w.set_defaults(func=cmd_wigner)

    v = sub.add_parser("validate", parents=[common], help="cross-check the oracle suite")
    v.add_argument("--level", choices=("fast", "full"), default="fast")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # global flags may sit before or after the subcommand; defaults filled in here
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ConfigError, DegenerateStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
