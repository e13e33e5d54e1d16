"""Reduced Wigner function of one conditional state as the interaction angle shrinks.

Writes CSV + sidecar + PPM per angle and prints min W, negativity volume and lobe count.
"""

import argparse
import math
from dataclasses import dataclass, field
from pathlib import Path

from efsc.protocol import ProtocolConfig, project_atoms, run_protocol
from efsc.wigner import PhaseSpaceGrid, lobe_positions, negativity_volume, reduced_wigner


@dataclass
class ThetaSeries:
    outcome: str = "g1g2g3"
    alpha: float = 3.0
    degrees: list = field(default_factory=lambda: [90, 60, 40, 20, 5, 0.5])
    mode: int = 1
    points: int = 201
    out_dir: Path = Path("results/wigner_series")


def main(cfg: ThetaSeries) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    grid = PhaseSpaceGrid.wide(cfg.alpha, cfg.points)
    print(f"{'theta':>6} {'min W':>10} {'neg. vol':>9} lobes")
    for d in cfg.degrees:
        pc = ProtocolConfig.symmetric(cfg.alpha, math.radians(d))
        res = project_atoms(run_protocol(pc), cfg.outcome)
        fld = reduced_wigner(res.state, cfg.mode, grid)
        lobes = lobe_positions(fld, expected=4)
        stem = cfg.out_dir / f"{cfg.outcome}_m{cfg.mode}_theta{d:g}deg"
        fld.to_csv(stem.with_suffix(".csv"))
        fld.to_ppm(stem.with_suffix(".ppm"))
        fld.write_sidecar(stem.with_suffix(".json"), min=fld.min, negativity_volume=negativity_volume(fld),
                          lobes=[list(p) for p in lobes.peaks])
        print(f"{d:6g} {fld.min:10.4f} {negativity_volume(fld):9.4f} {len(lobes.peaks)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outcome", default="g1g2g3")
    ap.add_argument("--alpha", type=float, default=3.0)
    ap.add_argument("--mode", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=ThetaSeries.out_dir)
    a = ap.parse_args()
    main(ThetaSeries(outcome=a.outcome, alpha=a.alpha, mode=a.mode, out_dir=a.out_dir))
