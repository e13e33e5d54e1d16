"""Entropy of all eight conditional states at theta1 = theta2 = pi/2 versus alpha1 = alpha2."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from efsc.config import sweep_spec
from efsc.sweep import entropy_sweep, write_csv


@dataclass
class AmplitudeScan:
    alpha_min: float = 0.1
    alpha_max: float = 3.0
    steps: int = 30
    theta: str = "90deg"
    out: Path = Path("results/entropy_vs_amplitude.csv")


def main(cfg: AmplitudeScan) -> None:
    spec = sweep_spec(
        {
            "outcome": "all",
            "axis1": {"name": "alpha", "min": cfg.alpha_min, "max": cfg.alpha_max, "steps": cfg.steps},
            "fixed": {"theta": cfg.theta},
        }
    )
    rows = entropy_sweep(spec)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(rows, cfg.out)
    print(f"{'alpha':>6} " + " ".join(f"{o:>8}" for o in spec.outcomes))
    for k in range(0, len(rows), len(spec.outcomes)):
        chunk = rows[k : k + len(spec.outcomes)]
        print(f"{chunk[0].axis1:6.3f} " + " ".join(f"{r.entropy:8.5f}" for r in chunk))
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=30)
    ap.add_argument("--out", type=Path, default=AmplitudeScan.out)
    a = ap.parse_args()
    main(AmplitudeScan(steps=a.steps, out=a.out))
