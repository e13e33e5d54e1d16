"""Entropy landscapes over (theta1, alpha1) with the second mode tied by a fixed ratio.

``--tie theta``: alpha2 = alpha1, theta2 = ratio * theta1.
``--tie alpha``: theta2 = theta1, alpha2 = ratio * alpha1.
Writes one CSV and one PPM heatmap (E = 0 white, E = 1 dark red) per ratio.
"""

import argparse
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from efsc.config import sweep_spec
from efsc.sweep import entropy_sweep, write_csv


@dataclass
class Landscape:
    outcome: str = "g1g2g3"
    tie: str = "theta"
    ratios: list = field(default_factory=lambda: [1.0, 0.8, 0.6, 0.4, 0.2])
    theta_max: float = math.pi
    alpha_max: float = 3.0
    steps: int = 60
    threads: int = 1
    out_dir: Path = Path("results/landscape")


def write_heatmap(e: np.ndarray, path: Path) -> None:
    # rows: alpha increasing upward; columns: theta increasing rightward
    t = np.nan_to_num(np.clip(e, 0, 1)).T[::-1]
    rgb = np.stack([1 - 0.45 * t, 1 - t, 1 - t], axis=-1)
    with open(path, "wb") as fh:
        fh.write(f"P6\n{t.shape[1]} {t.shape[0]}\n255\n".encode())
        fh.write((rgb * 255).round().astype(np.uint8).tobytes())


def main(cfg: Landscape) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for ratio in cfg.ratios:
        spec = sweep_spec(
            {
                "outcome": cfg.outcome,
                "axis1": {"name": "theta1", "min": cfg.theta_max / cfg.steps, "max": cfg.theta_max, "steps": cfg.steps},
                "axis2": {"name": "alpha1", "min": cfg.alpha_max / cfg.steps, "max": cfg.alpha_max, "steps": cfg.steps},
                "fixed": {f"{cfg.tie}_ratio": ratio, **({"alpha_ratio": 1.0} if cfg.tie == "theta" else {"theta_ratio": 1.0})},
            }
        )
        rows = entropy_sweep(spec, threads=cfg.threads)
        stem = cfg.out_dir / f"{cfg.outcome}_{cfg.tie}ratio{ratio:g}"
        write_csv(rows, stem.with_suffix(".csv"))
        e = np.array([r.entropy for r in rows]).reshape(cfg.steps, cfg.steps)
        write_heatmap(e, stem.with_suffix(".ppm"))
        print(f"ratio {ratio:g}: E >= 0.9 in {np.mean(e >= 0.9):.0%} of cells, E <= 0.1 in {np.mean(e <= 0.1):.0%}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outcome", default="g1g2g3")
    ap.add_argument("--tie", choices=("theta", "alpha"), default="theta")
    ap.add_argument("--steps", type=int, default=60)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Landscape.out_dir)
    a = ap.parse_args()
    main(Landscape(outcome=a.outcome, tie=a.tie, steps=a.steps, threads=a.threads, out_dir=a.out_dir))
