"""Wide and central-zoom reduced Wigner maps of both modes for the first conditional state at right angles."""

import argparse
import math
from pathlib import Path

from efsc.protocol import ProtocolConfig, conditional_states
from efsc.wigner import PhaseSpaceGrid, axis_sign_changes, closed_form_wigner, fit_general_params, reduced_wigner


def main(alpha: float, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    st = conditional_states(ProtocolConfig.symmetric(alpha, math.pi / 2))["g1g2g3"].state
    prm = fit_general_params(st)
    print("closed-form parameters:", prm)
    for mode in (1, 2):
        for name, grid in (("wide", PhaseSpaceGrid.wide(alpha)), ("zoom", PhaseSpaceGrid.zoom())):
            fld = reduced_wigner(st, mode, grid)
            _, c1, c2 = closed_form_wigner(prm, grid)
            dev = abs((c1 if mode == 1 else c2).values - fld.values).max()
            stem = out_dir / f"g1g2g3_alpha{alpha:g}_m{mode}_{name}"
            fld.to_csv(stem.with_suffix(".csv"))
            fld.to_ppm(stem.with_suffix(".ppm"))
            print(f"mode {mode} {name}: min {fld.min:.4f}, closed-form dev {dev:.1e}, axis sign changes {axis_sign_changes(fld)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=4.0)
    ap.add_argument("--out-dir", type=Path, default=Path("results/compass"))
    a = ap.parse_args()
    main(a.alpha, a.out_dir)
