"""Two environments that each favour one competitor, and the jump rates in between.

Environment 0 is Type 1 (y loses), environment 1 is Type 2 (x loses). Raising
the carrying-capacity parameter d of environment 1 from 9 to 10 removes the
random-extinction regime. This script prints the thresholds, counts the
regimes on a 200 x 200 grid and writes both regime maps and the critical
curves as SVG.

    python3 demos/rho_sweep.py --out demo_output
"""

import argparse
from pathlib import Path

from lvswitch import EnvPair, Environment, curve_grid, regime_map, threshold_analysis
from lvswitch.regimes import FOUR_REGIMES, default_grid, witnesses_from_map
from lvswitch.svg import curves_svg, regime_map_svg


def pair_for(rho):
    return EnvPair(Environment(1, 5, 2, 8, 3, 3), Environment(2, 11, 1, rho, 2, 1.8))


def main(out: Path):
    out.mkdir(parents=True, exist_ok=True)

    # %% Thresholds of the y-curve. They do not involve d, so one pair suffices.
    t = threshold_analysis(pair_for(9.0))
    print(f"fast-switching threshold alpha     = {t.alpha:.10f}")
    print(f"slow-switching threshold alpha_bar = {t.alpha_bar:.10f}")
    print(f"coeff_a = {t.coeff_a:g}  (negative: the finite part of v_y decreases)")

    # %% Regime maps
    u, v = default_grid(200, 200)
    for rho in (9.0, 10.0):
        pair = pair_for(rho)
        rmap = regime_map(pair, u, v)
        found = sorted(r.slug for r in rmap.regimes() if r in FOUR_REGIMES)
        print(f"\nd1 = {rho:g}: {len(found)} regimes -> {', '.join(found)}")
        for regime, w in witnesses_from_map(pair, rmap).witnesses.items():
            print(f"  {regime.slug:18s} u={w.u:.4f} v={w.v:9.4g}  Lx={w.lambda_x:+.4f}  Ly={w.lambda_y:+.4f}")
        (out / f"rho{rho:g}_map.svg").write_text(regime_map_svg(rmap, f"regime map, d1 = {rho:g}"))

        # %% v_y is the same for both values, v_x moves
        vy, vx = curve_grid(pair, "y", 400), curve_grid(pair, "x", 400)
        svg = curves_svg([(vy, "blue", "v_y"), (vx, "red", "v_x")], f"critical curves, d1 = {rho:g}")
        (out / f"rho{rho:g}_curves.svg").write_text(svg)
    print(f"\nSVG files written to {out}/")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("demo_output"))
    main(parser.parse_args().out)
