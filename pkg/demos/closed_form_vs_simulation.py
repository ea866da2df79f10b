"""Closed-form invasion rates checked against the simulator.

For a few jump rates the invasion rate of each species is computed from the
Beta law of the resident and estimated by a long time average along a
simulated path, with a batch-means standard error.

    python3 demos/closed_form_vs_simulation.py
"""

from lvswitch import SimConfig, UVCoords, estimate_lambda, load_pair, uv_to_rates
from lvswitch.invasion import chart_weights, estimate_invasion_rate

pair = load_pair("1-3")
weights = chart_weights(pair, "y")
print(f"pair 1-3, alpha-chart weights {weights}")
print("    u      v  species   closed form     simulated     z")

for u, v in [(0.3, 0.5), (0.5, 5.0), (0.7, 50.0)]:
    rates = uv_to_rates(UVCoords(u, v, weights))
    for species in ("x", "y"):
        closed = estimate_invasion_rate(pair, species, rates).value
        mc = estimate_lambda(pair, rates, species, SimConfig(t_max=2e4, burn_in=1e3, seed=11))
        z = (mc.estimate - closed) / mc.std_error
        print(f"  {u:.1f} {v:6.1f}  {species:>5s}   {closed:+.6f}   {mc.estimate:+.6f} +- {mc.std_error:.1e}  {z:+.2f}")
