"""Two coexistence environments whose switching can still drive y extinct.

Both environments are Type 3, so each has a stable interior equilibrium.
The fast-switching limit of the invasion rate of y is negative on a middle
band of u, and the critical curve v_y escapes to infinity at both ends of
that band.

    python3 demos/coexistence_pair.py
"""

import math

import numpy as np

from lvswitch import EnvPair, Environment, classify, critical_v, limit_v_inf, threshold_analysis


pair = EnvPair(Environment(6, 1, 4, 2, 1, 5), Environment(3, 3, 2, 5.5, 5, 1))
print("types:", classify(pair.env0).value, classify(pair.env1).value)

# %% The quadratic T(u) whose sign decides the fast limit
t = threshold_analysis(pair)
print(f"A = {t.A:g}, B = {t.B:g}, C = {t.C:g}, Delta = {t.discriminant:g}")
roots = sorted((-t.B + sgn * math.sqrt(t.discriminant)) / (2 * t.A) for sgn in (1, -1))
# T carries the sign of c - a of the averaged environment, so the fast limit is negative where T > 0
print(f"T >= 0 on [{roots[0]:.6f}, {roots[1]:.6f}]")
print("fast limit positive on:", ", ".join(f"({lo:.4f}, {hi:.4f})" for lo, hi in t.i_tilde))
print("fast limit negative on:", ", ".join(f"({lo:.4f}, {hi:.4f})" for lo, hi in t.t_nonnegative))

# %% Sampling the critical curve across u
print("\n     u   fast limit   v_y")
for u in np.linspace(0.05, 0.95, 19):
    ev = critical_v(pair, "y", u)
    shown = f"{ev.v:.4g}" if ev.kind == "finite" else ev.kind
    print(f"  {u:.2f}   {float(limit_v_inf(pair, u)):+.5f}   {shown}")
