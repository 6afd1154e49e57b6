"""
Two cavities leaking into two reservoirs
========================================

Starting from ``alpha|00> + beta|11>`` on the cavities, each cavity decays into
its own reservoir. The split ``c1 | c2 r1`` has rank-2 reduced state, so its
EoF follows from discord with the purifying qubit r2. Along ``sigma_x`` that
reduces to a closed form.
"""

import numpy as np

from efmonogamy import discord, dynamics, indicators

alpha, kt = 0.6, 0.9
rho = dynamics.cavity_reduced(alpha, kt, ("c1", "c2", "r1"))
print("Koashi-Winter EoF(c1|c2 r1):", discord.eof_via_koashi_winter(rho, 0))
print("closed form              :", discord.eof_c1_c2r1_closed_form(alpha, kt))

# Residual over a coarse grid; it is never negative and vanishes at alpha = 1
alphas, kts = dynamics.default_grid(6, 4)
reports = dynamics.tau2_grid_c1_c2r1(alphas, kts)
table = np.array([r.value for r in reports]).reshape(len(alphas), len(kts))
print("tau2 grid (rows alpha, columns kt):")
print(np.array2string(table, precision=4, suppress_small=True))

# A local filter on c1 can raise the average residual of (c1 | c2 r2)
rep = dynamics.locc_counterexample()
print(f"before {rep.before.value:.4f}, after (average) {rep.average:.4f}, change {rep.difference:+.4f}")
for p, branch in rep.branches:
    print(f"  outcome prob {p:.4f}: tau2 {branch.value:.4f}")

state = dynamics.cavity_reduced(0.9, 0.9, ("c1", "c2", "r2"))
print("EoF lower bound on c1 | c2 r2:", indicators.eof_lower_bound(indicators.pairwise_eofs(state)))
