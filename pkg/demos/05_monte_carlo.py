"""
Random-state checks of the monogamy inequalities
================================================

Sample Haar-random pure states and random rank-2 mixed states and record the
smallest residual of each inequality. Every sample has its own seed stream
derived from (master seed, index), so any sample can be regenerated alone.
"""

import numpy as np

from efmonogamy import discord, indicators, measures, states

master = 7
for n, count in ((3, 2000), (4, 300)):
    sef_res, ckw_res = [], []
    for i in range(count):
        psi = states.haar_random_pure((2,) * n, states.sample_seed(master, i))
        sef_res.append(indicators.tau1_pure(psi))
        ckw_res.append(measures.ckw_residual_pure(psi))
    print(f"{n} qubits, {count} states: min squared-EoF residual {min(sef_res):.3e}, min CKW residual {min(ckw_res):.3e}")

mixed = []
for i in range(50):
    rho = states.random_mixed((2, 2, 2), 2, states.sample_seed(master, i))
    mixed.append(indicators.sef_monogamy_check_mixed_rank2(rho))
print(f"rank-2 mixed, 50 states: min residual {min(mixed):.3e}, mean {np.mean(mixed):.3f}")

# Regenerate one sample on its own
psi = states.haar_random_pure((2, 2, 2), states.sample_seed(master, 17))
print("sample 17 residual:", indicators.tau1_pure(psi))
