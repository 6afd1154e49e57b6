"""
N-qubit W states mixed with |1...1>
===================================

For ``rho_N = a |1^N><1^N| + (1-a) |W_N><W_N|`` with ``a = 1/(N+1)``, evaluating
the pure-state residual on the two components gives a closed form. Because it
is the value of an explicit decomposition, it also bounds the convex roof from
above, which the optimizer confirms for N = 3.
"""

from efmonogamy import indicators, roof, states
from efmonogamy.roof import RoofConfig

for n in (3, 4, 7, 10, 20, 30, 100):
    print(f"N={n:<4d} closed form {indicators.table1_value(n):.4f}")

n = 3
a = 1 / (n + 1)
explicit = (1 - a) * indicators.tau1_pure(states.w_n(n)) + a * indicators.tau1_pure(states.ones_n(n))
print(f"explicit two-member decomposition, N=3: {explicit:.4f}")
print(f"optimizer over all decompositions, N=3: {roof.tau1_global(states.wn_ones_mixture(n), RoofConfig(restarts=8)):.4f}")
