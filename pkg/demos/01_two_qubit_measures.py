"""
Concurrence, entanglement of formation and its square
=====================================================

Two-qubit entanglement of formation is a function of the concurrence alone.
Squaring it and viewing it as a function of ``x = C**2`` gives a monotone,
convex curve; that convexity is what makes the squared EoF monogamous.
"""

import numpy as np

from efmonogamy import measures, states
from efmonogamy.linalg import partial_trace

# Concurrence of a Bell pair, of a product state and of a W-state pair
pairs = {
    "Bell": states.bell().dm(),
    "|01>": states.basis_state("01").dm(),
    "W3 pair": partial_trace(states.w3(), [0, 1]),
}
for name, rho in pairs.items():
    c = measures.concurrence_two_qubit(rho)
    print(f"{name:8s} C = {c:.4f}  E_f = {measures.eof_from_concurrence(c):.4f}")

# A random rank-3 two-qubit state
rho = states.random_mixed((2, 2), 3, seed=1)
print(f"random rank-3: C = {measures.concurrence_two_qubit(rho):.4f}")

# The squared EoF as a function of x = C^2, with both derivatives
for x in (0.01, 0.2, 0.5, 0.9):
    print(f"x={x:4.2f}  sef={measures.sef(x):.5f}  d1={measures.sef_d1(x):.5f}  d2={measures.sef_d2(x):.5f}")

# d2 tends to a finite value at x -> 1 and diverges like ln^2 x at x -> 0
print("d2 near 1:", measures.sef_d2(1 - 1e-9), "limit", measures.SEF_D2_AT_ONE)
print("d2 at 1e-6:", measures.sef_d2(1e-6), "asymptote", measures.sef_d2_small_x(1e-6))

# The auxiliary function behind the sign of d2 peaks at 4/e^3
xs = np.linspace(1e-4, 1 - 1e-4, 10_000)
print("m_function argmax:", xs[np.argmax(measures.m_function(xs))], "vs 4/e^3 =", 4 / np.e**3)
