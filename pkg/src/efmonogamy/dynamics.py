"""Entanglement distribution in the two cavity-reservoir system and the LOCC counterexample."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discord import eof_c1_c2r1_closed_form
from .indicators import IndicatorReport, classify_residual, eof_lower_bound, pairwise_eofs, tau2
from .linalg import ContractError, DensityMatrix, partial_trace
from .roof import RoofConfig
from .states import cavity_amplitudes, cavity_output

# qubit positions in cavity_output
C1, R1, C2, R2 = range(4)
LABELS = ("c1", "r1", "c2", "r2")


@dataclass(frozen=True)
class CavityParams:
    alpha: float
    kt: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ContractError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.kt < 0:
            raise ContractError(f"kappa*t must be nonnegative, got {self.kt}")

    @property
    def beta(self) -> float:
        return float(np.sqrt(1 - self.alpha**2))

    @property
    def xi(self) -> float:
        return cavity_amplitudes(self.kt)[0]

    @property
    def chi(self) -> float:
        return cavity_amplitudes(self.kt)[1]


@dataclass(frozen=True)
class PovmPair:
    """Two-outcome local filter ``M1 = diag(a, b)``, ``M2 = diag(sqrt(1-a^2), sqrt(1-b^2))``."""

    a: float
    b: float

    def __post_init__(self):
        if not (0 < self.a <= 1 and 0 < self.b <= 1):
            raise ContractError("POVM parameters must lie in (0, 1]")

    def operators(self) -> tuple[np.ndarray, np.ndarray]:
        m1 = np.diag([self.a, self.b]).astype(complex)
        m2 = np.diag([np.sqrt(1 - self.a**2), np.sqrt(1 - self.b**2)]).astype(complex)
        return m1, m2


def cavity_reduced(alpha: float, kt: float, keep: tuple[str, ...]) -> DensityMatrix:
    """Reduced state of the cavity-reservoir output on the named qubits, in the order given."""
    idx = [LABELS.index(k) for k in keep]
    return partial_trace(cavity_output(alpha, kt), idx)


def tau2_c1_c2r1(alpha: float, kt: float, tol: float = 1e-6) -> IndicatorReport:
    """``E_f^2(c1|c2 r1) - E_f^2(c1 c2) - E_f^2(c1 r1)``, first term in closed form."""
    rho = cavity_reduced(alpha, kt, ("c1", "c2", "r1"))
    e_c1c2, e_c1r1 = pairwise_eofs(rho, 0)
    e_split = eof_c1_c2r1_closed_form(alpha, kt)
    comps = {"Ef2(c1|c2r1)": e_split**2, "Ef2(c1c2)": e_c1c2**2, "Ef2(c1r1)": e_c1r1**2}
    raw = comps["Ef2(c1|c2r1)"] - comps["Ef2(c1c2)"] - comps["Ef2(c1r1)"]
    value, clamped = classify_residual(raw, tol, rho, f"tau2 at alpha={alpha}, kt={kt}")
    bound = eof_lower_bound([e_c1c2, e_c1r1])
    meta = {"alpha": alpha, "kt": kt, "raw": raw, "route": "closed-form",
            "eof_split": e_split, "lower_bound": bound}
    return IndicatorReport("tau2(c1|c2r1)", value, comps, meta, clamped)


def default_grid(rows: int = 50, cols: int = 50) -> tuple[np.ndarray, np.ndarray]:
    return np.linspace(0.0, 1.0, rows), np.linspace(0.0, 3.0, cols)


def tau2_grid_c1_c2r1(alphas, kts, tol: float = 1e-6) -> list[IndicatorReport]:
    """Reports for every (alpha, kt) cell, row-major in ``alphas``."""
    return [tau2_c1_c2r1(float(a), float(k), tol) for a in alphas for k in kts]


def apply_local_povm(rho: DensityMatrix, subsystem: int, povm: PovmPair) -> list[tuple[float, DensityMatrix]]:
    """Outcome probabilities and normalized post-measurement states of a local filter."""
    if rho.dims[subsystem] != 2:
        raise ContractError("POVM acts on a qubit")
    ops = povm.operators()
    if np.max(np.abs(sum(m.conj().T @ m for m in ops) - np.eye(2))) > 1e-12:
        raise ContractError("POVM elements do not sum to the identity")
    out = []
    for m in ops:
        full = np.array([[1.0]])
        for i, d in enumerate(rho.dims):
            full = np.kron(full, m if i == subsystem else np.eye(d))
        sigma = full @ rho.matrix @ full.conj().T
        p = float(np.trace(sigma).real)
        branch = DensityMatrix((sigma + sigma.conj().T) / (2 * p), rho.dims) if p > 1e-15 else None
        out.append((p, branch))
    return out


@dataclass
class LoccReport:
    before: IndicatorReport
    branches: list[tuple[float, IndicatorReport]]
    average: float
    difference: float
    params: dict


def locc_counterexample(alpha: float = 9 / 10, kt: float = 0.9, a: float = 4 / 5, b: float = 3 / 7,
                        config: RoofConfig | None = None) -> LoccReport:
    """Average ``tau2(c1|c2 r2)`` after a local filter on c1 versus its value before.

    Each branch keeps rank <= 2, so EoF(c1|c2 r2) comes from the Koashi-Winter
    route with r1 as the purifying qubit; a higher-rank branch would fall back
    to the convex roof and is visible in the report's ``route``.
    """
    rho = cavity_reduced(alpha, kt, ("c1", "c2", "r2"))
    labels = ("c1", "c2", "r2")
    before = tau2(rho, 0, config, labels)
    branches = []
    for p, branch in apply_local_povm(rho, 0, PovmPair(a, b)):
        branches.append((p, tau2(branch, 0, config, labels)))
    average = sum(p * rep.value for p, rep in branches)
    return LoccReport(before, branches, average, average - before.value,
                      {"alpha": alpha, "kt": kt, "a": a, "b": b})
