"""Monogamy residuals and multipartite indicators built on squared EoF."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import measures
from .discord import eof_via_koashi_winter
from .linalg import ContractError, DensityMatrix, PureState, as_density, partial_trace
from .measures import _eof_from_c, _sef
from .roof import Decomposition, RoofConfig, eof_mixed, find_p0
from .states import psi_j_p, w3

S_W_EXPECTED = 0.238162
S_P_EXPECTED = 0.217061


@dataclass
class IndicatorReport:
    """A scalar indicator together with the terms it was assembled from.

    ``value == components[head] - sum(other components)``.
    """

    name: str
    value: float
    components: dict[str, float]
    metadata: dict[str, object] = field(default_factory=dict)
    clamped: bool = False


class MonogamyViolation(RuntimeError):
    """A residual fell below its tolerance; carries the offending state."""

    def __init__(self, residual: float, tolerance: float, state=None, label: str = ""):
        self.residual = residual
        self.tolerance = tolerance
        self.state = state
        super().__init__(f"{label or 'residual'} = {residual:.3e} below -{tolerance:g}")


def classify_residual(value: float, tol: float, state=None, label: str = "") -> tuple[float, bool]:
    """Clamp residuals in ``[-tol, 0)`` to zero; raise below ``-tol``."""
    if value < -tol:
        raise MonogamyViolation(value, tol, state, label)
    if value < 0:
        return 0.0, True
    return value, False


def _others(n: int, focus: int) -> list[int]:
    if not 0 <= focus < n:
        raise ContractError(f"focus {focus} out of range for {n} qubits")
    return [j for j in range(n) if j != focus]


def pairwise_concurrences(state: PureState | DensityMatrix, focus: int = 0) -> list[float]:
    return [measures.concurrence_two_qubit(partial_trace(state, [focus, j])) for j in _others(state.n, focus)]


def pairwise_eofs(state: PureState | DensityMatrix, focus: int = 0) -> list[float]:
    return [float(_eof_from_c(c)) for c in pairwise_concurrences(state, focus)]


def tau1_pure(psi: PureState, focus: int = 0) -> float:
    """``E_f^2(focus|rest) - sum_j E_f^2(rho_{focus j})`` for a pure multiqubit state."""
    _others(psi.n, focus)
    return float(measures.batch_tau1(psi.tensor()[None], focus)[0])


def eof_bipartite(state: PureState | DensityMatrix, focus: int, config: RoofConfig | None = None) -> tuple[float, str]:
    """EoF of ``focus | rest`` via the cheapest valid route; returns ``(value, route)``."""
    if isinstance(state, PureState):
        return measures.eof_pure_bipartite(state, [focus]), "schmidt"
    rank = state.rank()
    if rank == 1:
        w, v = np.linalg.eigh(state.matrix)
        return measures.eof_pure_bipartite(PureState(v[:, -1], state.dims), [focus]), "schmidt"
    if rank == 2:
        return eof_via_koashi_winter(state, focus), "koashi-winter"
    return eof_mixed(state, [focus], config), "convex-roof"


def tau2(state: PureState | DensityMatrix, focus: int = 0, config: RoofConfig | None = None,
         labels: Sequence[str] | None = None, tol: float = 1e-6) -> IndicatorReport:
    """``E_f^2(focus|rest) - sum_j E_f^2(focus, j)`` evaluated on the state itself."""
    labels = list(labels) if labels else [f"q{i}" for i in range(state.n)]
    others = _others(state.n, focus)
    ef, route = eof_bipartite(state, focus, config)
    head = f"Ef2({labels[focus]}|{''.join(labels[j] for j in others)})"
    comps = {head: ef**2}
    for j, e in zip(others, pairwise_eofs(state, focus)):
        comps[f"Ef2({labels[focus]}{labels[j]})"] = e**2
    raw = comps[head] - sum(v for k, v in comps.items() if k != head)
    value, clamped = classify_residual(raw, tol, state, "tau2")
    return IndicatorReport("tau2", value, comps, {"route": route, "focus": focus, "raw": raw}, clamped)


def tau2_partition_avg(state: PureState | DensityMatrix, config: RoofConfig | None = None) -> float:
    return float(np.mean([tau2(state, f, config).value for f in range(state.n)]))


def eof_lower_bound(pairwise: Sequence[float]) -> float:
    """``sqrt(sum_j E_f(rho_{1j})^2)``, a lower bound on ``E_f(1|rest)``."""
    e = np.asarray(pairwise, dtype=float)
    if np.any(e < -1e-12) or np.any(e > 1 + 1e-12):
        raise ContractError("pairwise EoF values must lie in [0, 1]")
    return float(np.sqrt(np.sum(np.clip(e, 0, 1) ** 2)))


def monogamy_score_ef(state: PureState | DensityMatrix, focus: int = 0, config: RoofConfig | None = None) -> float:
    """Unsquared score ``E_f(focus|rest) - sum_j E_f(focus, j)``; may be negative."""
    ef, _ = eof_bipartite(state, focus, config)
    return ef - sum(pairwise_eofs(state, focus))


def sef_chain_residuals(psi: PureState, focus: int = 0) -> tuple[float, float]:
    """Both steps of the pure-state chain
    ``E_f^2(C^2_{1|rest}) >= E_f^2(sum C^2_{1j}) >= sum E_f^2(C^2_{1j})``."""
    t = psi.tensor()[None]
    c2_all = float(measures.batch_single_qubit_concurrence2(t, focus)[0])
    c2_pairs = np.array([float(measures.batch_pair_concurrence(t, focus, j)[0]) ** 2 for j in _others(psi.n, focus)])
    mid = float(_sef(min(1.0, c2_pairs.sum())))
    return float(_sef(c2_all)) - mid, mid - float(np.sum(_sef(c2_pairs)))


def sef_monogamy_check_pure(psi: PureState, focus: int = 0) -> float:
    return min(sef_chain_residuals(psi, focus))


def sef_monogamy_check_mixed_rank2(state: PureState | DensityMatrix, focus: int = 0) -> float:
    """``E_f^2(focus|rest) - sum_j E_f^2(focus, j)`` for rank <= 2, EoF by Koashi-Winter."""
    if isinstance(state, PureState):
        return tau1_pure(state, focus)
    ef = eof_via_koashi_winter(state, focus)
    return ef**2 - sum(e**2 for e in pairwise_eofs(state, focus))


# --- decomposition averages ------------------------------------------------


def decomposition_terms(dec: Decomposition, focus: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Weighted per-component terms ``E1_i = p_i E_f(psi_i, focus|rest)`` and
    ``Ej_i = p_i E_f(rho^i_{focus j})`` with shape (m,) and (m, n-1)."""
    n = dec.components[0].n
    t = np.array([c.tensor() for c in dec.components])
    p = dec.probabilities
    e1 = p * measures.batch_single_qubit_entropy(t, focus)
    ej = np.stack([p * _eof_from_c(measures.batch_pair_concurrence(t, focus, j)) for j in _others(n, focus)], axis=1)
    return e1, ej


def cross_term(e1: np.ndarray, ej: np.ndarray) -> float:
    """``2 sum_{i<k} (E1_i E1_k - sum_j Ej_i Ej_k)``."""
    g1 = np.outer(e1, e1)
    gj = ej @ ej.T
    iu = np.triu_indices(len(e1), k=1)
    return float(2 * np.sum(g1[iu] - gj[iu]))


# --- closed forms for the special families ---------------------------------


@lru_cache(maxsize=1)
def ghzw_constants() -> tuple[float, float, float]:
    """``(p0, s_p, s_w)`` recomputed from scratch."""
    p0 = find_p0()
    return p0, tau1_pure(psi_j_p(0, p0)), tau1_pure(w3())


def tau1_ghzw_closed_form(p: float) -> float:
    """Indicator of the GHZ/W mixture from the three-phase decomposition:
    ``(p/p0) s_p + (1 - p/p0) s_w``."""
    p0, s_p, s_w = ghzw_constants()
    if not 0 <= p < p0:
        raise ContractError(f"closed form holds for p in [0, p0={p0:.6f}), got {p}")
    a = p / p0
    return a * s_p + (1 - a) * s_w


def table1_value(n: int) -> float:
    """``N/(N+1) [E_f^2(C^2 = 4(N-1)/N^2) - (N-1) E_f^2(C^2 = 4/N^2)]``."""
    if n < 3:
        raise ContractError(f"N must be at least 3, got {n}")
    return n / (n + 1) * (float(_sef(4 * (n - 1) / n**2)) - (n - 1) * float(_sef(4 / n**2)))
