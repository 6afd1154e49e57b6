"""Convex-roof minimization over pure-state decompositions.

Every ``m``-member decomposition of a rank-``r`` state comes from an
``m x r`` isometry ``W`` acting on the weighted eigenvectors:

    |psi~_i> = sum_k W_ik sqrt(l_k) |e_k>,     p_i = <psi~_i|psi~_i>.

``W`` is parametrized without constraints as the polar factor
``X (X^dagger X)^{-1/2}`` of an arbitrary complex ``m x r`` matrix ``X``, and
the probability-weighted cost is minimized with L-BFGS from several starting
points. Gradients are central differences evaluated in one stacked call, so
a pure-state functional only needs to accept a batch of state tensors.

The returned value is the lowest cost seen, hence an upper bound on the true
convex roof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from . import measures
from .linalg import ContractError, DensityMatrix, PureState, RANK_TOL, as_density
from .states import psi_j_p

# Maps stacked normalized state tensors of shape (K, *dims) to K values.
PureFunctional = Callable[[np.ndarray], np.ndarray]

_FD_STEP = 1e-6


@dataclass(frozen=True)
class RoofConfig:
    ensemble_size: int | None = None
    restarts: int = 32
    max_iterations: int = 2000
    tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ContractError("need at least one restart")
        if self.max_iterations < 1 or self.tolerance <= 0:
            raise ContractError("iteration cap and tolerance must be positive")


@dataclass(frozen=True, eq=False)
class Decomposition:
    probabilities: np.ndarray
    components: tuple[PureState, ...] = field(repr=False)

    def mixture(self) -> np.ndarray:
        vecs = np.array([c.vector for c in self.components])
        return (vecs.T * self.probabilities) @ vecs.conj()

    def reassembly_error(self, rho: DensityMatrix) -> float:
        return float(np.linalg.norm(self.mixture() - rho.matrix))


class RoofResult(NamedTuple):
    value: float
    decomposition: Decomposition
    converged: bool


def _weighted_eigvecs(rho: DensityMatrix, tol: float = RANK_TOL) -> np.ndarray:
    """Rows ``sqrt(l_k) <e_k|`` transposed to shape (r, d), descending eigenvalues."""
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > tol
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    return (v * np.sqrt(w)).T


def _isometries(x: np.ndarray, m: int, r: int) -> np.ndarray:
    z = (x[..., : m * r] + 1j * x[..., m * r :]).reshape(x.shape[:-1] + (m, r))
    gram = np.conj(np.swapaxes(z, -1, -2)) @ z
    w, v = np.linalg.eigh(gram)
    w = np.maximum(w, 1e-300)
    inv_sqrt = (v / np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return z @ inv_sqrt


def decomposition_from_isometry(rho: DensityMatrix, w: np.ndarray, tol: float = 1e-9) -> Decomposition:
    """Decomposition ``{p_i, psi_i}`` induced by an ``m x r`` isometry ``w``."""
    base = _weighted_eigvecs(rho)
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[1] != base.shape[0]:
        raise ContractError(f"isometry must have {base.shape[0]} columns (the rank)")
    if np.max(np.abs(w.conj().T @ w - np.eye(w.shape[1]))) > tol:
        raise ContractError("W is not an isometry")
    comps = w @ base
    p = np.sum(np.abs(comps) ** 2, axis=1)
    keep = p > 1e-15
    states = tuple(PureState(c / np.sqrt(pi), rho.dims) for c, pi in zip(comps[keep], p[keep]))
    return Decomposition(p[keep] / p[keep].sum(), states)


def _weighted_cost(comps: np.ndarray, dims: tuple[int, ...], functional: PureFunctional) -> np.ndarray:
    """Sum_i p_i f(psi_i) for comps of shape (K, m, d)."""
    k, m, d = comps.shape
    flat = comps.reshape(k * m, d)
    p = np.sum(np.abs(flat) ** 2, axis=1)
    live = p > 1e-300
    safe = np.where(live[:, None], flat / np.sqrt(np.where(live, p, 1.0))[:, None], 0.0)
    safe[~live, 0] = 1.0
    vals = np.asarray(functional(safe.reshape((k * m,) + dims)), dtype=float)
    return np.sum((np.where(live, p, 0.0) * vals).reshape(k, m), axis=1)


def minimize_roof(rho: PureState | DensityMatrix, functional: PureFunctional, config: RoofConfig | None = None) -> RoofResult:
    """Minimize ``sum_i p_i f(psi_i)`` over ``m``-member decompositions of ``rho``.

    Restart 0 starts from the spectral decomposition, the others from Haar
    random isometries seeded by ``(config.seed, restart)``. The lowest value
    wins; ties go to the earliest restart.
    """
    config = config or RoofConfig()
    rho = as_density(rho)
    dims = rho.dims
    base = _weighted_eigvecs(rho)
    r = base.shape[0]
    if r == 1:
        psi = PureState(base[0] / np.linalg.norm(base[0]), dims)
        val = float(functional(psi.tensor()[None])[0])
        return RoofResult(val, Decomposition(np.ones(1), (psi,)), True)

    m = config.ensemble_size or min(r * r, 8)
    if m < r:
        raise ContractError(f"ensemble size {m} is below the rank {r}")
    n = 2 * m * r
    steps = np.vstack([np.eye(n), -np.eye(n)]) * _FD_STEP

    def cost(xs):
        return _weighted_cost(_isometries(xs, m, r) @ base, dims, functional)

    def cost_and_grad(x):
        vals = cost(np.vstack([x[None], x + steps]))
        return vals[0], (vals[1 : n + 1] - vals[n + 1 :]) / (2 * _FD_STEP)

    best_val, best_x, best_ok = np.inf, None, False
    for k in range(config.restarts):
        if k == 0:
            x0 = np.zeros(n)
            x0[: m * r] = np.eye(m, r).ravel()
        else:
            x0 = np.random.default_rng([config.seed, k]).standard_normal(n)
        res = minimize(
            cost_and_grad,
            x0,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": config.max_iterations, "ftol": config.tolerance, "gtol": 1e-10},
        )
        # re-evaluate at the final point: the line search may report a stale value
        val = float(cost(res.x[None])[0])
        if val < best_val:
            best_val, best_x, best_ok = val, res.x, bool(res.success)
    dec = decomposition_from_isometry(rho, _isometries(best_x, m, r))
    return RoofResult(best_val, dec, best_ok)


# --- concrete roofs ---------------------------------------------------------


def eof_mixed(rho: PureState | DensityMatrix, side: Sequence[int], config: RoofConfig | None = None) -> float:
    """Convex-roof entanglement of formation across ``side | rest`` (upper bound)."""
    side = list(side)
    return minimize_roof(rho, lambda t: measures.batch_entanglement_entropy(t, side), config).value


def _check_qubits(rho):
    if any(d != 2 for d in rho.dims):
        raise ContractError(f"expected qubits only, got dims {rho.dims}")


def tau1_cost(focus: int) -> PureFunctional:
    return lambda t: measures.batch_tau1(t, focus)


def tau1_global_cost(n: int) -> PureFunctional:
    return lambda t: sum(measures.batch_tau1(t, f) for f in range(n)) / n


def tau1_mixed(rho: PureState | DensityMatrix, focus: int = 0, config: RoofConfig | None = None) -> float:
    """Convex roof of the pure-state squared-EoF residual with ``focus`` as the first party."""
    _check_qubits(rho)
    return minimize_roof(rho, tau1_cost(focus), config).value


def tau1_global(rho: PureState | DensityMatrix, config: RoofConfig | None = None) -> float:
    """Convex roof of the squared-EoF residual averaged over every focus qubit."""
    _check_qubits(rho)
    return minimize_roof(rho, tau1_global_cost(rho.n), config).value


def three_tangle_mixed(rho: PureState | DensityMatrix, config: RoofConfig | None = None) -> float:
    if rho.dims != (2, 2, 2):
        raise ContractError(f"three-tangle needs three qubits, got dims {rho.dims}")
    return minimize_roof(rho, measures.batch_three_tangle, config).value


def find_p0(lo: float = 0.5, hi: float = 0.7, tol: float = 1e-10) -> float:
    """Weight ``p`` at which ``psi_j_p(0, p)`` has vanishing three-tangle.

    Bisects the real hyperdeterminant, which changes sign at the root while
    the tangle itself only touches zero.
    """

    def f(p):
        return measures.cayley_hyperdeterminant(psi_j_p(0, p)).real

    flo = f(lo)
    if flo * f(hi) > 0:
        raise ContractError("bracket does not contain a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
