"""Quantum discord under projective qubit measurements and the Koashi-Winter route to EoF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ContractError,
    DensityMatrix,
    PureState,
    UnsupportedRankError,
    as_density,
    partial_trace,
    purify,
)
from .measures import _h, entropy_bits, von_neumann_entropy
from .states import cavity_amplitudes

GRID_THETA = 64
GRID_PHI = 128
REFINE_STEP_MIN = 1e-7

_PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]],
    dtype=complex,
)


@dataclass(frozen=True)
class QubitMeasurement:
    """Projective measurement along the Bloch axis ``(theta, phi)`` and its antipode."""

    theta: float
    phi: float

    def axis(self) -> np.ndarray:
        return _axes(np.array([self.theta]), np.array([self.phi]))[0]

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        ns = np.einsum("i,ijk->jk", self.axis(), _PAULI)
        eye = np.eye(2)
        return (eye + ns) / 2, (eye - ns) / 2


SIGMA_X = QubitMeasurement(np.pi / 2, 0.0)
SIGMA_Z = QubitMeasurement(0.0, 0.0)


def _axes(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


class _MeasuredState:
    """Precomputed ``rho_A`` and ``tr_R[(1 x sigma_i) rho]`` for a state with a measured qubit."""

    def __init__(self, rho: DensityMatrix, measured: int):
        if not 0 <= measured < rho.n:
            raise ContractError(f"measured subsystem {measured} out of range")
        if rho.dims[measured] != 2:
            raise ContractError("the measured subsystem must be a qubit")
        others = [i for i in range(rho.n) if i != measured]
        n = rho.n
        perm = others + [measured] + [n + i for i in others] + [n + measured]
        da = rho.dim // 2
        t = np.transpose(rho.matrix.reshape(rho.dims + rho.dims), perm).reshape(da, 2, da, 2)
        self.rho_a = np.einsum("arbr->ab", t)
        self.gammas = np.einsum("arbs,isr->iab", t, _PAULI)

    def conditional_entropy(self, axes: np.ndarray) -> np.ndarray:
        """``sum_k p_k S(A | k)`` for each Bloch axis in ``axes`` (shape (G, 3))."""
        shifted = np.einsum("gi,iab->gab", axes, self.gammas)
        total = np.zeros(len(axes))
        for sign in (1.0, -1.0):
            branch = (self.rho_a[None] + sign * shifted) / 2
            lam = np.clip(np.linalg.eigvalsh(branch), 0.0, None)
            p = lam.sum(axis=-1)
            live = p > 1e-12
            q = lam / np.where(live, p, 1.0)[:, None]
            total += np.where(live, p * entropy_bits(q), 0.0)
        return total


def conditional_entropy_after_measurement(rho: DensityMatrix, meas: QubitMeasurement, measured: int = -1) -> float:
    """Average entropy of the unmeasured part after measuring qubit ``measured``."""
    measured = measured % rho.n
    ms = _MeasuredState(rho, measured)
    return float(ms.conditional_entropy(meas.axis()[None])[0])


def minimize_conditional_entropy(rho: DensityMatrix, measured: int = -1) -> tuple[float, QubitMeasurement]:
    """Grid search over the Bloch sphere followed by step-halving pattern search."""
    measured = measured % rho.n
    ms = _MeasuredState(rho, measured)
    th = np.linspace(0, np.pi, GRID_THETA)
    ph = np.linspace(0, 2 * np.pi, GRID_PHI, endpoint=False)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    vals = ms.conditional_entropy(_axes(tt.ravel(), pp.ravel()))
    k = int(np.argmin(vals))
    best, theta, phi = vals[k], tt.ravel()[k], pp.ravel()[k]

    step = np.array([th[1] - th[0], ph[1] - ph[0]])
    moves = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
    while step.max() > REFINE_STEP_MIN:
        cand = np.array([theta, phi]) + moves * step
        cvals = ms.conditional_entropy(_axes(cand[:, 0], cand[:, 1]))
        j = int(np.argmin(cvals))
        if cvals[j] < best:
            best, (theta, phi) = cvals[j], cand[j]
        else:
            step = step / 2
    # fold back into theta in [0, pi], phi in [0, 2 pi)
    if theta < 0:
        theta, phi = -theta, phi + np.pi
    if theta > np.pi:
        theta, phi = 2 * np.pi - theta, phi + np.pi
    return float(best), QubitMeasurement(float(theta), float(phi % (2 * np.pi)))


def discord(rho: DensityMatrix, measured: int = -1) -> tuple[float, QubitMeasurement]:
    """Discord ``min_meas sum_k p_k S(A|k) - S(A|R)`` with the measurement on qubit ``measured``."""
    measured = measured % rho.n
    cond, meas = minimize_conditional_entropy(rho, measured)
    s_r = von_neumann_entropy(partial_trace(rho, [measured]))
    s_ar = von_neumann_entropy(rho)
    return cond - (s_ar - s_r), meas


def koashi_winter_pair(rho: PureState | DensityMatrix, focus: int) -> DensityMatrix | None:
    """Reduced state on (focus, R) where R is the qubit purifying ``rho``.

    Returns None for pure input, where no purifying system is needed.
    """
    rho = as_density(rho)
    rank = rho.rank()
    if rank > 2:
        raise UnsupportedRankError(f"Koashi-Winter route needs rank <= 2, got rank {rank}")
    if rank == 1:
        return None
    psi = purify(rho)
    return partial_trace(psi, [focus, rho.n])


def eof_via_koashi_winter(rho: PureState | DensityMatrix, focus: int) -> float:
    """EoF of ``focus | rest`` as ``D(focus|R) + S(focus|R)``, R purifying a rank-2 state."""
    pair = koashi_winter_pair(rho, focus)
    if pair is None:
        return float(von_neumann_entropy(partial_trace(as_density(rho), [focus])))
    d, _ = discord(pair, measured=1)
    s_cond = von_neumann_entropy(pair) - von_neumann_entropy(partial_trace(pair, [1]))
    return max(0.0, d + s_cond)


def eof_c1_c2r1_closed_form(alpha: float, kt: float) -> float:
    """``h(eta)`` with ``eta = (1-q)/2``, ``q = sqrt(1 - 4 b^2 xi^2 (xi^2 + b^2 chi^2 - b^2 xi^2))``."""
    if not 0.0 <= alpha <= 1.0:
        raise ContractError(f"alpha must lie in [0, 1], got {alpha}")
    xi, chi = cavity_amplitudes(kt)
    b2 = 1 - alpha**2
    q = np.sqrt(max(0.0, 1 - 4 * b2 * xi**2 * (xi**2 + b2 * chi**2 - b2 * xi**2)))
    return float(_h((1 - q) / 2))
