"""Entropies, concurrence, entanglement of formation and related functions.

Entropies are in bits. The ``sef*`` family treats the squared entanglement of
formation of two qubits as a function of the squared concurrence ``x = C**2``;
its derivatives and the auxiliary function ``m_function`` use natural logs.

Functions prefixed ``batch_`` act on stacked, possibly unnormalized state
tensors of shape ``(..., 2, 2, ..., 2)`` and are what the convex-roof
optimizer evaluates in its inner loop.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .linalg import (
    ATOL,
    ContractError,
    DensityMatrix,
    PureState,
    partial_trace,
    schmidt_decompose,
)

LN2 = np.log(2.0)
_YY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0])).astype(complex)


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def entropy_bits(probs) -> np.ndarray:
    """Shannon entropy along the last axis, ``0 log 0 := 0``."""
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    return 0.0 - np.sum(_xlog2x(p), axis=-1)


def _h(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return 0.0 - (_xlog2x(x) + _xlog2x(1.0 - x))


def binary_entropy(x: float) -> float:
    if not -1e-12 <= x <= 1 + 1e-12:
        raise ContractError(f"binary entropy needs x in [0, 1], got {x}")
    return float(_h(x))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return float(entropy_bits(rho.eigvals()))


# --- concurrence and EoF ----------------------------------------------------


def _concurrence_from_vectors(v: np.ndarray) -> np.ndarray:
    """Two-qubit concurrence of ``rho = v v^dagger`` for stacked ``v`` of shape (..., 4, k).

    Uses the singular values of ``v^T (sy x sy) v``, which are the square
    roots of the spin-flip spectrum, so near-zero eigenvalues never pass
    through a square root.
    """
    if v.shape[-1] > 4:
        r = np.linalg.qr(np.conj(np.swapaxes(v, -1, -2)), mode="r")
        v = np.conj(np.swapaxes(r, -1, -2))
    t = np.swapaxes(v, -1, -2) @ _YY @ v
    s = np.linalg.svd(t, compute_uv=False)
    return np.maximum(0.0, s[..., 0] - np.sum(s[..., 1:], axis=-1))


def concurrence_two_qubit(rho: DensityMatrix) -> float:
    """Wootters concurrence ``max(0, s1 - s2 - s3 - s4)`` of a two-qubit state."""
    if rho.dims != (2, 2):
        raise ContractError(f"expected a two-qubit state, got dims {rho.dims}")
    w, v = np.linalg.eigh(rho.matrix)
    w = np.where(w < ATOL, 0.0, w)
    return float(_concurrence_from_vectors(v * np.sqrt(w)))


def concurrence_pure_bipartite(psi: PureState, side: Sequence[int]) -> float:
    """``sqrt(2 (1 - tr rho_side^2))``."""
    rho = partial_trace(psi, side).matrix
    purity = np.real(np.vdot(rho, rho))
    return float(np.sqrt(max(0.0, 2 * (1 - purity))))


def _eof_from_c(c):
    c = np.clip(c, 0.0, 1.0)
    return _h((1 + np.sqrt(1 - c * c)) / 2)


def eof_from_concurrence(c: float) -> float:
    if not -1e-12 <= c <= 1 + 1e-12:
        raise ContractError(f"concurrence must lie in [0, 1], got {c}")
    return float(_eof_from_c(c))


def eof_two_qubit(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence_two_qubit(rho))


def eof_pure_bipartite(psi: PureState, side: Sequence[int]) -> float:
    """Entanglement entropy of ``psi`` across ``side | rest``."""
    s = schmidt_decompose(psi, side).coefficients
    return float(entropy_bits(s**2))


# --- squared EoF as a function of squared concurrence -----------------------


def sef(x: float) -> float:
    """``E_f(C^2 = x)^2`` for two qubits."""
    if not -1e-12 <= x <= 1 + 1e-12:
        raise ContractError(f"sef needs x in [0, 1], got {x}")
    return float(_sef(x))


def _sef(x):
    x = np.clip(x, 0.0, 1.0)
    return _h((1 + np.sqrt(1 - x)) / 2) ** 2


def _open_unit(x, name):
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise ContractError(f"{name} needs x in the open interval (0, 1)")
    return x


def sef_d1(x):
    """First derivative of ``sef``, as the product ``T1 * T2 * T3``.

    ``T1 = -1 / (2 sqrt(1-x) ln^2 2)``, ``T2 = ln(sqrt(x) / (1 - sqrt(1-x)))``,
    ``T3 = 2 sqrt(1-x) T2 + ln(x/4)``.
    """
    x = _open_unit(x, "sef_d1")
    s = np.sqrt(1 - x)
    t1 = -1 / (2 * s * LN2**2)
    t2 = np.log((1 + s) / np.sqrt(x))  # 1 - s = x / (1 + s) keeps small x accurate
    t3 = 2 * s * t2 + np.log(x / 4)
    out = t1 * t2 * t3
    return float(out) if out.ndim == 0 else out


def _artanh_minus_id(s):
    """``artanh(s) - s`` without cancellation for small ``s``."""
    s = np.asarray(s, dtype=float)
    small = s < 0.1
    series = sum(s ** (2 * k + 1) / (2 * k + 1) for k in range(1, 12))
    safe = np.where(small, 0.5, s)
    return np.where(small, series, np.arctanh(safe) - safe)


def m_function(x):
    """``sqrt(1-x) ln(x/4) - artanh(sqrt(1-x)) (2x - 2 + x ln(x/4))``.

    Both ends cancel O(1) terms down to something tiny, so each half of the
    interval uses a rearrangement whose terms are all of the size of the result:
    below 1/2 with ``artanh(s) = -L/2 + ln((1+s)/2)``, above with
    ``artanh(s) = s + R(s)``, where ``s = sqrt(1-x)`` and ``L = ln(x/4)``.
    """
    x = _open_unit(x, "m_function")
    s = np.sqrt(1 - x)
    lx = np.log(x / 4)
    d = np.log1p(-x / (2 * (1 + s)))
    low = lx * x * s / (1 + s) + 2 * (1 - x) * d + x * lx * (lx / 2 - d)
    # the high branch is discarded below 1/2; capping s keeps it finite there
    high = s**3 * (lx + 2) - _artanh_minus_id(np.minimum(s, 0.9)) * (x * lx - 2 * (1 - x))
    out = np.where(x < 0.5, low, high)
    return float(out) if out.ndim == 0 else out


def sef_d2(x):
    """Second derivative of ``sef``: ``g(x) * m_function(x)`` with
    ``g(x) = 1 / (4 (1-x)^{3/2} x ln^2 2)``."""
    x = _open_unit(x, "sef_d2")
    g = 1 / (4 * (1 - x) ** 1.5 * x * LN2**2)
    out = g * m_function(x)
    return float(out) if np.ndim(out) == 0 else out


SEF_D2_AT_ONE = (3 - np.log(4)) / (6 * LN2**2)


def sef_d2_small_x(x):
    """Leading small-x behaviour of ``sef_d2``: ``(L^2 + L - 1) / (8 ln^2 2)`` with
    ``L = ln(x/4)``; diverges like ``ln^2 x`` as x -> 0."""
    lx = np.log(np.asarray(x, dtype=float) / 4)
    out = (lx**2 + lx - 1) / (8 * LN2**2)
    return float(out) if np.ndim(out) == 0 else out


# --- tangles ----------------------------------------------------------------


def ckw_residual_pure(psi: PureState, focus: int = 0) -> float:
    """``C^2(focus|rest) - sum_j C^2(focus, j)`` for a multiqubit pure state."""
    t = psi.tensor()[None]
    return float(batch_ckw_residual(t, focus)[0])


def three_tangle_pure(psi: PureState, focus: int = 0) -> float:
    if psi.dims != (2, 2, 2):
        raise ContractError(f"three-tangle needs three qubits, got dims {psi.dims}")
    return ckw_residual_pure(psi, focus)


def cayley_hyperdeterminant(psi: PureState) -> complex:
    """Cayley's hyperdeterminant of a 2x2x2 amplitude tensor; ``4|Det|`` is the three-tangle."""
    if psi.dims != (2, 2, 2):
        raise ContractError(f"hyperdeterminant needs three qubits, got dims {psi.dims}")
    a = psi.tensor()
    return complex(_hyperdet(a))


def _hyperdet(a):
    a000, a001, a010, a011 = a[..., 0, 0, 0], a[..., 0, 0, 1], a[..., 0, 1, 0], a[..., 0, 1, 1]
    a100, a101, a110, a111 = a[..., 1, 0, 0], a[..., 1, 0, 1], a[..., 1, 1, 0], a[..., 1, 1, 1]
    d1 = (a000 * a111) ** 2 + (a001 * a110) ** 2 + (a010 * a101) ** 2 + (a100 * a011) ** 2
    d2 = (
        a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001
    )
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return d1 - 2 * d2 + 4 * d3


# --- batched kernels on stacked qubit tensors ------------------------------


def _n_qubits(t: np.ndarray, batch_ndim: int = 1) -> int:
    return t.ndim - batch_ndim


def _focus_matrix(t: np.ndarray, side: Sequence[int]) -> np.ndarray:
    """Reshape stacked tensors to (batch, d_side, d_rest) matrices."""
    n = _n_qubits(t)
    side = list(side)
    rest = [i for i in range(n) if i not in side]
    perm = [0] + [1 + i for i in side] + [1 + i for i in rest]
    return np.transpose(t, perm).reshape(t.shape[0], 2 ** len(side), -1)


def batch_norms2(t: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(t.reshape(t.shape[0], -1)) ** 2, axis=1)


def batch_entanglement_entropy(t: np.ndarray, side: Sequence[int]) -> np.ndarray:
    """Entanglement entropy across ``side | rest`` for each normalized tensor."""
    m = _focus_matrix(t, side)
    s2 = np.linalg.svd(m, compute_uv=False) ** 2
    return entropy_bits(s2 / np.sum(s2, axis=-1, keepdims=True))


def batch_single_qubit_entropy(t: np.ndarray, focus: int) -> np.ndarray:
    m = _focus_matrix(t, [focus])
    rho = m @ np.conj(np.swapaxes(m, -1, -2))
    tr = np.real(rho[:, 0, 0] + rho[:, 1, 1])
    det = np.real(rho[:, 0, 0] * rho[:, 1, 1]) - np.abs(rho[:, 0, 1]) ** 2
    disc = np.sqrt(np.clip(1 - 4 * det / tr**2, 0.0, 1.0))
    return _h((1 + disc) / 2)


def batch_single_qubit_concurrence2(t: np.ndarray, focus: int) -> np.ndarray:
    """``C^2(focus|rest) = 4 det(rho_focus)`` for normalized pure tensors."""
    m = _focus_matrix(t, [focus])
    rho = m @ np.conj(np.swapaxes(m, -1, -2))
    det = np.real(rho[:, 0, 0] * rho[:, 1, 1]) - np.abs(rho[:, 0, 1]) ** 2
    return np.clip(4 * det, 0.0, 1.0)


def batch_pair_concurrence(t: np.ndarray, i: int, j: int) -> np.ndarray:
    """Concurrence of the two-qubit reduced state on (i, j) of each pure tensor."""
    m = _focus_matrix(t, [i, j])
    return _concurrence_from_vectors(m)


def batch_ckw_residual(t: np.ndarray, focus: int) -> np.ndarray:
    n = _n_qubits(t)
    res = batch_single_qubit_concurrence2(t, focus)
    for j in range(n):
        if j != focus:
            res = res - batch_pair_concurrence(t, focus, j) ** 2
    return res


def batch_tau1(t: np.ndarray, focus: int) -> np.ndarray:
    """``E_f^2(focus|rest) - sum_j E_f^2(focus, j)`` for each normalized pure tensor."""
    n = _n_qubits(t)
    res = batch_single_qubit_entropy(t, focus) ** 2
    for j in range(n):
        if j != focus:
            res = res - _eof_from_c(batch_pair_concurrence(t, focus, j)) ** 2
    return res


def batch_three_tangle(t: np.ndarray) -> np.ndarray:
    return np.clip(4 * np.abs(_hyperdet(t)), 0.0, 1.0)
