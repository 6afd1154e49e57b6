"""Dense complex linear algebra on small multiqubit Hilbert spaces.

States carry an explicit list of subsystem dimensions. Amplitude indexing is
most-significant-first: subsystem 0 is the slowest-varying index, so for
qubits ``|q0 q1 ... q_{n-1}>`` sits at ``int("q0q1...", 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

ATOL = 1e-10
RANK_TOL = 1e-10


class ContractError(ValueError):
    """An input violates the documented preconditions of an operation."""


class UnsupportedRankError(ContractError):
    """The requested route needs a lower-rank input than the one given."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a tensor product of subsystems."""

    vector: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        vec = _freeze(np.ravel(self.vector))
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "dims", dims)
        if any(d < 1 for d in dims):
            raise ContractError(f"subsystem dimensions must be positive, got {dims}")
        if int(np.prod(dims)) != vec.size:
            raise ContractError(f"dims {dims} do not match {vec.size} amplitudes")
        if not np.all(np.isfinite(vec)):
            raise ContractError("amplitudes must be finite")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > ATOL:
            raise ContractError(f"state norm is {norm!r}, expected 1")

    @property
    def n(self) -> int:
        return len(self.dims)

    def dm(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.vector, self.vector.conj()), self.dims)

    def tensor(self) -> np.ndarray:
        return self.vector.reshape(self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix with subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = _freeze(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)
        d = int(np.prod(dims))
        if mat.shape != (d, d):
            raise ContractError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not np.all(np.isfinite(mat)):
            raise ContractError("entries must be finite")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > ATOL:
            raise ContractError("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > ATOL:
            raise ContractError(f"trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(mat)[0] < -ATOL:
            raise ContractError("density matrix has a negative eigenvalue")

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigvals(self) -> np.ndarray:
        """Eigenvalues in descending order, clamped at zero."""
        w = np.linalg.eigvalsh(self.matrix)[::-1]
        return np.where(w < ATOL, 0.0, w)

    def rank(self, tol: float = RANK_TOL) -> int:
        return int(np.count_nonzero(self.eigvals() > tol))


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    return state.dm() if isinstance(state, PureState) else state


def hermitian_eigendecompose(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvector columns of a Hermitian matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > ATOL:
        raise ContractError("matrix is not Hermitian")
    w, v = np.linalg.eigh(m)
    return w[::-1], v[:, ::-1]


def _check_subset(keep: Sequence[int], n: int) -> list[int]:
    keep = [int(k) for k in keep]
    if not keep:
        raise ContractError("subsystem set must be nonempty")
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise ContractError(f"invalid subsystem indices {keep} for {n} subsystems")
    return keep


def partial_trace(state: PureState | DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the subsystems in ``keep``.

    The kept subsystems appear in the order given, so ``keep=[2, 0]`` also
    permutes the result.
    """
    keep = _check_subset(keep, state.n)
    dims = state.dims
    rest = [i for i in range(state.n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    if isinstance(state, PureState):
        m = np.transpose(state.tensor(), keep + rest).reshape(dk, -1)
        rho = m @ m.conj().T
    else:
        n = state.n
        t = state.matrix.reshape(dims + dims)
        perm = keep + rest + [n + i for i in keep] + [n + i for i in rest]
        dr = state.dim // dk
        t = np.transpose(t, perm).reshape(dk, dr, dk, dr)
        rho = np.einsum("arbr->ab", t)
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real, tuple(dims[i] for i in keep))


def tensor_product(a, b):
    """Kronecker product of two states of the same kind; dims concatenate."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.vector, b.vector), a.dims + b.dims)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), a.dims + b.dims)
    raise ContractError("tensor_product needs two PureStates or two DensityMatrices")


def matrix_sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = hermitian_eigendecompose(m)
    if w[-1] < -1e-8:
        raise ContractError(f"matrix is not PSD (eigenvalue {w[-1]!r})")
    w = np.where(w < ATOL, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def purify(rho: DensityMatrix, tol: float = RANK_TOL) -> PureState:
    """Purification with an ancilla of dimension rank(rho) appended last.

    ``|psi> = sum_k sqrt(l_k) |e_k> |k>`` over eigenpairs above ``tol``.
    """
    w, v = hermitian_eigendecompose(rho.matrix)
    keep = w > tol
    w, v = w[keep], v[:, keep]
    vec = (v * np.sqrt(w)).reshape(-1)
    return PureState(vec / np.linalg.norm(vec), rho.dims + (len(w),))


@dataclass(frozen=True)
class SchmidtResult:
    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray


def schmidt_decompose(psi: PureState, side: Sequence[int], tol: float = 1e-14) -> SchmidtResult:
    """Schmidt form of ``psi`` across ``side | complement``.

    Columns of ``left``/``right`` are the Schmidt vectors; only coefficients
    above ``tol`` are returned.
    """
    side = _check_subset(side, psi.n)
    rest = [i for i in range(psi.n) if i not in side]
    if not rest:
        raise ContractError("bipartition needs a nonempty complement")
    da = int(np.prod([psi.dims[i] for i in side]))
    m = np.transpose(psi.tensor(), side + rest).reshape(da, -1)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    k = s > tol
    return SchmidtResult(s[k], u[:, k], vh[k].T)
