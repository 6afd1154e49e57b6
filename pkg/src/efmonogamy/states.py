"""Named states, seeded random states and the plain-text state file format."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import ATOL, ContractError, DensityMatrix, PureState, partial_trace


def basis_state(bits: str) -> PureState:
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return PureState(vec, (2,) * len(bits))


def ghz3() -> PureState:
    vec = np.zeros(8, dtype=complex)
    vec[0] = vec[7] = 1 / np.sqrt(2)
    return PureState(vec, (2, 2, 2))


def w_n(n: int) -> PureState:
    """``(|10..0> + |01..0> + ... + |00..1>) / sqrt(n)``."""
    if not 2 <= n <= 12:
        raise ContractError(f"N must be in [2, 12], got {n}")
    vec = np.zeros(2**n, dtype=complex)
    vec[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return PureState(vec, (2,) * n)


def w3() -> PureState:
    return w_n(3)


def ones_n(n: int) -> PureState:
    if not 2 <= n <= 12:
        raise ContractError(f"N must be in [2, 12], got {n}")
    return basis_state("1" * n)


def bell() -> PureState:
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


def projector(psi: PureState) -> np.ndarray:
    return np.outer(psi.vector, psi.vector.conj())


def ghzw_mixture(p: float) -> DensityMatrix:
    """``p |GHZ3><GHZ3| + (1-p) |W3><W3|``."""
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"p must lie in [0, 1], got {p}")
    return DensityMatrix(p * projector(ghz3()) + (1 - p) * projector(w3()), (2, 2, 2))


def psi_j_p(j: int, p: float) -> PureState:
    """``sqrt(p)|GHZ3> - exp(2 pi i j / 3) sqrt(1-p)|W3>``."""
    if j not in (0, 1, 2):
        raise ContractError(f"j must be 0, 1 or 2, got {j}")
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"p must lie in [0, 1], got {p}")
    phase = np.exp(2j * np.pi * j / 3)
    vec = np.sqrt(p) * ghz3().vector - phase * np.sqrt(1 - p) * w3().vector
    return PureState(vec, (2, 2, 2))


def wn_ones_mixture(n: int) -> DensityMatrix:
    """``a |1^N><1^N| + (1-a) |W_N><W_N|`` with ``a = 1/(N+1)``."""
    if not 3 <= n <= 12:
        raise ContractError(f"N must be in [3, 12], got {n}")
    a = 1 / (n + 1)
    return DensityMatrix(a * projector(ones_n(n)) + (1 - a) * projector(w_n(n)), (2,) * n)


@dataclass(frozen=True)
class AcinParams:
    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.shape != (5,) or np.any(lam < 0) or np.any(lam > 1):
            raise ContractError("need five coefficients in [0, 1]")
        if abs(np.sum(lam**2) - 1) > ATOL:
            raise ContractError("squared coefficients must sum to 1")
        if not 0.0 <= self.phi <= np.pi:
            raise ContractError("phase must lie in [0, pi]")


def acin_standard(params: AcinParams) -> PureState:
    """Local-unitary standard form of a three-qubit pure state.

    ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``
    """
    l0, l1, l2, l3, l4 = params.lambdas
    vec = np.zeros(8, dtype=complex)
    vec[0b000] = l0
    vec[0b100] = l1 * np.exp(1j * params.phi)
    vec[0b101] = l2
    vec[0b110] = l3
    vec[0b111] = l4
    return PureState(vec, (2, 2, 2))


def cavity_amplitudes(kt: float) -> tuple[float, float]:
    """Decay amplitudes ``(xi, chi)`` of one cavity-reservoir pair at time ``kappa*t``."""
    if kt < 0:
        raise ContractError(f"kappa*t must be nonnegative, got {kt}")
    xi = np.exp(-kt / 2)
    chi = np.sqrt(-np.expm1(-kt))
    return float(xi), float(chi)


def cavity_output(alpha: float, kt: float) -> PureState:
    """Cavity-reservoir state ``alpha|0000> + beta|phi_t>|phi_t>``.

    Qubit order is (c1, r1, c2, r2) and ``|phi_t> = xi|10> + chi|01>`` on
    each (cavity, reservoir) pair.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ContractError(f"alpha must lie in [0, 1], got {alpha}")
    xi, chi = cavity_amplitudes(kt)
    beta = np.sqrt(1 - alpha**2)
    phi = np.array([0, chi, xi, 0], dtype=complex)
    vec = beta * np.kron(phi, phi)
    vec[0] += alpha
    return PureState(vec / np.linalg.norm(vec), (2, 2, 2, 2))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_pure(dims: Sequence[int], seed) -> PureState:
    """Haar-distributed pure state from a normalized complex Gaussian vector."""
    rng = _rng(seed)
    d = int(np.prod(dims))
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z), tuple(dims))


def random_mixed(dims: Sequence[int], rank: int, seed) -> DensityMatrix:
    """Mixed state of rank at most ``rank``: a Haar state on system x ancilla, ancilla traced out."""
    d = int(np.prod(dims))
    if not 1 <= rank <= d:
        raise ContractError(f"rank must be in [1, {d}], got {rank}")
    dims = tuple(dims)
    if rank == 1:
        return haar_random_pure(dims, seed).dm()
    psi = haar_random_pure(dims + (rank,), seed)
    return partial_trace(psi, list(range(len(dims))))


def sample_seed(master: int, index: int) -> np.random.SeedSequence:
    """Independent per-sample stream derived from a master seed and an index."""
    return np.random.SeedSequence([int(master) & (2**64 - 1), int(index)])


# --- state files -----------------------------------------------------------


class StateFileError(ContractError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def format_state(state: PureState | DensityMatrix) -> str:
    lines = ["dims " + " ".join(str(d) for d in state.dims)]
    if isinstance(state, DensityMatrix):
        lines.append(f"rows {state.dim}")
        entries = state.matrix.reshape(-1)
    else:
        entries = state.vector
    lines += [f"{z.real:.17g} {z.imag:.17g}" for z in entries]
    return "\n".join(lines) + "\n"


def write_state(path: str | os.PathLike, state: PureState | DensityMatrix) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_state(state))


def parse_state(text: str) -> PureState | DensityMatrix:
    rows = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    rows = [(i, toks) for i, toks in rows if toks]
    if not rows:
        raise StateFileError("empty state file")
    lineno, head = rows[0]
    if head[0] != "dims" or len(head) < 2:
        raise StateFileError("expected 'dims d1 d2 ...'", lineno)
    try:
        dims = tuple(int(t) for t in head[1:])
    except ValueError:
        raise StateFileError("dimensions must be integers", lineno) from None
    body = rows[1:]
    is_dm = bool(body) and body[0][1][0] == "rows"
    n_rows = None
    if is_dm:
        lineno, toks = body[0]
        if len(toks) != 2:
            raise StateFileError("expected 'rows n'", lineno)
        try:
            n_rows = int(toks[1])
        except ValueError:
            raise StateFileError("row count must be an integer", lineno) from None
        body = body[1:]
    values = []
    for lineno, toks in body:
        if len(toks) != 2:
            raise StateFileError("expected 're im'", lineno)
        try:
            values.append(complex(float(toks[0]), float(toks[1])))
        except ValueError:
            raise StateFileError(f"cannot parse number in {' '.join(toks)!r}", lineno) from None
    arr = np.array(values, dtype=complex)
    try:
        if is_dm:
            if arr.size != n_rows * n_rows:
                raise StateFileError(f"expected {n_rows * n_rows} entries, found {arr.size}")
            return DensityMatrix(arr.reshape(n_rows, n_rows), dims)
        return PureState(arr, dims)
    except StateFileError:
        raise
    except ContractError as exc:
        raise StateFileError(str(exc)) from None


def read_state(path: str | os.PathLike) -> PureState | DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_state(fh.read())
