"""Independent reference implementations used as test oracles.

Deliberately naive: explicit index loops, textbook formulas, scipy routines.
"""

import itertools

import numpy as np
from scipy.linalg import sqrtm
from scipy.stats import entropy as _scipy_entropy

SY = np.array([[0, -1j], [1j, 0]])


def ptrace_loops(rho: np.ndarray, dims, keep):
    """Partial trace by summing matrix elements over traced-out indices."""
    keep = list(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    kdims = [dims[i] for i in keep]
    out = np.zeros((int(np.prod(kdims)),) * 2, dtype=complex)
    strides = [int(np.prod(dims[i + 1:])) for i in range(len(dims))]

    def flat(idx):
        return sum(i * s for i, s in zip(idx, strides))

    for a in itertools.product(*[range(d) for d in kdims]):
        for b in itertools.product(*[range(d) for d in kdims]):
            acc = 0
            for t in itertools.product(*[range(dims[i]) for i in traced]):
                ia = [0] * len(dims)
                ib = [0] * len(dims)
                for pos, i in enumerate(keep):
                    ia[i], ib[i] = a[pos], b[pos]
                for pos, i in enumerate(traced):
                    ia[i] = ib[i] = t[pos]
                acc += rho[flat(ia), flat(ib)]
            ra = sum(x * int(np.prod(kdims[p + 1:])) for p, x in enumerate(a))
            rb = sum(x * int(np.prod(kdims[p + 1:])) for p, x in enumerate(b))
            out[ra, rb] = acc
    return out


def wootters_concurrence(rho: np.ndarray) -> float:
    """Textbook form: eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho))."""
    yy = np.kron(SY, SY)
    rt = yy @ rho.conj() @ yy
    s = sqrtm(rho)
    lam = np.sort(np.real(np.linalg.eigvals(sqrtm(s @ rt @ s))))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def h2(x: float) -> float:
    return float(_scipy_entropy([x, 1 - x], base=2)) if 0 < x < 1 else 0.0


def eof_from_c(c: float) -> float:
    return h2((1 + np.sqrt(max(0.0, 1 - c * c))) / 2)


def vn_entropy(rho: np.ndarray) -> float:
    lam = np.clip(np.linalg.eigvalsh(rho), 0, None)
    return float(_scipy_entropy(lam, base=2))


def ghz_w_phase_closed_form(p: float, p0: float, s_p: float, s_w: float) -> float:
    return p / p0 * s_p + (1 - p / p0) * s_w
