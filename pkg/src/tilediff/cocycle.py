"""Internal Fourier matrix, its cocycle product, and window transforms.

For a model with displacement matrix T and internal contraction A, the
Fourier matrix is ``B(k)_ij = sum_{t in T_ij} exp(2 pi i <t*, k>)`` with
t* the starred translations.  The normalized product

    C_n(k) = pf^-n  B(k) B(A^T k) ... B((A^T)^(n-1) k)

converges exponentially fast to a rank-one matrix |c(k)><u| whose column
factor is proportional to the vector of window Fourier transforms.  The
per-tile amplitudes are normalized so that H_i(0) equals density times
the tile frequency, which makes the central equal-weight intensity equal
the squared point density.

Evaluators are immutable; amplitude evaluation at distinct arguments is
pure and batches over many arguments at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ModelSpec

__all__ = ["FourierEvaluator", "AmplitudeVector", "fourier_matrix",
           "cocycle_limit", "amplitudes"]

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AmplitudeVector:
    """Per-tile-type amplitudes at one internal argument."""

    H: np.ndarray
    n_iters: int
    rank1_residual: float

    def total(self, weights=None) -> complex:
        if weights is None:
            return complex(self.H.sum())
        return complex(np.dot(np.asarray(weights, dtype=complex), self.H))


class FourierEvaluator:
    """Precomputed starred-translation data for one model."""

    def __init__(self, model: ModelSpec):
        disp = model.require_displacement()
        self.model = model
        self.n = disp.n
        self.d = model.dim
        self.pf = float(model.pf_eigenvalue.embed_phys()[0])
        self.contraction = model.int_contraction_matrix

        t_star, cells = [], []
        for i, j, t in disp.iter_translations():
            t_star.append(t.embed_int())
            cells.append(i * self.n + j)
        self.t_star = np.array(t_star)                  # (m, d)
        # dense scatter matrix: column c sums the translations of cell c
        scatter = np.zeros((len(cells), self.n * self.n))
        for row, c in enumerate(cells):
            scatter[row, c] = 1.0
        self._scatter = scatter

        self.M = disp.card_matrix()
        lam, vecs = np.linalg.eig(self.M.astype(float))
        idx = int(np.argmax(lam.real))
        v = np.real(vecs[:, idx])
        v = v / v.sum()
        lamT, vecsT = np.linalg.eig(self.M.T.astype(float))
        idxT = int(np.argmax(lamT.real))
        u = np.real(vecsT[:, idxT])
        u = u / float(u @ v)
        self.right = v
        self.left = u
        self._c0_cache: dict[int, np.ndarray] = {}

    # -- Fourier matrix ---------------------------------------------------------

    def fourier_matrix_batch(self, K: np.ndarray) -> np.ndarray:
        """B(k) for a batch of internal arguments, shape (nk, n, n)."""
        K = np.atleast_2d(np.asarray(K, dtype=float))
        phases = K @ self.t_star.T                       # (nk, m)
        E = np.exp((_TWO_PI * 1j) * phases)
        return (E @ self._scatter).reshape(-1, self.n, self.n)

    def fourier_matrix(self, k_int) -> np.ndarray:
        return self.fourier_matrix_batch(np.atleast_1d(k_int))[0]

    # -- cocycle ----------------------------------------------------------------

    def cocycle_limit_batch(self, K: np.ndarray, n: int) -> np.ndarray:
        """pf^-n B(k) B(A^T k) ... B((A^T)^(n-1) k), batched over rows of K."""
        if n < 1:
            raise ValueError("need at least one cocycle factor")
        K = np.atleast_2d(np.asarray(K, dtype=float))
        inv = 1.0 / self.pf
        args = K
        P = self.fourier_matrix_batch(args) * inv
        for _ in range(n - 1):
            args = args @ self.contraction               # k -> A^T k, row form
            P = P @ (self.fourier_matrix_batch(args) * inv)
        return P

    def cocycle_limit(self, k_int, n: int) -> np.ndarray:
        return self.cocycle_limit_batch(np.atleast_1d(k_int), n)[0]

    # -- amplitudes ---------------------------------------------------------------

    def _c_from_product(self, P: np.ndarray) -> np.ndarray:
        # rank-one column factor: C x / <u|x> with x the right PF vector
        return (P @ self.right) / float(self.left @ self.right)

    def _c0(self, n: int) -> np.ndarray:
        c0 = self._c0_cache.get(n)
        if c0 is None:
            zero = np.zeros((1, self.d))
            c0 = self._c_from_product(self.cocycle_limit_batch(zero, n)[0])
            self._c0_cache[n] = c0
        return c0

    def amplitude_batch(self, K: np.ndarray, n: int | None = None) -> np.ndarray:
        """H_i(k) for a batch of internal arguments, shape (nk, n_tiles)."""
        if n is None:
            n = self.model.default_iters
        P = self.cocycle_limit_batch(K, n)
        c = np.einsum("kij,j->ki", P, self.right) / float(self.left @ self.right)
        norm = self.model.density / complex(self._c0(n).sum())
        return c * norm

    def amplitudes(self, k_int, n: int | None = None) -> AmplitudeVector:
        """Amplitudes with the rank-one convergence diagnostic."""
        if n is None:
            n = self.model.default_iters
        P = self.cocycle_limit_batch(np.atleast_1d(k_int), n)[0]
        c = self._c_from_product(P)
        norm = self.model.density / complex(self._c0(n).sum())
        sv = np.linalg.svd(P, compute_uv=False)
        residual = float(sv[1] / sv[0]) if sv[0] > 0 else 0.0
        return AmplitudeVector(H=c * norm, n_iters=n, rank1_residual=residual)


# -- functional wrappers matching the operation names -----------------------

def fourier_matrix(ev: FourierEvaluator, k_int) -> np.ndarray:
    return ev.fourier_matrix(k_int)


def cocycle_limit(ev: FourierEvaluator, k_int, n: int) -> np.ndarray:
    return ev.cocycle_limit(k_int, n)


def amplitudes(ev: FourierEvaluator, k_int, n: int | None = None) -> AmplitudeVector:
    return ev.amplitudes(k_int, n)
