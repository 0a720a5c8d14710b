"""Finite control-point patches from the inflation fixed-point equations.

Patches are exact: positions stay field elements through every inflation
step, so membership in the return module and point counts are integer
identities.  Patches serve as brute-force oracles for the amplitude
computations (via Weyl sums) and can be exported as CSV.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraicElement
from .models import ModelSpec

__all__ = ["TypedPointSet", "seed_patch", "inflate", "truncate",
           "substitution_matrix", "pf_data", "patch_to_csv"]


@dataclass(frozen=True)
class TypedPointSet:
    """Ordered list of (tile_type, exact position) pairs, no duplicates."""

    points: tuple

    def __len__(self):
        return len(self.points)

    def positions_phys(self) -> np.ndarray:
        """Float physical coordinates, shape (npoints, dim)."""
        if not self.points:
            return np.zeros((0, 1))
        return np.array([x.embed_phys() for _, x in self.points])

    def types(self) -> np.ndarray:
        return np.array([t for t, _ in self.points], dtype=np.int64)

    def translated(self, t: AlgebraicElement) -> "TypedPointSet":
        return TypedPointSet(tuple((ty, x + t) for ty, x in self.points))


def seed_patch(model: ModelSpec, tile_type: int = 0) -> TypedPointSet:
    """Single tile of the given type at the origin.

    Legality of the seed is not enforced; patches are only used as
    volume-averaged oracles where the boundary mismatch of an illegal
    seed is absorbed by the tolerance.
    """
    return TypedPointSet(((tile_type, model.field.zero()),))


def inflate(seed: TypedPointSet, model: ModelSpec, steps: int) -> TypedPointSet:
    """Apply x -> expansion(x) + t for every displacement entry, `steps` times."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    disp = model.require_displacement()
    pts = list(seed.points)
    for _ in range(steps):
        nxt = {}
        for ty, x in pts:
            base = model.apply_expansion(x)
            for i in range(disp.n):
                for t in disp.entries[i][ty]:
                    key = (i, (base + t).coords)
                    if key not in nxt:
                        nxt[key] = (i, base + t)
        pts = sorted(nxt.values(), key=lambda p: (p[1].coords, p[0]))
    return TypedPointSet(tuple(pts))


def truncate(patch: TypedPointSet, radius: float, center=None) -> TypedPointSet:
    """Keep points with |phys(x) - center| <= radius."""
    if not patch.points:
        return patch
    pos = patch.positions_phys()
    c = np.zeros(pos.shape[1]) if center is None else np.atleast_1d(center)
    keep = np.linalg.norm(pos - c, axis=1) <= radius + 1e-12
    return TypedPointSet(tuple(p for p, k in zip(patch.points, keep) if k))


def substitution_matrix(model: ModelSpec) -> np.ndarray:
    """Exact cardinality matrix of the displacement entries."""
    return model.require_displacement().card_matrix()


def pf_data(M: np.ndarray, inv_density: float | None = None):
    """Perron-Frobenius eigenvalue and eigenvectors of a primitive matrix.

    The right eigenvector is frequency-normalized (entries sum to 1).
    The left eigenvector is scaled so that <u|v> equals ``inv_density``
    when given (the reciprocal model density), else so that <u|v> = 1.
    """
    M = np.asarray(M)
    _check_primitive(M)
    lam, vecs = np.linalg.eig(M.astype(float))
    idx = int(np.argmax(lam.real))
    if abs(lam[idx].imag) > 1e-9:
        raise ValueError("leading eigenvalue is not real")
    v = np.real(vecs[:, idx])
    v = v / v.sum()
    lamT, vecsT = np.linalg.eig(M.T.astype(float))
    idxT = int(np.argmax(lamT.real))
    u = np.real(vecsT[:, idxT])
    scale = (inv_density if inv_density is not None else 1.0) / float(u @ v)
    return float(lam[idx].real), u * scale, v


def _check_primitive(M: np.ndarray) -> None:
    if np.any(M < 0):
        raise ValueError("matrix has negative entries")
    n = M.shape[0]
    acc = M.astype(object)
    A = M.astype(object)
    for _ in range(2 * n):
        if all(x > 0 for x in np.ravel(acc)):
            return
        acc = acc @ A
    raise ValueError("matrix is not primitive")


def patch_to_csv(patch: TypedPointSet, path, model: ModelSpec | None = None) -> None:
    """Write (type, x, y) rows; y is 0 for one-dimensional models."""
    labels = model.tile_labels if model is not None else None
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("type,x,y\n")
        for ty, x in patch.points:
            v = x.embed_phys()
            y = v[1] if v.shape == (2,) else 0.0
            name = labels[ty] if labels else str(ty)
            fh.write(f"{name},{format(v[0], '.17g')},{format(y, '.17g')}\n")
