"""Dense complex Hermitian linear algebra.

The eigensolver reduces the matrix to real tridiagonal form with Householder
reflections and finishes with implicit-shift QL. The two kernels run from the
compiled extension when it is importable and from numpy code otherwise; see
:data:`BACKEND`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput

if os.environ.get("LARGESPIN_PURE_PYTHON") == "1":
    from . import _kernels_py as _kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _kernels
        BACKEND = "python"

HERMITIAN_RTOL = 1e-12
CLUSTER_RTOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, optional eigenvectors (columns) and degeneracy clusters."""

    values: np.ndarray
    vectors: np.ndarray | None = None
    clusters: tuple[tuple[int, int], ...] = field(default=())

    def __len__(self):
        return len(self.values)

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.clusters]


def as_hermitian(m, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``m`` as a complex square array, raising if it is not Hermitian."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    scale = float(np.max(np.abs(a)))
    asym = float(np.max(np.abs(a - a.conj().T)))
    if asym > rtol * scale:
        raise NonHermitianInput(asym, scale)
    return a


def cluster_levels(values, rtol: float = CLUSTER_RTOL) -> tuple[tuple[int, int], ...]:
    """Group sorted eigenvalues whose adjacent gaps are below ``rtol`` times the spread."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n == 0:
        return ()
    tol = rtol * (values[-1] - values[0] + 1e-300)
    clusters = []
    start = 0
    for i in range(1, n):
        if values[i] - values[i - 1] >= tol:
            clusters.append((start, i - start))
            start = i
    clusters.append((start, n - start))
    return tuple(clusters)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive
    idx = np.argmax(np.abs(vectors), axis=0)
    piv = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(piv) / piv)[np.newaxis, :]


def hermitian_eig(m, vectors: bool = True, cluster_rtol: float = CLUSTER_RTOL) -> Spectrum:
    """Eigendecomposition of a complex Hermitian matrix.

    Args:
        m: square Hermitian matrix (checked to 1e-12 relative asymmetry).
        vectors: also compute orthonormal eigenvectors.
        cluster_rtol: relative gap below which neighbours form one cluster.

    Returns:
        Spectrum with ascending values.
    """
    a = as_hermitian(m)
    n = a.shape[0]
    if n == 1:
        vals = np.array([a[0, 0].real])
        vecs = np.ones((1, 1), dtype=np.complex128) if vectors else None
        return Spectrum(vals, vecs, ((0, 1),))

    d, e, u = _kernels.householder_tridiag(a, vectors)
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    z = np.eye(n) if vectors else None
    _kernels.tql2(d, e, z)

    order = np.argsort(d, kind="stable")
    vals = d[order]
    vecs = None
    if vectors:
        vecs = _fix_phases(u @ z[:, order])
    return Spectrum(vals, vecs, cluster_levels(vals, cluster_rtol))


def eigvals(m) -> np.ndarray:
    """Ascending eigenvalues only."""
    return hermitian_eig(m, vectors=False).values


def exp_i_hermitian(m, t: float) -> np.ndarray:
    """Unitary ``exp(i t M)`` for Hermitian ``M`` via its eigendecomposition."""
    s = hermitian_eig(m)
    v = s.vectors
    return (v * np.exp(1j * t * s.values)[np.newaxis, :]) @ v.conj().T


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatch(f"cannot commute shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def max_abs(m) -> float:
    """Infinity (max-entry) norm used throughout the tolerances."""
    return float(np.max(np.abs(m)))
