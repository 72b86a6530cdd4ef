"""Small dense complex linear algebra used throughout the package.

Operators are plain ``numpy`` arrays of dtype ``complex128``.  Everything here
is aimed at Hilbert spaces of dimension at most :data:`MAX_DIM`, where
accuracy matters far more than speed.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 1024

EPS_HERM = 1e-9
EPS_PSD = 1e-9
EPS_TRACE = 1e-9
EPS_EIG = 1e-10
EPS_ORTH = 1e-10


class LinalgError(ValueError):
    """Raised when an operator violates a structural precondition."""


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-d complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise LinalgError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinalgError("matrix has non-finite entries")
    return m


def tensor_product(a, b, *more, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product of two or more matrices.

    Raises :class:`LinalgError` when the result would exceed ``max_dim`` in
    either dimension.
    """
    out = as_matrix(a)
    for m in (b, *more):
        m = as_matrix(m)
        rows = out.shape[0] * m.shape[0]
        cols = out.shape[1] * m.shape[1]
        if max(rows, cols) > max_dim:
            raise LinalgError(f"tensor product of size {rows}x{cols} exceeds the limit {max_dim}")
        out = np.kron(out, m)
    return out


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    rho : array_like
        Square operator on the tensor product space with factor dimensions ``dims``.
    dims : sequence of int
        Subsystem dimensions, first factor most significant.
    keep : iterable of int
        Indices of subsystems to retain.  The result is ordered by increasing index.

    Returns
    -------
    numpy.ndarray
        Reduced operator on the kept subsystems.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims):
        raise LinalgError(f"subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise LinalgError(f"operator shape {rho.shape} does not match dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise LinalgError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise LinalgError(f"keep indices {keep} out of range for {len(dims)} subsystems")

    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # move kept (row, col) axes to the front, traced ones to the back
    perm = keep + [n + k for k in keep] + traced + [n + i for i in traced]
    t = t.transpose(perm)
    dk = int(np.prod([dims[k] for k in keep]))
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    t = t.reshape(dk, dk, dt, dt)
    return np.trace(t, axis1=2, axis2=3)


def check_hermitian(h, tol: float = EPS_HERM) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise LinalgError(f"matrix is not square: {h.shape}")
    dev = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if dev > tol:
        raise LinalgError(f"matrix is not Hermitian (max deviation {dev:.3e} > {tol:.1e})")
    return h


def hermitian_eigensystem(h, tol: float = EPS_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.

    The columns of the returned vector matrix are the eigenvectors, in the same
    order as the eigenvalues.
    """
    h = check_hermitian(h, tol)
    h = 0.5 * (h + h.conj().T)
    vals, vecs = np.linalg.eigh(h)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def hermitian_sqrt(h, tol: float = EPS_PSD) -> np.ndarray:
    """Positive semidefinite square root of a PSD matrix."""
    vals, vecs = hermitian_eigensystem(h)
    if vals.size and vals[-1] < -tol:
        raise LinalgError(f"matrix has a negative eigenvalue {vals[-1]:.3e}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * root) @ vecs.conj().T


def density_spectrum(rho, tol: float = EPS_PSD) -> np.ndarray:
    """Validated spectrum of a density operator, clipped to [0, 1] and renormalized.

    Sorted descending.  Raises :class:`LinalgError` if ``rho`` is not Hermitian,
    has an eigenvalue below ``-tol``, or its trace is off by more than
    :data:`EPS_TRACE`.
    """
    vals, _ = hermitian_eigensystem(rho)
    return normalize_spectrum(vals, tol)


def normalize_spectrum(vals, tol: float = EPS_PSD) -> np.ndarray:
    vals = np.sort(np.asarray(vals, dtype=float))[::-1]
    if vals.size == 0:
        raise LinalgError("empty spectrum")
    if not np.all(np.isfinite(vals)):
        raise LinalgError("spectrum has non-finite values")
    if vals[-1] < -tol:
        raise LinalgError(f"spectrum has a negative value {vals[-1]:.3e}")
    total = vals.sum()
    if abs(total - 1.0) > EPS_TRACE:
        raise LinalgError(f"spectrum sums to {total!r}, not 1")
    vals = np.clip(vals, 0.0, 1.0)
    return vals / vals.sum()
