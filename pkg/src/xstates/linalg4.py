"""Numerical kernel for 4x4 complex matrices.

Matrices are plain ``numpy`` arrays of shape ``(..., 4, 4)``; every function
here broadcasts over leading batch axes. The Hermitian eigensolver is a cyclic
complex Jacobi iteration written out explicitly so that it can serve as an
oracle independent of LAPACK.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "TRACE_TOL",
    "PSD_CLAMP",
    "PATTERN_TOL",
    "NotHermitianError",
    "NotPSDError",
    "as_matrix4",
    "mul",
    "adjoint",
    "add",
    "scale",
    "trace",
    "hermitian_deviation",
    "hermitian_eigs",
    "clamp_eigenvalues",
    "psd_sqrt",
    "psd_inv_sqrt",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
# eigenvalues in [-PSD_CLAMP, 0] count as zero everywhere in the package
PSD_CLAMP = 1e-10
PATTERN_TOL = 1e-12

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50

_PAIRS = [(p, q) for p in range(4) for q in range(p + 1, 4)]


class NotHermitianError(ValueError):
    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"matrix is not Hermitian (max |m - m^H| = {self.deviation:.3e})")


class NotPSDError(ValueError):
    def __init__(self, eigenvalue: float):
        self.eigenvalue = float(eigenvalue)
        super().__init__(f"matrix is not positive semidefinite (eigenvalue {self.eigenvalue:.3e})")


def as_matrix4(m) -> np.ndarray:
    """Validate shape ``(..., 4, 4)`` and finiteness; return a complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim < 2 or a.shape[-2:] != (4, 4):
        raise ValueError(f"expected shape (..., 4, 4), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def mul(a, b) -> np.ndarray:
    return np.matmul(a, b)


def adjoint(m) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def add(a, b) -> np.ndarray:
    return np.add(a, b)


def scale(m, c) -> np.ndarray:
    return np.multiply(c, m)


def trace(m):
    return np.trace(m, axis1=-2, axis2=-1)


def hermitian_deviation(m) -> np.ndarray:
    """Max-entry deviation ``|m - m^H|`` per matrix."""
    return np.abs(m - adjoint(m)).max(axis=(-2, -1))


def hermitian_eigs(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvectors of Hermitian matrices.

    Returns ``(w, v)`` with ``m = v @ diag(w) @ v^H``; the columns of ``v``
    are eigenvectors. Works on a single matrix or a stack.
    """
    a = as_matrix4(m)
    dev = float(np.max(hermitian_deviation(a), initial=0.0))
    if dev > tol:
        raise NotHermitianError(dev)
    batch = a.shape[:-2]
    a = 0.5 * (a + adjoint(a))
    a = a.reshape(-1, 4, 4).copy()
    n = a.shape[0]
    v = np.broadcast_to(np.eye(4, dtype=complex), (n, 4, 4)).copy()
    if n == 0:
        return np.zeros(batch + (4,)), v.reshape(batch + (4, 4))

    # off-diagonal threshold scales with the largest entry so big matrices converge
    scale = np.maximum(1.0, np.abs(a).max(axis=(1, 2)))
    thresh = JACOBI_TOL * scale
    offmask = ~np.eye(4, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.abs(a[:, offmask]).max(axis=1)
        if np.all(off < thresh):
            break
        for p, q in _PAIRS:
            _rotate(a, v, p, q, scale)

    w = a[:, np.arange(4), np.arange(4)].real
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(batch + (4,)), v.reshape(batch + (4, 4))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, scale: np.ndarray) -> None:
    """One complex Jacobi rotation annihilating a[:, p, q], in place."""
    apq = a[:, p, q]
    mag = np.abs(apq)
    # pivots this small perturb eigenvalues by ~mag**2; skip them
    active = mag > 1e-30 * scale
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    app = a[:, p, p].real
    aqq = a[:, q, q].real
    theta = (aqq - app) / (2.0 * safe)
    t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    # U = diag-phase on q followed by a real plane rotation
    u = np.zeros_like(a)
    u[:, np.arange(4), np.arange(4)] = 1.0
    u[:, p, p] = c
    u[:, p, q] = s
    u[:, q, p] = -s * np.conj(phase)
    u[:, q, q] = c * np.conj(phase)

    a[:] = adjoint(u) @ a @ u
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    v[:] = v @ u


def clamp_eigenvalues(w) -> np.ndarray:
    """Zero eigenvalues in ``[-PSD_CLAMP, 0]``; raise on anything more negative."""
    w = np.asarray(w, dtype=float)
    lo = float(np.min(w, initial=0.0))
    if lo < -PSD_CLAMP:
        raise NotPSDError(lo)
    return np.maximum(w, 0.0)


def psd_sqrt(m) -> np.ndarray:
    """Hermitian PSD square root via the Jacobi eigendecomposition."""
    w, v = hermitian_eigs(m)
    w = clamp_eigenvalues(w)
    r = (v * np.sqrt(w)[..., None, :]) @ adjoint(v)
    return 0.5 * (r + adjoint(r))


def psd_inv_sqrt(m) -> np.ndarray:
    """Inverse square root of a positive definite Hermitian matrix."""
    w, v = hermitian_eigs(m)
    lo = float(np.min(w, initial=1.0))
    if lo <= PSD_CLAMP:
        raise NotPSDError(lo)
    r = (v / np.sqrt(w)[..., None, :]) @ adjoint(v)
    return 0.5 * (r + adjoint(r))
