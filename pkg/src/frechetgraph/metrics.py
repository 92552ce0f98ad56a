"""Hamming distance, adjacency spectra and the spectral pseudometric."""

from __future__ import annotations

from math import sqrt

import numpy as np

from .graph import DimensionError, Graph

MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12


class EigenError(ArithmeticError):
    pass


class NotSymmetricError(EigenError, ValueError):
    pass


class EigenConvergenceError(EigenError):
    def __init__(self, residual: float, sweeps: int) -> None:
        super().__init__(f"Jacobi did not converge in {sweeps} sweeps (off-diagonal norm {residual:.3e})")
        self.residual = residual
        self.sweeps = sweeps


class Spectrum:
    """Eigenvalues sorted in descending order."""

    __slots__ = ("values",)

    def __init__(self, values) -> None:
        v = np.sort(np.asarray(values, dtype=float))[::-1].copy()
        v.setflags(write=False)
        self.values = v

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, i):
        return self.values[i]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __repr__(self) -> str:
        return f"Spectrum({np.array2string(self.values, precision=6)})"


def _check_same_n(a: Graph, b: Graph) -> None:
    if a.n != b.n:
        raise DimensionError(f"graphs have different vertex counts ({a.n} vs {b.n})")


def hamming_distance(a: Graph, b: Graph) -> int:
    _check_same_n(a, b)
    return (a.bits ^ b.bits).bit_count()


def _off_norm(a: np.ndarray) -> float:
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.dot(off, off)))


def symmetric_eigenvalues(m, *, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``1e-12 * n * max(1, ||m||_F)``.

    Raises
    ------
    NotSymmetricError
        If ``m`` is not square or deviates from symmetry by more than 1e-12.
    EigenConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n and np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
        raise NotSymmetricError("matrix is not symmetric")
    a = (a + a.T) / 2
    if n <= 1:
        return Spectrum(np.diag(a))

    tol = 1e-12 * n * max(1.0, float(np.linalg.norm(a)))
    off = _off_norm(a)
    sweeps = 0
    while off >= tol:
        if sweeps == max_sweeps:
            raise EigenConvergenceError(off, sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / abs(theta)
                else:
                    t = 1.0 / (abs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) plane rotation
                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
        sweeps += 1
        off = _off_norm(a)
    return Spectrum(np.diag(a))


def adjacency_spectrum(g: Graph) -> Spectrum:
    return symmetric_eigenvalues(g.to_dense())


def spectral_distance(a: Graph, b: Graph) -> float:
    _check_same_n(a, b)
    return spectrum_distance(adjacency_spectrum(a), adjacency_spectrum(b))


def spectrum_distance(x: Spectrum, y: Spectrum) -> float:
    if len(x) != len(y):
        raise DimensionError(f"spectra have different lengths ({len(x)} vs {len(y)})")
    return float(np.linalg.norm(x.values - y.values))


def edges_from_spectrum(s: Spectrum) -> float:
    """Edge count recovered from the adjacency spectrum, ``||s||^2 / 2``."""
    return float(np.dot(s.values, s.values)) / 2.0


def symmetric_eigenvalues_batch(stack, *, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Cyclic Jacobi applied to a ``(B, n, n)`` stack of symmetric matrices at once.

    Returns a ``(B, n)`` array of descending eigenvalues. Same tolerances and
    errors as :func:`symmetric_eigenvalues`, with the residual reported for the
    worst matrix.
    """
    a = np.array(stack, dtype=float, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise NotSymmetricError(f"expected a (B, n, n) stack, got shape {a.shape}")
    B, n, _ = a.shape
    if B and n and np.max(np.abs(a - a.transpose(0, 2, 1))) > SYMMETRY_TOL:
        raise NotSymmetricError("stack contains a non-symmetric matrix")
    a = (a + a.transpose(0, 2, 1)) / 2
    if B == 0 or n <= 1:
        return -np.sort(-np.diagonal(a, axis1=1, axis2=2), axis=1)

    offmask = ~np.eye(n, dtype=bool)
    tol = 1e-12 * n * np.maximum(1.0, np.linalg.norm(a, axis=(1, 2)))

    def off_norms() -> np.ndarray:
        off = a[:, offmask]
        return np.sqrt(np.einsum("bk,bk->b", off, off))

    off = off_norms()
    sweeps = 0
    while np.any(off >= tol):
        if sweeps == max_sweeps:
            raise EigenConvergenceError(float(np.max(off)), sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                active = apq != 0.0
                if not active.any():
                    continue
                safe = np.where(active, apq, 1.0)
                with np.errstate(divide="ignore", over="ignore"):
                    theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                    big = np.abs(theta) > 1e150
                    th = np.where(big, 0.0, theta)
                    t = np.where(big, 0.5 / np.abs(theta), 1.0 / (np.abs(th) + np.sqrt(th * th + 1.0)))
                t = np.where(theta < 0.0, -t, t)
                t = np.where(active, t, 0.0)
                c = (1.0 / np.sqrt(t * t + 1.0))[:, None]
                s = t[:, None] * c
                cp = a[:, :, p].copy()
                cq = a[:, :, q].copy()
                a[:, :, p] = c * cp - s * cq
                a[:, :, q] = s * cp + c * cq
                rp = a[:, p, :].copy()
                rq = a[:, q, :].copy()
                a[:, p, :] = c * rp - s * rq
                a[:, q, :] = s * rp + c * rq
                a[active, p, q] = 0.0
                a[active, q, p] = 0.0
        sweeps += 1
        off = off_norms()
    return -np.sort(-np.diagonal(a, axis1=1, axis2=2), axis=1)
