"""Normalized Laplacians and a certified dense symmetric eigensolver.

This is where exact integer distances become floats. The eigensolver is a
cyclic Jacobi iteration: slower than LAPACK but self-contained, exactly
symmetric, deterministic, and able to certify its own residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import BoundCheck
from .constants import GAP_FLOOR
from .graphs import DistanceMatrix, Graph, transmission

_MAX_SWEEPS = 100


class JacobiConvergenceError(RuntimeError):
    def __init__(self, off_norm: float, reason: str | None = None):
        self.off_norm = off_norm
        if reason is None:
            reason = (
                f"Jacobi iteration did not converge within {_MAX_SWEEPS} sweeps "
                f"(final off-diagonal norm {off_norm:.3e})"
            )
        super().__init__(reason)


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real matrix that is exactly symmetric entry for entry."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.shape != (self.n, self.n):
            raise ValueError(f"expected shape ({self.n}, {self.n}), got {arr.shape}")
        if not (arr == arr.T).all():
            raise ValueError("matrix is not exactly symmetric")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries, "fro"))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending, with an optional orthonormal basis.

    ``residual`` bounds max_i ||M x_i - lambda_i x_i||_2 for eigensolver
    output; for closed-form character spectra it records the largest
    imaginary residue that was discarded.
    """

    eigenvalues: tuple[float, ...]
    eigenvectors: np.ndarray | None
    residual: float
    tolerance: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def to_json(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "residual": self.residual}


def normalized_distance_laplacian(d: DistanceMatrix) -> SymmetricMatrix:
    """T^{-1/2} (T - D) T^{-1/2} for transmission matrix T = diag(row sums).

    Diagonal entries are exactly 1; entry (u, v) is -d(u,v)/sqrt(t(u) t(v)).
    Undefined for a single point (its transmission is zero).
    """
    if d.n < 2:
        raise ValueError("normalized distance Laplacian needs n >= 2 (zero transmission)")
    t = np.asarray(transmission(d), dtype=float)
    # -d(u,v)/sqrt(t(u) t(v)), computed as one rounded quotient per entry
    mat = -(d.as_array() / np.sqrt(np.outer(t, t)))
    np.fill_diagonal(mat, 1.0)
    return SymmetricMatrix(d.n, mat)


def classical_normalized_laplacian(g: Graph) -> SymmetricMatrix:
    """I - Deg^{-1/2} A Deg^{-1/2} on the adjacency matrix."""
    deg = g.degrees()
    for u, k in enumerate(deg):
        if k == 0:
            raise ValueError(f"isolated vertex {u}: degree normalization undefined")
    adj = np.zeros((g.n, g.n))
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = 1.0
    degf = np.asarray(deg, dtype=float)
    mat = -(adj / np.sqrt(np.outer(degf, degf)))
    np.fill_diagonal(mat, 1.0)
    return SymmetricMatrix(g.n, mat)


def _offdiag_norm(a: np.ndarray) -> float:
    # summed directly off the diagonal: the sqrt(total^2 - diag^2) shortcut
    # cancels catastrophically near convergence
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off, "fro"))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    rp = a[p, :].copy()
    rq = a[q, :].copy()
    a[p, :] = c * rp - s * rq
    a[q, :] = s * rp + c * rq
    cp = a[:, p].copy()
    cq = a[:, q].copy()
    a[:, p] = c * cp - s * cq
    a[:, q] = s * cp + c * cq
    a[p, q] = a[q, p] = 0.0
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def symmetric_eigensystem(m: SymmetricMatrix, tol: float = 1e-12) -> Spectrum:
    """Full eigensystem by cyclic Jacobi rotations.

    Sweeps run in a fixed row-major order until the off-diagonal Frobenius
    norm drops below tol * ||M||_F, capped at 100 sweeps. The returned
    residual is measured against the original matrix and checked against
    the declared bound tol * (1 + ||M||_F), so callers get a certificate
    rather than a promise. Deterministic for fixed input.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    n = m.n
    original = m.entries
    fro = m.frobenius()
    declared = tol * (1.0 + fro)
    if n == 1:
        return Spectrum(
            (float(original[0, 0]),), np.eye(1), residual=0.0, tolerance=declared
        )
    a = original.copy()
    v = np.eye(n)
    target = tol * fro
    off = _offdiag_norm(a)
    sweeps = 0
    while off > target:
        if sweeps >= _MAX_SWEEPS:
            raise JacobiConvergenceError(off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = _offdiag_norm(a)
    eigs = np.diag(a).copy()
    order = np.argsort(eigs, kind="stable")
    eigs = eigs[order]
    v = v[:, order]
    resid_mat = original @ v - v * eigs[None, :]
    residual = float(np.max(np.linalg.norm(resid_mat, axis=0)))
    if residual > declared:
        raise JacobiConvergenceError(
            residual,
            f"eigensystem residual {residual:.3e} exceeds the declared "
            f"bound {declared:.3e}",
        )
    return Spectrum(tuple(float(x) for x in eigs), v, residual, declared)


def spectral_gap(s: Spectrum) -> float:
    """Second-smallest eigenvalue, counted with multiplicity."""
    if s.n < 2:
        raise ValueError("spectral gap needs at least two eigenvalues")
    return s.eigenvalues[1]


def rayleigh_quotient(d: DistanceMatrix, t: tuple, y) -> float:
    """Sum over ordered pairs of d(u,v)(y_u - y_v)^2 over 2 sum_u t(u) y_u^2.

    Vanishes on constant vectors; lower-bounds the spectral gap once y is
    orthogonal to T*1 (the caller is responsible for that projection).
    """
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise ValueError("Rayleigh quotient is undefined for the zero vector")
    arr = d.as_array()
    diff = y[:, None] - y[None, :]
    num = float(np.sum(arr * diff * diff))
    den = 2.0 * float(np.sum(np.asarray(t, dtype=float) * y * y))
    return num / den


def check_spectrum_bounds(s: Spectrum, n: int, tol: float = 1e-9) -> list[BoundCheck]:
    """Check the universal spectrum constraints for a normalized distance Laplacian.

    The strict upper check (largest eigenvalue away from 2 for n > 2) is an
    empirical property at this tolerance, not a per-instance certificate.
    """
    eigs = s.eigenvalues
    checks = [
        BoundCheck(
            "zero_mode",
            abs(eigs[0]) <= tol,
            eigs[0],
            0.0,
            -abs(eigs[0]),
            note="smallest eigenvalue is 0",
        ),
        BoundCheck(
            "upper_bound",
            eigs[-1] <= 2.0 + tol,
            eigs[-1],
            2.0,
            2.0 - eigs[-1],
            note="spectrum lies in [0, 2]",
        ),
    ]
    if n > 2:
        checks.append(
            BoundCheck(
                "upper_strict",
                eigs[-1] < 2.0 - tol,
                eigs[-1],
                2.0,
                2.0 - eigs[-1],
                note="largest eigenvalue strictly below 2 for n > 2 (empirical)",
            )
        )
    if n >= 2:
        gap = eigs[1]
        checks.append(
            BoundCheck(
                "gap_floor",
                gap >= GAP_FLOOR - tol,
                gap,
                GAP_FLOOR,
                gap - GAP_FLOOR,
                note="gap >= (9 - 4*sqrt(2))/7",
            )
        )
    return checks
