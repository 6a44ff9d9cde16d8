"""Numerical verification of the nonnegativity certificates behind the floors.

Everything here checks an algebraic identity or inequality by direct
evaluation: the balanced distance form, its triangle-combination weight
scheme, and the trigonometric certificate with its tuned coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import ONE_PLUS_2SQRT2, SQRT2, SQRT2_MINUS_HALF, SQRT2_PLUS_HALF
from .graphs import DistanceMatrix


def balanced_distance_form(
    d: DistanceMatrix, y, balance_tol: float = 1e-12
) -> float:
    """Sum over ordered pairs of (y_u^2 - (1+2*sqrt(2)) y_u y_v + y_v^2) d(u,v).

    Nonnegative for every metric d and every y summing to zero; the caller
    must supply a balanced vector (|sum y| <= balance_tol).
    """
    y = np.asarray(y, dtype=float)
    total = float(y.sum())
    if abs(total) > balance_tol:
        raise ValueError(f"vector must sum to zero (sum = {total:.3e})")
    arr = d.as_array()
    sq = y * y
    z = sq[:, None] + sq[None, :] - ONE_PLUS_2SQRT2 * np.outer(y, y)
    return float(np.sum(z * arr))


def triangle_weight(alpha: float, beta: float, gamma: float) -> float:
    """Cubic weight (a^2 - (1+2*sqrt(2)) a b + b^2) c^2 + a b c (a + b).

    Symmetric in its first two arguments; the symmetrization over the last
    two collapses to the square (a*b + a*c - sqrt(2) b*c)^2.
    """
    return (
        (alpha * alpha - ONE_PLUS_2SQRT2 * alpha * beta + beta * beta) * gamma * gamma
        + alpha * beta * gamma * (alpha + beta)
    )


def weight_tensor(y) -> np.ndarray:
    """mu[u, v, w] = triangle_weight(y_u, y_v, y_w), vectorized."""
    y = np.asarray(y, dtype=float)
    sq = y * y
    head = sq[:, None] + sq[None, :] - ONE_PLUS_2SQRT2 * np.outer(y, y)
    tail = np.outer(y, y) * (y[:, None] + y[None, :])
    return head[:, :, None] * sq[None, None, :] + tail[:, :, None] * y[None, None, :]


def target_coefficients(y) -> np.ndarray:
    """z[u, v] = y_u^2 - (1+2*sqrt(2)) y_u y_v + y_v^2."""
    y = np.asarray(y, dtype=float)
    sq = y * y
    return sq[:, None] + sq[None, :] - ONE_PLUS_2SQRT2 * np.outer(y, y)


@dataclass(frozen=True)
class WeightSchemeReport:
    """Worst margins for the three weight conditions plus the final chain.

    pair_floor is the minimum of mu(u,v,w) + mu(u,w,v) over all triples
    (must be >= -tol); chain_value is sum_{u,v} z_{u,v} d(u,v) when a
    distance matrix was supplied.
    """

    ok: bool
    symmetry_error: float
    pair_floor: float
    row_sum_error: float
    chain_value: float | None
    violations: tuple[str, ...]


def check_weight_conditions(
    mu: np.ndarray,
    z: np.ndarray,
    d: DistanceMatrix | None = None,
    tol: float = 1e-10,
) -> WeightSchemeReport:
    """Check an arbitrary weight tensor against the three scheme conditions.

    (i) symmetry in the first two arguments, (ii) pairwise nonnegativity
    over the last two, (iii) row sums matching the target coefficients.
    """
    violations: list[str] = []
    sym_err = float(np.max(np.abs(mu - mu.transpose(1, 0, 2))))
    if sym_err > tol:
        u, v, w = np.unravel_index(
            int(np.argmax(np.abs(mu - mu.transpose(1, 0, 2)))), mu.shape
        )
        violations.append(f"symmetry broken at ({u}, {v}, {w}): error {sym_err:.3e}")
    pair = mu + mu.transpose(0, 2, 1)
    pair_floor = float(np.min(pair))
    if pair_floor < -tol:
        u, v, w = np.unravel_index(int(np.argmin(pair)), pair.shape)
        violations.append(
            f"pair nonnegativity broken at ({u}, {v}, {w}): {pair_floor:.3e}"
        )
    row_err = float(np.max(np.abs(mu.sum(axis=2) - z)))
    if row_err > tol:
        u, v = np.unravel_index(int(np.argmax(np.abs(mu.sum(axis=2) - z))), z.shape)
        violations.append(f"row sum mismatch at ({u}, {v}): error {row_err:.3e}")
    chain = None
    if d is not None:
        chain = float(np.sum(z * d.as_array()))
        if chain < -1e-9:
            violations.append(f"final chain negative: {chain:.3e}")
    return WeightSchemeReport(
        ok=not violations,
        symmetry_error=sym_err,
        pair_floor=pair_floor,
        row_sum_error=row_err,
        chain_value=chain,
        violations=tuple(violations),
    )


def verify_weight_scheme(
    d: DistanceMatrix, y, tol: float = 1e-10
) -> WeightSchemeReport:
    """Build the cubic weight scheme for a unit balanced y and check it.

    A failure here falsifies the implementation, not the certificate; the
    report carries the violating triple.
    """
    y = np.asarray(y, dtype=float)
    norm = float(np.linalg.norm(y))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"y must be a unit vector (norm = {norm!r})")
    if abs(float(y.sum())) > 1e-9:
        raise ValueError("y must sum to zero")
    return check_weight_conditions(weight_tensor(y), target_coefficients(y), d, tol)


@dataclass(frozen=True)
class TrigCertificate:
    """Coefficients (a, b) of the squared trigonometric weight.

    weight(alpha, beta) = (a + b cos(alpha+beta) - b (cos alpha + cos beta)/sqrt(2))^2,
    a square and hence nonnegative everywhere.
    """

    a: float
    b: float

    @property
    def normalized(self) -> bool:
        return abs(self.a * self.a + self.b * self.b - 1.0) <= 1e-9

    def weight(self, alpha, beta):
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        inner = (
            self.a
            + self.b * np.cos(alpha + beta)
            - self.b * (np.cos(alpha) + np.cos(beta)) / SQRT2
        )
        return inner * inner


def certificate_identity_residual(cert: TrigCertificate, chi, phi: float) -> float:
    """Residual of the character-averaged identity for the trig weight.

    For a character whose square is nontrivial, averaging
    2*weight(phi, theta_v) - weight(phi - theta_v, theta_v) over the group
    must equal (a^2 + b^2) - (2ab(1+sqrt(2)) + b^2(sqrt(2)+1/2)) cos(phi);
    orthogonality kills every other Fourier term. Returns |lhs - rhs|.
    """
    if chi.is_trivial or chi.is_real:
        raise ValueError(
            "identity needs a character whose square is nontrivial"
        )
    th = chi.angles()
    lhs = float(np.mean(2.0 * cert.weight(phi, th) - cert.weight(phi - th, th)))
    coeff = 2.0 * cert.a * cert.b * (1.0 + SQRT2) + cert.b * cert.b * SQRT2_PLUS_HALF
    rhs = cert.a * cert.a + cert.b * cert.b - coeff * math.cos(phi)
    return abs(lhs - rhs)


def quadratic_form_max() -> float:
    """Maximum of 2ab(1+sqrt(2)) + b^2(sqrt(2)+1/2) on the unit circle.

    Closed form: top eigenvalue of the 2x2 form [[0, q], [q, s]] with
    q = 1 + sqrt(2) and s = sqrt(2) + 1/2.
    """
    q = 1.0 + SQRT2
    s = SQRT2_PLUS_HALF
    return 0.5 * (s + math.sqrt(s * s + 4.0 * q * q))


def optimal_certificate() -> tuple[float, float, float]:
    """Unit-circle maximizer (a, b) of the quadratic form, with its value.

    The top eigenvector of the form is proportional to (q, lambda); a is
    about 0.562 and b about 0.827.
    """
    q = 1.0 + SQRT2
    lam = quadratic_form_max()
    r = math.hypot(q, lam)
    return q / r, lam / r, lam


def balanced_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random unit vector with zero sum (mean removed from a normal draw)."""
    while True:
        y = rng.standard_normal(n)
        y -= y.mean()
        norm = float(np.linalg.norm(y))
        if norm > 1e-9:
            return y / norm


def transmission_orthogonal_vector(t, rng: np.random.Generator) -> np.ndarray:
    """Random unit vector with sum_u t(u) y_u = 0 (distinct from zero-sum)."""
    t = np.asarray(t, dtype=float)
    while True:
        y = rng.standard_normal(len(t))
        y -= (y @ t) / (t @ t) * t
        norm = float(np.linalg.norm(y))
        if norm > 1e-9:
            return y / norm


def rearrangement_residual(d: DistanceMatrix, t, y) -> float:
    """Consistency of the form with the Rayleigh-quotient rearrangement.

    (sqrt(2)+1/2) sum d(u,v)(y_u-y_v)^2 - (sqrt(2)-1/2) * 2 sum t(u) y_u^2
    must equal the balanced distance form; returns the absolute deviation.
    """
    y = np.asarray(y, dtype=float)
    arr = d.as_array()
    diff = y[:, None] - y[None, :]
    lhs = SQRT2_PLUS_HALF * float(np.sum(arr * diff * diff)) - (
        SQRT2_MINUS_HALF * 2.0 * float(np.sum(np.asarray(t, dtype=float) * y * y))
    )
    return abs(lhs - balanced_distance_form(d, y, balance_tol=1e-9))
