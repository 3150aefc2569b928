"""Deterministic quadrature on circles, discs, the unit sphere, and radial ladders.

All rules are immutable and evaluations are reduced in fixed node order, so a
given rule and integrand always produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EvaluationFailure

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CircleRule:
    """Uniform rule on [0, 2pi) with equal weights 2pi/n.

    offset shifts the nodes by offset * (2pi/n); the default half-step keeps
    theta = pi (and theta = 0) off the node set, which matters for integrands
    with a boundary singularity there.  Exact for trigonometric polynomials of
    degree < n regardless of offset.
    """

    n: int
    offset: float = 0.5

    @property
    def nodes(self) -> np.ndarray:
        return TWO_PI * (np.arange(self.n) + self.offset) / self.n

    @property
    def weight(self) -> float:
        return TWO_PI / self.n


def integrate_circle(g: Callable[[np.ndarray], np.ndarray], rule: CircleRule):
    """Sum of g over the rule nodes times the uniform weight.

    g must accept an ndarray of angles and return values (any numeric dtype,
    possibly with trailing component axes).
    """
    try:
        vals = np.asarray(g(rule.nodes))
    except Exception as exc:  # pragma: no cover - defensive wrapper
        raise EvaluationFailure(f"circle integrand failed: {exc}") from exc
    return np.add.reduce(vals, axis=0) * rule.weight


def integrate_circle_checked(g, rule: CircleRule):
    """Integrate with a node-doubling diagnostic.

    Returns (value, error_estimate, low_confidence); the value comes from the
    doubled rule.  low_confidence is set when doubling moved the result by
    more than 1e-6 relative.
    """
    v1 = integrate_circle(g, rule)
    v2 = integrate_circle(g, CircleRule(2 * rule.n, rule.offset))
    err = float(np.max(np.abs(np.asarray(v2) - np.asarray(v1))))
    scale = 1.0 + float(np.max(np.abs(np.asarray(v2))))
    return v2, err, err > 1e-6 * scale


def gauss_legendre(n: int, a: float, b: float):
    """Gauss-Legendre nodes and weights on (a, b)."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class DiskRule:
    """Tensor rule on an annular sector of the unit disc.

    Radial direction uses Gauss-Legendre on (r_lo, r_hi); the angular
    direction is uniform midpoint on (theta_lo, theta_hi).  The area element
    r dr dtheta is folded into the weights.
    """

    n_radial: int = 128
    n_angular: int = 512
    r_lo: float = 0.0
    r_hi: float = 1.0
    theta_lo: float = 0.0
    theta_hi: float = TWO_PI

    def grids(self):
        r, wr = gauss_legendre(self.n_radial, self.r_lo, self.r_hi)
        dt = (self.theta_hi - self.theta_lo) / self.n_angular
        theta = self.theta_lo + dt * (np.arange(self.n_angular) + 0.5)
        return r, wr, theta, dt

    @classmethod
    def upper_half(cls, n_radial=128, n_angular=256):
        return cls(n_radial=n_radial, n_angular=n_angular, theta_lo=0.0, theta_hi=math.pi)


def integrate_disk(g: Callable[[np.ndarray, np.ndarray], np.ndarray], rule: DiskRule):
    """Approximate the area integral of g(x0, x1) over the rule's sector.

    g receives broadcastable arrays x0 = r cos(theta), x1 = r sin(theta) of
    shape (n_radial, n_angular).
    """
    r, wr, theta, dt = rule.grids()
    rr = r[:, None]
    x0 = rr * np.cos(theta)[None, :]
    x1 = rr * np.sin(theta)[None, :]
    try:
        vals = np.asarray(g(x0, x1))
    except Exception as exc:  # pragma: no cover
        raise EvaluationFailure(f"disk integrand failed: {exc}") from exc
    angular = np.add.reduce(vals, axis=1)  # collapse theta, keep trailing axes
    w = wr * r
    if angular.ndim == 1:
        return float(np.dot(w, angular) * dt)
    return np.tensordot(w, angular, axes=(0, 0)) * dt


@dataclass(frozen=True)
class SphereRule:
    """Product rule on the unit sphere: Gauss-Legendre in cos(theta), uniform phi.

    Total weight is 4pi and the node set is exactly closed under u -> -u
    (n_phi must stay even for that, which the constructor enforces).
    """

    n_theta: int = 64
    n_phi: int = 128

    def __post_init__(self):
        if self.n_phi % 2:
            raise ValueError("n_phi must be even so antipodes are represented")

    def nodes(self):
        """(M, 3) unit vectors and length-M weights summing to 4pi."""
        t, wt = np.polynomial.legendre.leggauss(self.n_theta)  # t = cos(theta)
        phi = TWO_PI * np.arange(self.n_phi) / self.n_phi
        st = np.sqrt(np.maximum(0.0, 1.0 - t * t))
        x = st[:, None] * np.cos(phi)[None, :]
        y = st[:, None] * np.sin(phi)[None, :]
        z = np.broadcast_to(t[:, None], x.shape)
        pts = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=-1)
        w = np.repeat(wt, self.n_phi) * (TWO_PI / self.n_phi)
        return pts, w


def integrate_sphere(h: Callable[[np.ndarray], np.ndarray], rule: SphereRule):
    """Integral of h over the sphere against surface measure (total 4pi).

    h receives an (M, 3) array of unit vectors.
    """
    pts, w = rule.nodes()
    try:
        vals = np.asarray(h(pts))
    except Exception as exc:  # pragma: no cover
        raise EvaluationFailure(f"sphere integrand failed: {exc}") from exc
    if vals.ndim == 1:
        return float(np.dot(w, vals))
    return np.tensordot(w, vals, axes=(0, 0))


# -- radial ladders ---------------------------------------------------------

def radial_ladder(m_min: int = 3, m_max: int = 14) -> np.ndarray:
    """Radii 1 - 2^-m for m = m_min .. m_max."""
    m = np.arange(m_min, m_max + 1)
    return 1.0 - 0.5 ** m


@dataclass(frozen=True)
class RadialLimitResult:
    limit: float
    error: float
    diverged: bool
    values: tuple = field(default=())

    def __iter__(self):
        return iter((self.limit, self.error, self.diverged))


def _monotone_increasing(v: np.ndarray) -> bool:
    return bool(np.all(np.diff(v) > 0))


def radial_limit(values: Sequence[float], order: int = 3) -> RadialLimitResult:
    """Extrapolate a ladder of values sampled at radii 1 - 2^-m.

    Divergence rule (frozen): the last four rungs increase monotonically, the
    increase is significant, and either the increments are not decaying
    (d_last >= 0.85 * d_last-2, i.e. per-rung increment ratio >= 0.92) or the
    values grew by a factor >= 1.5 over those rungs.  Logarithmically
    divergent ladders keep constant increments, so the decay test is the
    binding one for them; slow geometric convergence (increment ratio ~ 0.7,
    the half-power boundary tails) stays below it.

    Convergent ladders are extrapolated with a Richardson table in the step
    2^-m; the error estimate combines the last table correction with the last
    raw increment.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        raise ValueError("need at least 3 ladder values")
    d = np.diff(v)
    if v.size >= 5:
        tail = v[-4:]
        dt = np.diff(tail)
        significant = (tail[-1] - tail[0]) > 1e-9 * max(1.0, abs(tail[-1]))
        if _monotone_increasing(tail) and significant:
            not_decaying = dt[-1] >= 0.85 * dt[0]
            fast = tail[-1] >= 1.5 * tail[0] > 0
            if not_decaying or fast:
                return RadialLimitResult(float(v[-1]), math.inf, True, tuple(v))
    # Richardson in eps = 2^-m (each rung halves the step)
    table = [v.astype(float)]
    depth = min(order, v.size - 1)
    for j in range(1, depth + 1):
        prev = table[-1]
        factor = 2.0 ** j
        table.append((factor * prev[1:] - prev[:-1]) / (factor - 1.0))
    limit = float(table[-1][-1])
    err = abs(limit - float(table[-2][-1])) if depth >= 1 else abs(float(d[-1]))
    err = max(err, 1e-15 * (1.0 + abs(limit)))
    return RadialLimitResult(limit, float(err), False, tuple(v))


def trend_converges(values: Sequence[float]) -> bool:
    """True when a ladder of nonnegative values is stabilizing, not growing."""
    return not radial_limit(values).diverged


# -- independent 4-ball quadrature (used as a decomposition oracle) ---------

def integrate_ball4d(g, n_radius=48, n_chi=48, sphere=SphereRule(16, 32)):
    """Integral of g over the unit ball of R^4 against Lebesgue measure.

    Hyperspherical factorization: s = R (cos(chi) + sin(chi) * omega) with
    omega a unit 3-vector, volume element R^3 sin(chi)^2 dR dchi dsigma(omega).
    g receives arrays (s0, s1, units) with units of shape (M, 3); s0, s1 have
    shape (n_radius * n_chi, M) after broadcasting.
    """
    R, wR = gauss_legendre(n_radius, 0.0, 1.0)
    chi, wchi = gauss_legendre(n_chi, 0.0, math.pi)
    pts, wu = sphere.nodes()
    s0 = (R[:, None] * np.cos(chi)[None, :]).ravel()[:, None]  # (RC, 1)
    s1 = (R[:, None] * np.sin(chi)[None, :]).ravel()[:, None]
    w = (wR * R ** 3)[:, None] * (wchi * np.sin(chi) ** 2)[None, :]
    vals = np.asarray(g(s0, s1, pts))  # (RC, M)
    return float(np.dot(w.ravel(), vals @ wu))
