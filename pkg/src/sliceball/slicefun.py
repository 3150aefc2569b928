"""Slice function machinery: power series, slicewise kernels, splitting,
extension through the two-point reconstruction formula, composition, dilation.

Two concrete representations are provided.  PowerSeriesFunction holds a finite
list of right coefficients and is exact inside its declared radius.
SlicewiseFunction holds a pair of complex kernels on one plane (the split
components with respect to a fixed orthogonal unit pair) and produces values
everywhere else through the reconstruction formula, which is how functions
with boundary singularities are represented.

All functions are immutable after construction and evaluation is pure.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NonOrthogonalUnits, OutOfDomain, RangeViolation, TruncationBudgetExceeded
from .quaternion import (DEFAULT_UNIT, Quaternion, check_orthogonal,
                         orthonormal_frame, split_basis, to_slice)

FD_STEP = 1e-5
DEGREE_CAP = 4096
DEFAULT_RMAX = 1.0 - 2.0 ** -20


def _frame_matrix(i: Quaternion, j: Quaternion, k: Quaternion) -> np.ndarray:
    """Rows are the frame basis (1, i, j, k) as 4-vectors in the global basis."""
    return np.stack([np.array([1.0, 0.0, 0.0, 0.0]), i.to_array(), j.to_array(), k.to_array()])


class PlaneFunction:
    """Restriction of a slice function to one complex plane.

    Values are exposed as split components (c1, c2) with respect to the frame
    (1, i, j, k): the quaternion value at z is c1 + c2 * j, with c1 and c2
    complex numbers whose imaginary axis is i.
    """

    def __init__(self, i, j, k, pair_fn, r_max=1.0, boundary_exact=True, pair_deriv=None):
        self.i, self.j, self.k = i, j, k
        self._pair_fn = pair_fn
        self._pair_deriv = pair_deriv
        self.r_max = r_max
        self.boundary_exact = boundary_exact
        self._fmat = _frame_matrix(i, j, k)

    def pair(self, z):
        """Split components (c1, c2) at complex points z (ndarray in, ndarray out)."""
        z = np.asarray(z, dtype=complex)
        return self._pair_fn(z)

    def pair_deriv(self, z):
        z = np.asarray(z, dtype=complex)
        if self._pair_deriv is not None:
            return self._pair_deriv(z)
        c1p, c2p = self._pair_fn(z + FD_STEP)
        c1m, c2m = self._pair_fn(z - FD_STEP)
        return (c1p - c1m) / (2 * FD_STEP), (c2p - c2m) / (2 * FD_STEP)

    def components(self, z) -> np.ndarray:
        """Frame components, shape z.shape + (4,)."""
        c1, c2 = self.pair(z)
        return np.stack([c1.real, c1.imag, c2.real, c2.imag], axis=-1)

    def to_global(self, components: np.ndarray) -> np.ndarray:
        """Map frame components (e.g. frame-wise products) to the global basis."""
        return np.asarray(components) @ self._fmat

    def values4(self, z) -> np.ndarray:
        """Values in the global quaternion basis, shape z.shape + (4,)."""
        return self.components(z) @ self._fmat

    def abs2(self, z) -> np.ndarray:
        c1, c2 = self.pair(z)
        return (c1.real ** 2 + c1.imag ** 2) + (c2.real ** 2 + c2.imag ** 2)

    def __call__(self, z) -> Quaternion:
        v = self.values4(np.asarray(z, dtype=complex).reshape(1))[0]
        return Quaternion(*v)


class SliceFunction:
    """Common surface of the function representations."""

    r_max: float = 1.0
    boundary_exact: bool = False
    singular_boundary: bool = False
    singular_angles: tuple = ()
    intrinsic: bool = False
    #: exact polynomials are entire and may be evaluated beyond r_max;
    #: truncated series and kernel-backed functions may not.
    extrapolatable: bool = False

    def restriction(self, i: Quaternion) -> PlaneFunction:
        raise NotImplementedError

    def derivative(self) -> "SliceFunction":
        raise NotImplementedError

    def dilate(self, r: float) -> "SliceFunction":
        raise NotImplementedError

    def value_at_zero(self) -> Quaternion:
        return self.evaluate(Quaternion())

    def _check_domain(self, modulus: float):
        if self.extrapolatable:
            return
        limit = 1.0 if self.boundary_exact else self.r_max
        if modulus > limit + 1e-13:
            raise OutOfDomain(f"|x| = {modulus} exceeds declared radius {limit}")

    def evaluate(self, x: Quaternion) -> Quaternion:
        sc = to_slice(x)
        self._check_domain(math.hypot(sc.x0, sc.x1))
        return self.restriction(sc.unit)(complex(sc.x0, sc.x1))

    def __sub__(self, other):
        return combine(self, other, -1.0)

    def __add__(self, other):
        return combine(self, other, 1.0)


def _pair_poly_eval(exponents: np.ndarray, c1: np.ndarray, c2: np.ndarray):
    """Evaluator for a sparse pair of complex polynomials."""
    deg = int(exponents[-1]) if exponents.size else 0
    dense_ok = deg <= 256 and exponents.size > 0.5 * (deg + 1)
    if dense_ok:
        d1 = np.zeros(deg + 1, dtype=complex)
        d2 = np.zeros(deg + 1, dtype=complex)
        d1[exponents] = c1
        d2[exponents] = c2
        polyval = np.polynomial.polynomial.polyval

        def fn(z):
            return polyval(z, d1), polyval(z, d2)
    else:
        def fn(z):
            p = z[..., None] ** exponents
            return p @ c1, p @ c2
    return fn


class PowerSeriesFunction(SliceFunction):
    """Finite power series with quaternion coefficients on the right.

    Coefficients may be dense (list of quaternions for n = 0, 1, ...) or
    sparse (exponents plus coefficients).  Only |x| <= r_max is served; when a
    truncation-tail bound is declared, evaluation additionally refuses radii
    where the geometric tail estimate exceeds the tolerance.
    """

    def __init__(self, coeffs=None, r_max=DEFAULT_RMAX, *, exponents=None,
                 tol=1e-12, tail_coeff_bound=0.0):
        if not 0.0 < r_max < 1.0:
            raise ValueError("r_max must lie in (0, 1)")
        if exponents is None:
            exponents = np.arange(len(coeffs))
        exponents = np.asarray(exponents, dtype=int)
        carr = np.array([q.to_array() if isinstance(q, Quaternion) else
                         Quaternion(q).to_array() if isinstance(q, (int, float)) else
                         np.asarray(q, dtype=float) for q in coeffs], dtype=float)
        if carr.size == 0:
            exponents, carr = np.array([0]), np.zeros((1, 4))
        order = np.argsort(exponents)
        exponents, carr = exponents[order], carr[order]
        keep = np.any(carr != 0.0, axis=1)
        if not keep.any():
            keep[0] = True
        self.exponents = exponents[keep]
        self.carr = carr[keep]
        if self.degree > DEGREE_CAP:
            raise TruncationBudgetExceeded(f"degree {self.degree} exceeds cap {DEGREE_CAP}")
        self.r_max = float(r_max)
        self.tol = tol
        self.tail_coeff_bound = float(tail_coeff_bound)
        self.boundary_exact = False
        self.intrinsic = bool(np.all(self.carr[:, 1:] == 0.0))
        self.extrapolatable = self.tail_coeff_bound == 0.0

    @property
    def degree(self) -> int:
        return int(self.exponents[-1])

    def coefficient(self, n: int) -> Quaternion:
        idx = np.nonzero(self.exponents == n)[0]
        if idx.size:
            return Quaternion(*self.carr[idx[0]])
        return Quaternion()

    def coefficients_dense(self) -> list:
        return [self.coefficient(n) for n in range(self.degree + 1)]

    def value_at_zero(self) -> Quaternion:
        return self.coefficient(0)

    def _check_domain(self, modulus: float):
        super()._check_domain(modulus)
        if self.tail_coeff_bound > 0.0 and modulus < 1.0:
            tail = self.tail_coeff_bound * modulus ** (self.degree + 1) / (1.0 - modulus)
            if tail > self.tol:
                raise TruncationBudgetExceeded(
                    f"tail bound {tail:.3g} exceeds tolerance {self.tol:.3g} at radius {modulus}")

    def restriction(self, i: Quaternion) -> PlaneFunction:
        i, j, k = orthonormal_frame(i)
        iv, jv, kv = np.array(i.vec), np.array(j.vec), np.array(k.vec)
        vec = self.carr[:, 1:]
        c1 = self.carr[:, 0] + 1j * (vec @ iv)
        c2 = (vec @ jv) + 1j * (vec @ kv)
        dexp = self.exponents
        pair = _pair_poly_eval(dexp, c1, c2)
        mask = dexp >= 1
        dpair = _pair_poly_eval(dexp[mask] - 1, (dexp[mask] * c1[mask]), (dexp[mask] * c2[mask])) \
            if mask.any() else (lambda z: (np.zeros_like(z), np.zeros_like(z)))
        return PlaneFunction(i, j, k, pair, r_max=self.r_max, boundary_exact=False,
                             pair_deriv=dpair)

    def derivative(self) -> "PowerSeriesFunction":
        mask = self.exponents >= 1
        if not mask.any():
            return PowerSeriesFunction([Quaternion()], r_max=self.r_max)
        n = self.exponents[mask]
        return PowerSeriesFunction(list(self.carr[mask] * n[:, None]),
                                   r_max=self.r_max, exponents=n - 1,
                                   tail_coeff_bound=0.0 if self.tail_coeff_bound == 0.0
                                   else self.tail_coeff_bound * (self.degree + 2))

    def dilate(self, r: float) -> "PowerSeriesFunction":
        _check_dilation(r)
        if r == 0.0:
            return PowerSeriesFunction([self.coefficient(0)], r_max=self.r_max)
        scale = r ** self.exponents.astype(float)
        new_rmax = min(DEFAULT_RMAX, self.r_max / r) if r > 0 else DEFAULT_RMAX
        return PowerSeriesFunction(list(self.carr * scale[:, None]),
                                   r_max=new_rmax, exponents=self.exponents,
                                   tail_coeff_bound=self.tail_coeff_bound)

    @classmethod
    def constant(cls, value) -> "PowerSeriesFunction":
        value = value if isinstance(value, Quaternion) else Quaternion(value)
        return cls([value])

    @classmethod
    def monomial(cls, n: int, coeff=Quaternion(1.0), r_max=DEFAULT_RMAX):
        coeff = coeff if isinstance(coeff, Quaternion) else Quaternion(coeff)
        return cls([coeff], exponents=[n], r_max=r_max)


def _check_dilation(r: float):
    if not 0.0 <= r <= 1.0:
        raise ValueError("dilation factor must lie in [0, 1]")


def _fd_deriv(fn):
    def deriv(z):
        return (fn(z + FD_STEP) - fn(z - FD_STEP)) / (2 * FD_STEP)
    return deriv


_ZERO_KERNEL = lambda z: np.zeros_like(z)


class SlicewiseFunction(SliceFunction):
    """Slice function given by complex kernels on one plane.

    k1 and k2 are the split components on the plane of `unit` relative to the
    orthogonal unit `junit`: the value on that plane is k1(z) + k2(z) * junit.
    Values on every other plane come from the two-point reconstruction
    formula, so the kernels must satisfy the one-plane holomorphy condition
    (they are complex-holomorphic in z).
    """

    def __init__(self, unit, k1, k2=None, *, junit=None, k1_deriv=None, k2_deriv=None,
                 boundary_exact=False, singular_boundary=False, singular_angles=(),
                 intrinsic=False, r_max=1.0):
        i, j_default, _ = orthonormal_frame(unit)
        if junit is None:
            junit = j_default
        check_orthogonal(i, junit)
        self.unit = i
        self.junit = junit
        self.kunit = i * junit
        self.k1 = k1
        self.k2 = k2 if k2 is not None else _ZERO_KERNEL
        self._k1d = k1_deriv
        self._k2d = k2_deriv if (k2 is not None or k2_deriv is not None) else _ZERO_KERNEL
        self.boundary_exact = boundary_exact
        self.singular_boundary = singular_boundary
        self.singular_angles = tuple(singular_angles)
        self.intrinsic = intrinsic
        self.r_max = r_max

    def _k1_deriv(self):
        return self._k1d if self._k1d is not None else _fd_deriv(self.k1)

    def _k2_deriv(self):
        return self._k2d if self._k2d is not None else _fd_deriv(self.k2)

    def restriction(self, kappa: Quaternion) -> PlaneFunction:
        kappa, jk, kk = orthonormal_frame(kappa)
        half = 0.5
        A = Quaternion(half) - (kappa * self.unit) * half
        B = Quaternion(half) + (kappa * self.unit) * half
        basis = (Quaternion(1.0), self.unit, self.junit, self.kunit)
        rows = [A * e for e in basis] + [B * e for e in basis]
        target = _frame_matrix(kappa, jk, kk)  # rows: target frame in global basis
        M = np.stack([r.to_array() for r in rows]) @ target.T  # (8, 4)
        k1, k2 = self.k1, self.k2

        def pair(z):
            zm = np.conj(z)
            v1p, v2p, v1m, v2m = k1(z), k2(z), k1(zm), k2(zm)
            comp = np.stack([v1p.real, v1p.imag, v2p.real, v2p.imag,
                             v1m.real, v1m.imag, v2m.real, v2m.imag], axis=-1)
            out = comp @ M
            return out[..., 0] + 1j * out[..., 1], out[..., 2] + 1j * out[..., 3]

        k1d, k2d = self._k1_deriv(), self._k2_deriv()

        def pair_deriv(z):
            zm = np.conj(z)
            v1p, v2p, v1m, v2m = k1d(z), k2d(z), k1d(zm), k2d(zm)
            comp = np.stack([v1p.real, v1p.imag, v2p.real, v2p.imag,
                             v1m.real, v1m.imag, v2m.real, v2m.imag], axis=-1)
            out = comp @ M
            return out[..., 0] + 1j * out[..., 1], out[..., 2] + 1j * out[..., 3]

        return PlaneFunction(kappa, jk, kk, pair, r_max=self.r_max,
                             boundary_exact=self.boundary_exact, pair_deriv=pair_deriv)

    def derivative(self) -> "SlicewiseFunction":
        return SlicewiseFunction(self.unit, self._k1_deriv(),
                                 self._k2_deriv() if self.k2 is not _ZERO_KERNEL else None,
                                 junit=self.junit,
                                 boundary_exact=self.boundary_exact,
                                 singular_boundary=self.singular_boundary,
                                 singular_angles=self.singular_angles,
                                 intrinsic=self.intrinsic, r_max=self.r_max)

    def dilate(self, r: float) -> "SlicewiseFunction":
        _check_dilation(r)
        k1, k2 = self.k1, self.k2
        k1d, k2d = self._k1_deriv(), self._k2_deriv()
        smooth = r < 1.0
        return SlicewiseFunction(
            self.unit,
            lambda z, _f=k1: _f(r * z),
            (lambda z, _f=k2: _f(r * z)) if self.k2 is not _ZERO_KERNEL else None,
            junit=self.junit,
            k1_deriv=lambda z, _f=k1d: r * _f(r * z),
            k2_deriv=lambda z, _f=k2d: r * _f(r * z),
            boundary_exact=True if smooth else self.boundary_exact,
            singular_boundary=False if smooth else self.singular_boundary,
            singular_angles=() if smooth else self.singular_angles,
            intrinsic=self.intrinsic, r_max=1.0 if smooth else self.r_max)


class _Combination(SliceFunction):
    """f + scale * g, evaluated restriction-wise in a shared frame."""

    def __init__(self, f: SliceFunction, g: SliceFunction, scale: float):
        self.f, self.g, self.scale = f, g, scale
        self.r_max = min(f.r_max, g.r_max)
        self.boundary_exact = f.boundary_exact and g.boundary_exact
        self.singular_boundary = f.singular_boundary or g.singular_boundary
        self.singular_angles = tuple(f.singular_angles) + tuple(g.singular_angles)
        self.intrinsic = f.intrinsic and g.intrinsic
        self.extrapolatable = f.extrapolatable and g.extrapolatable

    def restriction(self, i):
        pf, pg = self.f.restriction(i), self.g.restriction(i)
        s = self.scale

        def pair(z):
            a1, a2 = pf.pair(z)
            b1, b2 = pg.pair(z)
            return a1 + s * b1, a2 + s * b2

        def pair_deriv(z):
            a1, a2 = pf.pair_deriv(z)
            b1, b2 = pg.pair_deriv(z)
            return a1 + s * b1, a2 + s * b2

        return PlaneFunction(pf.i, pf.j, pf.k, pair, r_max=self.r_max,
                             boundary_exact=self.boundary_exact, pair_deriv=pair_deriv)

    def derivative(self):
        return _Combination(self.f.derivative(), self.g.derivative(), self.scale)

    def dilate(self, r):
        return _Combination(self.f.dilate(r), self.g.dilate(r), self.scale)


def combine(f: SliceFunction, g: SliceFunction, scale: float) -> SliceFunction:
    """f + scale * g; stays a power series when both operands are."""
    if isinstance(f, PowerSeriesFunction) and isinstance(g, PowerSeriesFunction):
        exps = np.union1d(f.exponents, g.exponents)
        carr = np.zeros((exps.size, 4))
        carr[np.searchsorted(exps, f.exponents)] += f.carr
        carr[np.searchsorted(exps, g.exponents)] += scale * g.carr
        return PowerSeriesFunction(list(carr), r_max=min(f.r_max, g.r_max), exponents=exps)
    return _Combination(f, g, scale)


# -- operation surface -------------------------------------------------------

def evaluate(f: SliceFunction, x: Quaternion) -> Quaternion:
    """Value of f at the quaternion x."""
    return f.evaluate(x)


def slice_derivative(f: SliceFunction) -> SliceFunction:
    """Derivative along the real direction (termwise on power series)."""
    return f.derivative()


def restrict(f: SliceFunction, i: Quaternion) -> PlaneFunction:
    """Restriction of f to the plane of the unit i."""
    return f.restriction(i)


def dilate(f: SliceFunction, r: float) -> SliceFunction:
    """x -> f(r x) for a real factor r in [0, 1]."""
    return f.dilate(r)


def representation_formula(f_on_plane, i: Quaternion, x: Quaternion) -> Quaternion:
    """Reconstruct the function value at x from plane values on C_i.

    f_on_plane maps complex points of the plane of i to quaternions (a
    PlaneFunction qualifies).  The two plane points x_i and conj(x_i) must lie
    in its domain.
    """
    sc = to_slice(x)
    if isinstance(f_on_plane, PlaneFunction):
        limit = 1.0 if f_on_plane.boundary_exact else f_on_plane.r_max
        if math.hypot(sc.x0, sc.x1) > limit + 1e-13:
            raise OutOfDomain(f"point {x!r} leaves the plane evaluator's domain")
    zp = complex(sc.x0, sc.x1)
    qp, qm = f_on_plane(zp), f_on_plane(zp.conjugate())
    ix = sc.unit
    A = (Quaternion(1.0) - ix * i) * 0.5
    B = (Quaternion(1.0) + ix * i) * 0.5
    return A * qp + B * qm


class SplitPair:
    """Holomorphic components (f1, f2) of a restriction relative to (i, j)."""

    def __init__(self, i, j, f1, f2, coeff_exponents=None, coeffs1=None, coeffs2=None,
                 r_max=DEFAULT_RMAX, boundary_exact=False):
        check_orthogonal(i, j)
        self.i, self.j = i, j
        self.f1, self.f2 = f1, f2
        self.coeff_exponents = coeff_exponents
        self.coeffs1, self.coeffs2 = coeffs1, coeffs2
        self.r_max = r_max
        self.boundary_exact = boundary_exact

    @property
    def has_coefficients(self):
        return self.coeff_exponents is not None


def split(f: SliceFunction, i: Quaternion, j: Quaternion) -> SplitPair:
    """Split the restriction f_i as f1 + f2 * j with complex components."""
    check_orthogonal(i, j)
    if isinstance(f, PowerSeriesFunction):
        pairs = [split_basis(Quaternion(*row), i, j) for row in f.carr]
        c1 = np.array([p[0] for p in pairs], dtype=complex)
        c2 = np.array([p[1] for p in pairs], dtype=complex)
        fn = _pair_poly_eval(f.exponents, c1, c2)
        return SplitPair(i, j, lambda z: fn(np.asarray(z, complex))[0],
                         lambda z: fn(np.asarray(z, complex))[1],
                         coeff_exponents=f.exponents.copy(), coeffs1=c1, coeffs2=c2,
                         r_max=f.r_max)
    plane = f.restriction(i)
    phase = _perp_phase(plane.j, i, j)

    def f1(z):
        return plane.pair(np.asarray(z, complex))[0]

    def f2(z):
        return plane.pair(np.asarray(z, complex))[1] * phase

    return SplitPair(i, j, f1, f2, r_max=f.r_max, boundary_exact=f.boundary_exact)


def _perp_phase(j_from: Quaternion, i: Quaternion, j_to: Quaternion) -> complex:
    """Phase mapping components relative to j_from onto components relative to j_to.

    Any unit orthogonal to i is j_to = (a + b i) * j_from; components transform
    by the conjugate phase.
    """
    k_from = i * j_from
    a = j_to.x1 * j_from.x1 + j_to.x2 * j_from.x2 + j_to.x3 * j_from.x3
    b = j_to.x1 * k_from.x1 + j_to.x2 * k_from.x2 + j_to.x3 * k_from.x3
    return complex(a, -b)


def recombine(p: SplitPair) -> SliceFunction:
    """Slice function whose restriction to the plane of p.i equals f1 + f2 * j."""
    if p.has_coefficients:
        from .quaternion import combine_basis
        coeffs = [combine_basis(complex(c1), complex(c2), p.i, p.j)
                  for c1, c2 in zip(p.coeffs1, p.coeffs2)]
        return PowerSeriesFunction(coeffs, r_max=p.r_max, exponents=p.coeff_exponents)
    return SlicewiseFunction(p.i, p.f1, p.f2, junit=p.j, boundary_exact=p.boundary_exact,
                             r_max=p.r_max)


def i_compose(f: SliceFunction, g: SliceFunction, i: Quaternion,
              check_nodes: int = 64) -> SliceFunction:
    """Extension of the composed plane restrictions f_i(g_i(z)).

    g must map the disc of the plane of i into itself; this is checked on a
    near-boundary sample ring (plus an interior ring) and violations raise
    RangeViolation.
    """
    i, _, _ = orthonormal_frame(i)
    gi = g.restriction(i)
    theta = 2.0 * math.pi * (np.arange(check_nodes) + 0.5) / check_nodes
    for radius in (min(0.999, g.r_max), 0.5):
        zs = radius * np.exp(1j * theta)
        c1, c2 = gi.pair(zs)
        scale = 1.0 + float(np.max(np.abs(c1)))
        if float(np.max(np.abs(c2))) > 1e-9 * scale:
            raise RangeViolation("inner function leaves the plane of i")
        if float(np.max(np.abs(c1))) >= 1.0:
            raise RangeViolation("inner function leaves the unit disc")
    fi = f.restriction(i)
    fdi = f.derivative().restriction(i)

    def gc(z):
        return gi.pair(np.asarray(z, complex))[0]

    def gdc(z):
        return gi.pair_deriv(np.asarray(z, complex))[0]

    def k1(z):
        return fi.pair(gc(z))[0]

    def k2(z):
        return fi.pair(gc(z))[1]

    def k1d(z):
        return fdi.pair(gc(z))[0] * gdc(z)

    def k2d(z):
        return fdi.pair(gc(z))[1] * gdc(z)

    exact = f.boundary_exact and g.boundary_exact
    return SlicewiseFunction(i, k1, k2, junit=fi.j, k1_deriv=k1d, k2_deriv=k2d,
                             boundary_exact=exact, r_max=1.0 if exact else DEFAULT_RMAX,
                             intrinsic=f.intrinsic and g.intrinsic)
