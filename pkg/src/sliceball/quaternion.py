"""Quaternion arithmetic, imaginary units, frames, and sphere sampling.

The scalar type of the whole package.  Multiplication follows the Hamilton
convention e1*e2 = e3, e2*e3 = e1, e3*e1 = e2.  Values are immutable and all
operations are pure, so they can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonOrthogonalUnits, UnknownScheme

ORTHO_TOL = 1e-12


class Quaternion:
    """Immutable quaternion w + x1*e1 + x2*e2 + x3*e3."""

    __slots__ = ("w", "x1", "x2", "x3")

    def __init__(self, w=0.0, x1=0.0, x2=0.0, x3=0.0):
        object.__setattr__(self, "w", float(w))
        object.__setattr__(self, "x1", float(x1))
        object.__setattr__(self, "x2", float(x2))
        object.__setattr__(self, "x3", float(x3))

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x1 - other.x1,
                          self.x2 - other.x2, self.x3 - other.x3)

    def __rsub__(self, other):
        return _coerce(other).__sub__(self)

    def __neg__(self):
        return Quaternion(-self.w, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x1 * other,
                              self.x2 * other, self.x3 * other)
        a, b = self, _coerce(other)
        return Quaternion(
            a.w * b.w - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.w * b.x1 + a.x1 * b.w + a.x2 * b.x3 - a.x3 * b.x2,
            a.w * b.x2 - a.x1 * b.x3 + a.x2 * b.w + a.x3 * b.x1,
            a.w * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.w,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return _coerce(other).__mul__(self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return self * _coerce(other).inverse()

    def conjugate(self):
        return Quaternion(self.w, -self.x1, -self.x2, -self.x3)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def __abs__(self) -> float:
        return math.sqrt(self.norm_sq())

    def inverse(self):
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisionError("inverse of zero quaternion")
        return Quaternion(self.w / n2, -self.x1 / n2, -self.x2 / n2, -self.x3 / n2)

    # -- structure --------------------------------------------------------

    @property
    def real(self) -> float:
        return self.w

    @property
    def vec(self):
        """Vector (imaginary) part as a 3-tuple."""
        return (self.x1, self.x2, self.x3)

    def vec_norm(self) -> float:
        return math.sqrt(self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3)

    def is_real(self, tol=0.0) -> bool:
        return self.vec_norm() <= tol

    def to_list(self):
        return [self.w, self.x1, self.x2, self.x3]

    def to_array(self):
        return np.array([self.w, self.x1, self.x2, self.x3])

    @classmethod
    def from_seq(cls, seq: Sequence[float]) -> "Quaternion":
        w, x1, x2, x3 = seq
        return cls(w, x1, x2, x3)

    def isclose(self, other, tol=1e-12) -> bool:
        return abs(self - _coerce(other)) <= tol

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.w, self.x1, self.x2, self.x3) == (other.w, other.x1, other.x2, other.x3)

    def __hash__(self):
        return hash((self.w, self.x1, self.x2, self.x3))

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x1!r}, {self.x2!r}, {self.x3!r})"


def _coerce(value) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(value)
    raise TypeError(f"cannot interpret {value!r} as a quaternion")


ZERO = Quaternion()
ONE = Quaternion(1.0)
E1 = Quaternion(0.0, 1.0)
E2 = Quaternion(0.0, 0.0, 1.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)

#: Canonical unit assigned to real points, where any unit would do.
DEFAULT_UNIT = E1


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product of two quaternions."""
    return _coerce(a) * _coerce(b)


def imaginary_unit(q, tol=1e-9) -> Quaternion:
    """Validate and return q as an imaginary unit (Re = 0, modulus 1)."""
    q = _coerce(q)
    if abs(q.w) > tol:
        raise ValueError(f"unit has nonzero real part {q.w}")
    n = q.vec_norm()
    if abs(n - 1.0) > tol:
        raise ValueError(f"unit has modulus {n}, expected 1")
    return Quaternion(0.0, q.x1 / n, q.x2 / n, q.x3 / n)


@dataclass(frozen=True)
class SliceCoordinates:
    """Point of the ball written as x0 + i*x1 with x1 >= 0."""

    x0: float
    x1: float
    unit: Quaternion

    def assemble(self) -> Quaternion:
        u = self.unit
        return Quaternion(self.x0, u.x1 * self.x1, u.x2 * self.x1, u.x3 * self.x1)


def to_slice(q: Quaternion) -> SliceCoordinates:
    """Slice coordinates of q; real points get the designated default unit."""
    q = _coerce(q)
    n = q.vec_norm()
    if n == 0.0:
        return SliceCoordinates(q.w, 0.0, DEFAULT_UNIT)
    return SliceCoordinates(q.w, n, Quaternion(0.0, q.x1 / n, q.x2 / n, q.x3 / n))


def assemble(x0: float, x1: float, unit: Quaternion) -> Quaternion:
    return SliceCoordinates(float(x0), float(x1), unit).assemble()


def _vec_dot(a: Quaternion, b: Quaternion) -> float:
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3


def check_orthogonal(i: Quaternion, j: Quaternion, tol=ORTHO_TOL):
    """Raise NonOrthogonalUnits unless i, j are orthogonal imaginary units."""
    for u in (i, j):
        if abs(u.w) > tol or abs(u.vec_norm() - 1.0) > 1e-9:
            raise NonOrthogonalUnits(f"{u!r} is not an imaginary unit")
    # i*j + j*i = -2 <vec(i), vec(j)> for imaginary units
    if abs(_vec_dot(i, j)) > tol:
        raise NonOrthogonalUnits(f"units not orthogonal: <i,j> = {_vec_dot(i, j)}")


def orthonormal_frame(i: Quaternion):
    """Deterministic orthonormal frame (i, j, k) with k = i*j.

    j is built from the coordinate axis least aligned with i, so the choice
    is reproducible for any input unit.
    """
    i = _coerce(i)
    v = np.array(i.vec)
    axis = int(np.argmin(np.abs(v)))
    e = np.zeros(3)
    e[axis] = 1.0
    jv = e - np.dot(e, v) * v
    jv /= np.linalg.norm(jv)
    j = Quaternion(0.0, jv[0], jv[1], jv[2])
    return i, j, i * j


def split_basis(a: Quaternion, i: Quaternion, j: Quaternion):
    """Write a = c1 + c2*j with c1, c2 complex in the plane of i.

    The returned values are Python complex numbers whose imaginary axis is i.
    Requires i and j orthogonal; |a|^2 = |c1|^2 + |c2|^2 holds exactly.
    """
    check_orthogonal(i, j)
    a = _coerce(a)
    k = i * j
    c1 = complex(a.w, _vec_dot(a, i))
    c2 = complex(_vec_dot(a, j), _vec_dot(a, k))
    return c1, c2


def combine_basis(c1: complex, c2: complex, i: Quaternion, j: Quaternion) -> Quaternion:
    """Inverse of split_basis: c1 + c2*j as a quaternion."""
    k = i * j
    out = Quaternion(c1.real) + i * c1.imag + j * c2.real + k * c2.imag
    return out


_AXES_CYCLE = (E1, -E1, E2, -E2, E3, -E3)
_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def sample_sphere(n: int, scheme: str = "product"):
    """Deterministic sample of the sphere of imaginary units.

    Schemes:
      axes    -- the six signed coordinate units, truncated to n (2 <= n <= 6);
      product -- (theta, phi) product grid, exactly closed under u -> -u;
      golden  -- golden-spiral points, pairwise distinct, not sign-closed.
    """
    if n < 2:
        raise ValueError("need n >= 2 sphere samples")
    if scheme == "axes":
        if n > len(_AXES_CYCLE):
            raise ValueError("axes scheme supports at most 6 samples")
        return list(_AXES_CYCLE[:n])
    if scheme == "product":
        n_theta = max(1, int(round(math.sqrt(n / 2.0))))
        n_phi = 2 * n_theta
        nodes, _ = np.polynomial.legendre.leggauss(max(2, n_theta))
        units = []
        for t in nodes:  # t = cos(theta), symmetric about 0
            st = math.sqrt(max(0.0, 1.0 - t * t))
            for kk in range(n_phi):
                phi = 2.0 * math.pi * kk / n_phi
                units.append(Quaternion(0.0, st * math.cos(phi), st * math.sin(phi), t))
        return units
    if scheme == "golden":
        units = []
        for kk in range(n):
            z = 1.0 - (2.0 * kk + 1.0) / n
            r = math.sqrt(max(0.0, 1.0 - z * z))
            phi = kk * _GOLDEN_ANGLE
            units.append(Quaternion(0.0, r * math.cos(phi), r * math.sin(phi), z))
        return units
    raise UnknownScheme(f"unknown sphere sampling scheme {scheme!r}")


# -- vectorized helpers on (..., 4) float arrays ---------------------------

def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product broadcast over trailing component axis."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def qconj_array(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    out[..., 1:] *= -1.0
    return out


def qabs2_array(a: np.ndarray) -> np.ndarray:
    return np.sum(a * a, axis=-1)
