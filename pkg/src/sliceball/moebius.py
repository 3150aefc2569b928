"""Disc automorphisms of the quaternionic ball.

Two forms are kept deliberately separate.  moebius_verbatim evaluates a
one-line quaternionic rational formula exactly as given, with a left inverse.
moebius_ext extends the classical disc automorphism (z + a) / (1 + conj(a) z)
from one plane to the whole ball and is the form all norm-invariance
machinery composes with.  The two do not agree (verbatim sends s to -s when
a = 0, the extension is the identity there); moebius_check tabulates the
discrepancy instead of hiding it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularDenominator
from .quaternion import Quaternion, assemble, orthonormal_frame, to_slice
from .slicefun import SliceFunction, SlicewiseFunction, i_compose

DENOM_GUARD = 1e-12


@dataclass(frozen=True)
class MoebiusParam:
    """Parameter a = a0 + i a1 inside the disc of the plane of i."""

    a: complex
    unit: Quaternion

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise ValueError(f"|a| = {abs(self.a)} must be < 1")

    @property
    def a_quat(self) -> Quaternion:
        return assemble(self.a.real, self.a.imag, self.unit)


def moebius_verbatim(p: MoebiusParam, s: Quaternion) -> Quaternion:
    """(1 - s a0 + s^2 |a|^2)^(-1) (s^2 a - s (1 + |a|^2) - conj(a)), literally."""
    a = p.a_quat
    a0 = a.real
    mod2 = abs(p.a) ** 2
    denom = Quaternion(1.0) - s * a0 + (s * s) * mod2
    if abs(denom) <= DENOM_GUARD:
        raise SingularDenominator(f"denominator modulus {abs(denom)} at s = {s!r}")
    numer = (s * s) * a - s * (1.0 + mod2) - a.conjugate()
    return denom.inverse() * numer


def moebius_complex(a: complex, z):
    """Classical disc automorphism (z + a) / (1 + conj(a) z) on one plane."""
    if abs(a) >= 1.0:
        raise ValueError("|a| must be < 1")
    z = np.asarray(z, dtype=complex)
    denom = 1.0 + np.conj(a) * z
    bad = np.abs(denom) <= DENOM_GUARD
    if np.any(bad):
        raise SingularDenominator("denominator vanishes on the sample")
    out = (z + a) / denom
    return complex(out) if out.ndim == 0 else out


def moebius_complex_deriv(a: complex, z):
    z = np.asarray(z, dtype=complex)
    return (1.0 - abs(a) ** 2) / (1.0 + np.conj(a) * z) ** 2


def moebius_ext(p: MoebiusParam) -> SliceFunction:
    """Extension of the plane automorphism to the whole ball.

    The restriction to the plane of p.unit is moebius_complex(a, .); other
    planes are served through the reconstruction formula.  Intrinsic exactly
    when a is real.
    """
    a = p.a
    return SlicewiseFunction(
        p.unit,
        lambda z: moebius_complex(a, np.asarray(z, complex)),
        None,
        k1_deriv=lambda z: moebius_complex_deriv(a, z),
        boundary_exact=True,
        intrinsic=(a.imag == 0.0),
        r_max=1.0)


def moebius_compose(f: SliceFunction, p: MoebiusParam) -> SliceFunction:
    """i-composition of f with the extension-form transformation."""
    return i_compose(f, moebius_ext(p), p.unit)


def moebius_check(p: MoebiusParam, n_angles: int = 24, radii=(0.3, 0.7, 0.95),
                  extra_units=()):
    """Tabulate verbatim vs extension values on a grid of slices.

    Returns a JSON-ready dict: per-point values, the maximum discrepancy, and
    the behaviour of both forms at a = 0 reference points.  No relationship is
    asserted; the table is the deliverable.
    """
    ext = moebius_ext(p)
    units = [p.unit] + [u for u in extra_units]
    if not extra_units:
        base, j, k = orthonormal_frame(p.unit)
        units += [j, k]
    rows = []
    max_diff = 0.0
    for u in units:
        for r in radii:
            for m in range(n_angles):
                theta = 2.0 * math.pi * (m + 0.5) / n_angles
                s = assemble(r * math.cos(theta), r * math.sin(theta), u)
                try:
                    v = moebius_verbatim(p, s)
                    verbatim = v.to_list()
                except SingularDenominator:
                    v, verbatim = None, None
                w = ext.evaluate(s)
                diff = abs(v - w) if v is not None else None
                if diff is not None:
                    max_diff = max(max_diff, diff)
                rows.append({"unit": u.to_list(), "s": s.to_list(),
                             "verbatim": verbatim, "extension": w.to_list(),
                             "abs_difference": diff})
    sc = to_slice(p.a_quat)
    return {
        "a": p.a_quat.to_list(),
        "unit": p.unit.to_list(),
        "max_abs_difference": max_diff,
        "zero_parameter_note": "verbatim form sends s to -s at a = 0; "
                               "extension form is the identity there",
        "samples": rows,
        "a_slice": {"x0": sc.x0, "x1": sc.x1},
    }


def boundary_modulus_check(p: MoebiusParam, n: int = 256):
    """Max deviation of |verbatim value| from 1 on the sampled unit circle of C_i."""
    worst = 0.0
    for m in range(n):
        theta = 2.0 * math.pi * (m + 0.5) / n
        s = assemble(math.cos(theta), math.sin(theta), p.unit)
        denom = Quaternion(1.0) - s * p.a_quat.real + (s * s) * (abs(p.a) ** 2)
        if abs(denom) <= 1e-6:
            continue
        worst = max(worst, abs(abs(moebius_verbatim(p, s)) - 1.0))
    return worst
