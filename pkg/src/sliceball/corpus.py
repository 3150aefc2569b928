"""Reference function zoo with expected memberships, and the classifier.

Every entry carries expected flags for the seven memberships together with a
derivation note.  Flags set to None mean "not asserted" and are skipped by
verdict-matching tests.  Truncated gap entries additionally carry their
coefficient law so membership trends can be read off the coefficients instead
of the truncation, which is a polynomial and would trivially pass everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .norms import (ArcFamily, R_BOUNDARY, bloch_norm, gap_series_check, hardy_norm,
                    oscillation_curve, vmo_verdict_from_levels)
from .quadrature import DiskRule, radial_ladder, radial_limit
from .quaternion import E1, E2, E3, Quaternion, sample_sphere
from .slicefun import PowerSeriesFunction, SliceFunction, SlicewiseFunction
from .moebius import MoebiusParam, moebius_ext

FLAG_NAMES = ("H1", "H2", "BMOSH", "VMOSH", "Bloch", "littleBloch", "Dirichlet")


def log_kernel_function(alpha: float, unit: Quaternion = E1) -> SlicewiseFunction:
    """Boundary-singular logarithmic kernel log(1/(1 - e^{i alpha} z)), extended.

    Bounded mean oscillation with a scale-invariant oscillation floor at the
    singular angle, hence not in the vanishing class.
    """
    c = complex(math.cos(alpha), math.sin(alpha))
    theta_star = abs((-alpha + math.pi) % (2.0 * math.pi) - math.pi)
    return SlicewiseFunction(
        unit,
        lambda z: -np.log(1.0 - c * z),
        None,
        k1_deriv=lambda z: c / (1.0 - c * z),
        boundary_exact=True, singular_boundary=True,
        singular_angles=(theta_star,), intrinsic=False, r_max=1.0)


def inv_sqrt_function(unit: Quaternion = E1) -> SlicewiseFunction:
    """1 / sqrt(1 + s) on the slit ball, principal branch.

    Intrinsic (real Taylor coefficients); the boundary singularity at -1 is
    too strong for the p = 2 Hardy class.
    """
    return SlicewiseFunction(
        unit,
        lambda z: 1.0 / np.sqrt(1.0 + z),
        None,
        k1_deriv=lambda z: -0.5 * (1.0 + z) ** -1.5,
        boundary_exact=True, singular_boundary=True,
        singular_angles=(math.pi,), intrinsic=True, r_max=1.0)


def gap_series_function(exponents, coeffs, r_max=1.0 - 2.0 ** -20) -> PowerSeriesFunction:
    qs = [c if isinstance(c, Quaternion) else Quaternion(c) for c in coeffs]
    return PowerSeriesFunction(qs, r_max=r_max, exponents=list(exponents))


@dataclass
class CorpusEntry:
    id: str
    function: SliceFunction
    expected: dict
    provenance: str
    spec: dict = field(default_factory=dict)
    coeff_law: Optional[dict] = None  # {"exponents": [...], "coeff_mags": [...], "alpha": float}
    hot_angles: tuple = ()

    @property
    def is_series(self) -> bool:
        return isinstance(self.function, PowerSeriesFunction)


def _flags(h1, h2, bmo, vmo, bloch, little, dirichlet):
    return dict(zip(FLAG_NAMES, (h1, h2, bmo, vmo, bloch, little, dirichlet)))


ALL_YES = _flags(*([True] * 7))


def build_corpus(seed: int = 20240801):
    """Deterministic corpus shared by the whole test battery."""
    rng = np.random.default_rng(seed)
    entries = []

    entries.append(CorpusEntry(
        "const_one", PowerSeriesFunction.constant(1.0), dict(ALL_YES),
        "constant; every membership trivially holds",
        spec={"type": "power_series", "coeffs": [[1, 0, 0, 0]], "r_max": 0.999999}))
    entries.append(CorpusEntry(
        "const_quat", PowerSeriesFunction.constant(Quaternion(0.5, -0.25, 1.0, 0.125)),
        dict(ALL_YES), "constant with a generic quaternion value"))
    entries.append(CorpusEntry(
        "identity", PowerSeriesFunction.monomial(1), dict(ALL_YES),
        "the coordinate function; smooth up to the boundary"))
    entries.append(CorpusEntry(
        "monomial5_e2", PowerSeriesFunction.monomial(5, E2), dict(ALL_YES),
        "monomial with a right unit coefficient"))

    coeffs = []
    for n in range(9):
        row = rng.uniform(-1.0, 1.0, size=4) / (n + 1.0)
        coeffs.append(Quaternion(*row))
    entries.append(CorpusEntry(
        "poly_random", PowerSeriesFunction(coeffs), dict(ALL_YES),
        "seeded random degree-8 polynomial; smooth up to the boundary"))

    for alpha in (0.0, 0.7, 2.1):
        entries.append(CorpusEntry(
            f"log_alpha_{alpha:g}", log_kernel_function(alpha),
            _flags(True, True, True, False, True, False, False),
            "derived: square-summable coefficients 1/n give the p<=2 Hardy classes; "
            "log oscillation at the singular angle is scale invariant, so bounded "
            "but not vanishing; derivative square-sums n*(1/n^2) diverge",
            spec={"type": "log_alpha", "alpha": alpha, "unit": [0, 1, 0, 0]},
            hot_angles=(abs((-alpha + math.pi) % (2 * math.pi) - math.pi),)))

    entries.append(CorpusEntry(
        "inv_sqrt", inv_sqrt_function(),
        _flags(True, False, False, False, False, False, False),
        "derived: boundary modulus ~ |1+z|^(-1/2); its square is non-integrable "
        "on the circle, the first power is integrable; derivative blows up like "
        "(1-r)^(-3/2) near -1, beating every Bloch or area budget",
        spec={"type": "inv_sqrt_one_plus_s"}, hot_angles=(math.pi,)))

    # gap entries: truncation for evaluation, law for membership trends
    L = 12
    exps = [2 ** k for k in range(L + 1)]
    entries.append(CorpusEntry(
        "gap_convergent", gap_series_function(exps, [2.0 ** (-k / 2.0) for k in range(L + 1)]),
        _flags(True, True, True, True, True, True, False),
        "derived: square sums converge geometrically; derivative sums "
        "n_k |a_k|^2 = 1 per term diverge",
        spec={"type": "gap_series", "exponents": exps,
              "coeffs": [2.0 ** (-k / 2.0) for k in range(L + 1)]},
        coeff_law={"exponents": [2 ** k for k in range(48)],
                   "coeff_mags": [2.0 ** (-k / 2.0) for k in range(48)], "alpha": 2.0}))
    entries.append(CorpusEntry(
        "gap_divergent", gap_series_function(exps, [1.0] * (L + 1)),
        _flags(False, False, False, False, True, False, False),
        "derived: square sums grow linearly; bounded coefficients still give a "
        "bounded weighted derivative, so the Bloch class survives",
        spec={"type": "gap_series", "exponents": exps, "coeffs": [1.0] * (L + 1)},
        coeff_law={"exponents": [2 ** k for k in range(48)],
                   "coeff_mags": [1.0] * 48, "alpha": 2.0}))
    L3 = 7
    exps3 = [3 ** k for k in range(1, L3 + 1)]
    entries.append(CorpusEntry(
        "gap_inverse_index", gap_series_function(exps3, [1.0 / k for k in range(1, L3 + 1)]),
        _flags(True, True, True, True, True, True, False),
        "derived: square sums are a convergent 1/k^2 series; coefficients tend "
        "to zero so the little Bloch class holds; derivative sums 3^k/k^2 diverge",
        coeff_law={"exponents": [3 ** k for k in range(1, 40)],
                   "coeff_mags": [1.0 / k for k in range(1, 40)], "alpha": 3.0}))

    entries.append(CorpusEntry(
        "moebius_real", moebius_ext(MoebiusParam(0.4 + 0j, E1)), dict(ALL_YES),
        "disc automorphism with a real parameter; rational, bounded, smooth "
        "up to the boundary"))
    entries.append(CorpusEntry(
        "moebius_complex", moebius_ext(MoebiusParam(0.3 + 0.4j, E1)), dict(ALL_YES),
        "disc automorphism with a complex parameter on the e1 plane"))

    entries.append(CorpusEntry(
        "log_alpha_0.7_dilated", log_kernel_function(0.7).dilate(0.9), dict(ALL_YES),
        "dilation pulls the singularity outside the closed ball; analytic on a "
        "neighbourhood of the closure"))
    entries.append(CorpusEntry(
        "inv_sqrt_dilated", inv_sqrt_function().dilate(0.5), dict(ALL_YES),
        "dilated slit-kernel 1/sqrt(1 + s/2); smooth on the closed ball"))
    entries.append(CorpusEntry(
        "poly_random_dilated", PowerSeriesFunction(coeffs).dilate(0.75), dict(ALL_YES),
        "dilated random polynomial"))

    return entries


# -- classification -------------------------------------------------------------


def classification_units(scheme: str = "standard"):
    if scheme == "small":
        return sample_sphere(4, "axes")
    return sample_sphere(6, "axes") + sample_sphere(8, "golden")


def bmo_vmo_from_curve(curve: np.ndarray):
    """Frozen trend rules on the per-level max oscillation squared.

    Vanishing: both deepest levels under the threshold and decreasing.
    Unbounded: the three deepest levels increase with total growth >= 1.5x.
    Everything else reads as bounded, non-vanishing.
    """
    vmo = vmo_verdict_from_levels(curve)
    growing = bool(curve[-1] > curve[-2] > curve[-3]
                   and curve[-1] >= 1.5 * curve[-3] > 0)
    bmo = vmo or not growing
    return bmo, vmo


def _law_flags(law: dict) -> dict:
    from .norms import partial_sums_converge
    res = gap_series_check(law["exponents"], law["coeff_mags"], alpha=law.get("alpha"))
    member = res["h2"]
    mags = np.asarray(law["coeff_mags"], dtype=float)
    exps = np.asarray(law["exponents"], dtype=float)
    dirichlet = partial_sums_converge(np.cumsum(exps * mags * mags))
    little = bool(np.max(mags[3 * len(mags) // 4:]) <= 0.2 * np.max(mags))
    return {"H1": member, "H2": member, "BMOSH": member, "VMOSH": member,
            "Bloch": bool(np.max(mags) < math.inf), "littleBloch": little,
            "Dirichlet": dirichlet}


def classify(entry: CorpusEntry, units=None, arcs: ArcFamily = ArcFamily(),
             r_boundary: float = R_BOUNDARY, ladder=(3, 14)) -> dict:
    """Computed membership flags for one corpus entry under the given budgets."""
    f = entry.function
    units = units or (classification_units("small") if f.intrinsic
                      else classification_units())
    flags = {}
    if entry.coeff_law is not None:
        flags.update(_law_flags(entry.coeff_law))
    else:
        h_units = units[: max(2, len(units) // 3)]
        h1 = hardy_norm(f, 1.0, h_units, ladder=ladder)
        h2 = hardy_norm(f, 2.0, h_units, ladder=ladder)
        flags["H1"] = not h1.flags["diverged"]
        flags["H2"] = not h2.flags["diverged"]
        curve = None
        for u in units:
            c, _, _ = oscillation_curve(f, u, arcs, r_boundary)
            curve = c if curve is None else np.maximum(curve, c)
        bmo, vmo = bmo_vmo_from_curve(curve)
        flags["BMOSH"], flags["VMOSH"] = bmo, vmo
        flags["_oscillation_curve"] = curve.tolist()
        # Bloch classes from the weighted-derivative ladder
        rep = bloch_norm(f, units[: max(2, len(units) // 3)])
        little_curve = np.asarray(rep.metadata["little_bloch_curve"])
        grown = radial_limit(little_curve).diverged
        flags["Bloch"] = not grown
        flags["littleBloch"] = bool(not grown and little_curve[-1] < 1e-2 *
                                    (1.0 + rep.metadata["value_one_minus_sq"])
                                    and little_curve[-1] <= little_curve[-2] + 1e-12)
        # Dirichlet by radial refinement of the slice energy; the angular
        # grid must resolve the shrinking peak width of singular kernels
        from .quadrature import integrate_disk
        plane = f.derivative().restriction(units[0])
        energies = []
        for m in range(4, 11):
            n_ang = max(256, 2 ** (m + 3)) if f.singular_boundary else 256
            rule = DiskRule(n_radial=96, n_angular=n_ang, r_hi=1.0 - 0.5 ** m)
            energies.append(integrate_disk(lambda x0, x1: plane.abs2(x0 + 1j * x1), rule))
        flags["Dirichlet"] = not radial_limit(energies).diverged
        flags["_dirichlet_ladder"] = [float(e) for e in energies]
    return flags


def verdict_mismatches(entry: CorpusEntry, computed: dict):
    """Expected-vs-computed differences, skipping unasserted expectations."""
    out = []
    for name in FLAG_NAMES:
        want = entry.expected.get(name)
        if want is None:
            continue
        if bool(computed.get(name)) != bool(want):
            out.append((name, want, computed.get(name)))
    return out
