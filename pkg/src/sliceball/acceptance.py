"""The acceptance battery: one callable per criterion, shared by CLI and tests.

Each check returns a CheckResult with a pass flag and enough detail to audit
the numbers.  Budgets are the library defaults unless a criterion pins its
own (arc depth, ladder depth, unit counts, tolerances are all stated inline).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .carleson import (CarlesonBox, DerivedMeasureSpec, carleson_constant,
                       decompose_density, derived_measure,
                       escalating_pointmass_measure, slice_carleson_constant)
from .corpus import (build_corpus, classify, classification_units, verdict_mismatches,
                     inv_sqrt_function)
from .moebius import MoebiusParam, moebius_complex, moebius_compose
from .norms import (ArcFamily, R_BOUNDARY, bmo_seminorm_slice, dirichlet_inner,
                    dual_pairing, hardy2_coeff, hardy_norm, star_grid, star_seminorm)
from .quadrature import integrate_ball4d
from .quaternion import Quaternion, sample_sphere, to_slice
from .slicefun import PowerSeriesFunction, representation_formula

E1 = Quaternion(0.0, 1.0)


@dataclass
class CheckResult:
    check_id: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.check_id} ({self.elapsed:.1f}s)"


def _series_entries(corpus=None, max_degree=150):
    corpus = corpus or build_corpus()
    out = []
    for e in corpus:
        if e.is_series and e.function.degree <= max_degree:
            out.append(e)
    return out


# -- criterion 1 ---------------------------------------------------------------

def check_pointmass_counterexample(n_max: int = 100000) -> CheckResult:
    t0 = time.time()
    m = escalating_pointmass_measure(n_max)
    partial = sum(l ** -1.5 for l in range(2, 1001))
    rows = []
    ok = True
    for n in (4, 16, 64, 256, 1024):
        ratio = m.symmetric_box_mass(CarlesonBox(math.pi / 2.0, 1.0 / n)) * n
        bound = math.sqrt(n) * partial
        good = ratio >= bound - 1e-9
        ok &= good
        rows.append({"n": n, "ratio": ratio, "lower_bound": bound, "ok": good})
    sc = slice_carleson_constant(m)
    for n in (4, 16, 64, 256, 1024):
        c = sc["per_unit"][n - 1]["constant"]
        good = abs(c - n) <= 1e-9
        ok &= good
        rows.append({"slice_constant_n": n, "constant": c, "ok": good})
    ok &= sc["uniform_slice_carleson"] is False
    elapsed = time.time() - t0
    ok &= elapsed < 10.0
    return CheckResult("pointmass-counterexample", ok,
                       {"rows": rows, "uniform_verdict": sc["uniform_slice_carleson"],
                        "runtime_budget_s": 10.0}, elapsed)


# -- criterion 2 ---------------------------------------------------------------

def check_inv_sqrt_counterexample() -> CheckResult:
    t0 = time.time()
    f = inv_sqrt_function()
    rep = hardy_norm(f, 2.0, [E1], ladder=(3, 14))
    ok = bool(rep.flags["diverged"])
    details = {"h2_ladder": rep.per_slice[0]["ladder"], "h2_diverged": rep.flags["diverged"]}
    plane = f.derivative().restriction(E1)
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(1000):
        r = rng.uniform(0.02, 0.95)
        t = rng.uniform(0.05, math.pi - 0.05)
        z = -1.0 + r * np.exp(1j * t)
        if abs(z) >= 1.0 - 1e-9:
            continue
        lhs = (1.0 - abs(z) ** 2) * z.imag ** 2 * float(plane.abs2(np.array([z]))[0])
        rhs = 0.25 * (2.0 * math.cos(t) - r) * math.sin(t) ** 2
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    ok &= worst <= 1e-10
    details["density_bound_rel_err"] = worst
    repn = carleson_constant(derived_measure(DerivedMeasureSpec("naive_mu_f", f)))
    ok &= repn.verdicts["carleson"] and math.isfinite(repn.constant)
    details["naive_carleson"] = repn.verdicts
    details["naive_constant"] = repn.constant
    elapsed = time.time() - t0
    ok &= elapsed < 60.0
    return CheckResult("inv-sqrt-counterexample", ok, details, elapsed)


# -- criterion 3 ---------------------------------------------------------------

def check_bmo_factor2(n_units: int = 20) -> CheckResult:
    t0 = time.time()
    units = sample_sphere(n_units, "golden")
    arcs = ArcFamily(12, 4)
    ok = True
    rows = []
    for e in build_corpus():
        vals = [bmo_seminorm_slice(e.function, u, arcs) for u in units]
        g = max(vals)
        lo = min(vals)
        good = all(v <= g + 1e-12 and g <= 2.0 * v + 1e-6 for v in vals)
        ok &= good
        rows.append({"id": e.id, "min_slice": lo, "global": g, "ok": good})
    elapsed = time.time() - t0
    ok &= elapsed < 300.0
    return CheckResult("bmo-factor2", ok, {"rows": rows}, elapsed)


# -- criterion 4 ---------------------------------------------------------------

def _component_series(f: PowerSeriesFunction, i, j):
    """Split components as quaternion series valued in the plane of i."""
    from .quaternion import combine_basis
    from .slicefun import split
    sp = split(f, i, j)
    c1 = [combine_basis(complex(c), 0j, i, j) for c in sp.coeffs1]
    c2 = [combine_basis(complex(c), 0j, i, j) for c in sp.coeffs2]
    f1 = PowerSeriesFunction(c1, r_max=f.r_max, exponents=sp.coeff_exponents)
    f2 = PowerSeriesFunction(c2, r_max=f.r_max, exponents=sp.coeff_exponents)
    return f1, f2


def check_sandwich() -> CheckResult:
    t0 = time.time()
    i, j = E1, Quaternion(0.0, 0.0, 1.0)
    arcs = ArcFamily(12, 4)
    ok = True
    rows = []
    for e in _series_entries():
        f = e.function
        f1, f2 = _component_series(f, i, j)
        whole = abs(f.value_at_zero()) + bmo_seminorm_slice(f, i, arcs)
        comp = [abs(g.value_at_zero()) + bmo_seminorm_slice(g, i, arcs) for g in (f1, f2)]
        good = all(c <= whole + 1e-8 for c in comp) and whole <= sum(comp) + 1e-8
        ok &= good
        row = {"id": e.id, "bmo_whole": whole, "bmo_components": comp, "bmo_ok": good}
        for p in (1.0, 2.0):
            hw = hardy_norm(f, p, [i]).value
            hc = [hardy_norm(g, p, [i]).value for g in (f1, f2)]
            goodp = all(c <= hw + 1e-8 for c in hc)
            ok &= goodp
            row[f"hardy_p{int(p)}_ok"] = goodp
        rows.append(row)
    return CheckResult("sandwich-inequalities", ok, {"rows": rows}, time.time() - t0)


# -- criterion 5 ---------------------------------------------------------------

def check_parseval() -> CheckResult:
    t0 = time.time()
    ok = True
    rows = []
    for e in _series_entries():
        f = e.function
        rep = hardy_norm(f, 2.0, [E1], ladder=(3, 14))
        coeff = hardy2_coeff(f)
        err = abs(rep.value - coeff)
        good = err <= 1e-8 * (1.0 + coeff)
        ok &= good
        rows.append({"id": e.id, "quad": rep.value, "coeff": coeff, "err": err, "ok": good})
    return CheckResult("parseval-oracle", ok, {"rows": rows}, time.time() - t0)


# -- criterion 6 ---------------------------------------------------------------

def check_dirichlet() -> CheckResult:
    t0 = time.time()
    ok = True
    worst_diag = 0.0
    for n in range(1, 65):
        f = PowerSeriesFunction.monomial(n)
        out = dirichlet_inner(f, f, E1, check_stability=False)
        want = math.pi * n
        err = max(abs(abs(out["quadrature"]) - want), abs(abs(out["coefficient"]) - want))
        worst_diag = max(worst_diag, err / want)
        ok &= err <= 1e-8 * want
    worst_cross = 0.0
    units = sample_sphere(6, "axes")
    for n in (3, 17, 40):
        f = PowerSeriesFunction.monomial(n)
        vals = [dirichlet_inner(f, f, u, check_stability=False)["quadrature"] for u in units]
        spread = max(abs(vals[0] - v) for v in vals)
        worst_cross = max(worst_cross, spread)
        ok &= spread <= 1e-10 * (1.0 + math.pi * n)
    worst_off = 0.0
    rng = np.random.default_rng(23)
    for _ in range(20):
        n, mdeg = rng.integers(0, 33, size=2)
        if n == mdeg:
            continue
        out = dirichlet_inner(PowerSeriesFunction.monomial(int(n)),
                              PowerSeriesFunction.monomial(int(mdeg)), E1,
                              check_stability=False)
        worst_off = max(worst_off, abs(out["quadrature"]))
        ok &= abs(out["quadrature"]) <= 1e-10
    return CheckResult("dirichlet-identities", ok,
                       {"worst_diag_rel": worst_diag, "worst_cross_slice": worst_cross,
                        "worst_offdiag": worst_off}, time.time() - t0)


# -- criterion 7 ---------------------------------------------------------------

def check_pairing() -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(31)
    units = sample_sphere(6, "axes")
    ok = True
    worst_val = 0.0
    worst_slice = 0.0
    for _ in range(50):
        n, mdeg = (int(v) for v in rng.integers(0, 40, size=2))
        a = Quaternion(*rng.uniform(-1, 1, 4))
        b = Quaternion(*rng.uniform(-1, 1, 4))
        f = PowerSeriesFunction.monomial(n, a)
        g = PowerSeriesFunction.monomial(mdeg, b)
        out = dual_pairing(f, g, E1, ladder=(3, 10))
        want = a.conjugate() * b if n == mdeg else Quaternion()
        err = abs(out["value"] - want)
        worst_val = max(worst_val, err)
        ok &= err <= 1e-10
    for n in (0, 5, 21):
        a = Quaternion(*rng.uniform(-1, 1, 4))
        b = Quaternion(*rng.uniform(-1, 1, 4))
        f = PowerSeriesFunction.monomial(n, a)
        g = PowerSeriesFunction.monomial(n, b)
        quads = [dual_pairing(f, g, u, ladder=(3, 10))["quadrature"] for u in units]
        spread = max(abs(quads[0] - q) for q in quads)
        worst_slice = max(worst_slice, spread)
        ok &= spread <= 1e-10
    return CheckResult("pairing-identity", ok,
                       {"worst_value_err": worst_val, "worst_slice_spread": worst_slice},
                       time.time() - t0)


# -- criterion 8 ---------------------------------------------------------------

def check_representation() -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(41)
    units = sample_sphere(6, "axes")
    ok = True
    worst = 0.0
    for e in _series_entries(max_degree=5000):
        f = e.function
        pts = []
        while len(pts) < 100:
            q = Quaternion(*rng.uniform(-1, 1, 4))
            if abs(q) <= 0.99:
                pts.append(q)
        for i in units:
            plane = f.restriction(i)
            for x in pts:
                direct = f.evaluate(x)
                recon = representation_formula(plane, i, x)
                rel = abs(direct - recon) / (1.0 + abs(direct))
                worst = max(worst, rel)
                ok &= rel <= 1e-10
    return CheckResult("representation-formula", ok, {"worst_rel_err": worst},
                       time.time() - t0)


# -- criterion 9 ---------------------------------------------------------------

def check_moebius_invariance() -> CheckResult:
    t0 = time.time()
    corpus = {e.id: e.function for e in build_corpus()}
    funcs = [("identity", corpus["identity"]),
             ("monomial5_e2", corpus["monomial5_e2"]),
             ("poly_random", corpus["poly_random"]),
             ("log_alpha_0.7", corpus["log_alpha_0.7"]),
             ("moebius_real", corpus["moebius_real"])]
    b = 0.5 * np.exp(1j * math.pi / 6.0)
    pb = MoebiusParam(complex(b), E1)
    base = star_grid()
    grid_f = list(base) + [complex(moebius_complex(complex(b), a)) for a in base]
    grid_fb = list(base) + [complex(moebius_complex(complex(-b), a)) for a in base]
    ok = True
    rows = []
    for name, f in funcs:
        sf = star_seminorm(f, E1, grid_f)
        sfb = star_seminorm(moebius_compose(f, pb), E1, grid_fb)
        rel = abs(sf - sfb) / max(sf, 1e-12)
        good = rel <= 0.05
        ok &= good
        rows.append({"id": name, "star_f": sf, "star_f_composed": sfb,
                     "rel_diff": rel, "ok": good})
    return CheckResult("moebius-invariance", ok, {"rows": rows, "b": [b.real, b.imag]},
                       time.time() - t0)


# -- criterion 10 --------------------------------------------------------------

def check_verdict_matrix() -> CheckResult:
    t0 = time.time()
    ok = True
    rows = []
    for e in build_corpus():
        flags = classify(e)
        mism = verdict_mismatches(e, flags)
        good = not mism
        row = {"id": e.id, "mismatches": mism, "classify_ok": good}
        if e.coeff_law is None:
            mu = derived_measure(DerivedMeasureSpec("mu_f", e.function))
            rep = carleson_constant(mu)
            row["mu_f_verdicts"] = rep.verdicts
            good &= rep.verdicts["carleson"] == bool(flags["BMOSH"])
            good &= rep.verdicts["vanishing"] == bool(flags["VMOSH"])
        ok &= good
        row["ok"] = good
        rows.append(row)
    elapsed = time.time() - t0
    ok &= elapsed < 900.0
    return CheckResult("verdict-matrix", ok, {"rows": rows}, elapsed)


# -- criterion 11 --------------------------------------------------------------

def check_decomposition_identity() -> CheckResult:
    t0 = time.time()
    shape = lambda s0, s1: np.broadcast(np.asarray(s0), np.asarray(s1)).shape
    ident_plane = PowerSeriesFunction.monomial(1)

    densities = {
        "lambda4": lambda s0, s1, u: np.ones(shape(s0, s1)),
        "poly": lambda s0, s1, u: 1.0 + s0 * s0,
        "bump": lambda s0, s1, u: 1.0 - (s0 * s0 + s1 * s1),
        "gauss": lambda s0, s1, u: np.exp(-(s0 * s0 + s1 * s1)),
        "mu_f_identity": lambda s0, s1, u: (1.0 - (s0 * s0 + s1 * s1)) /
                                           np.maximum(s1 * s1, 1e-300),
    }
    integrands = {
        "one": lambda s0, s1, u: np.ones(shape(s0, s1)),
        "poly01": lambda s0, s1, u: s0 * s0 * (1.0 + s1),
        "slice_weighted": lambda s0, s1, u: s1 * s1 * (u[2] ** 2),
    }
    ok = True
    rows = []
    for dname, rho in densities.items():
        m = decompose_density(rho, name=dname)
        for gname, g in integrands.items():
            dec = m.integrate(g)
            direct = integrate_ball4d(
                lambda s0, s1, units, _r=rho, _g=g:
                np.stack([np.asarray(_r(s0[:, 0], s1[:, 0], u) *
                                     _g(s0[:, 0], s1[:, 0], u)) for u in units], axis=-1))
            rel = abs(dec - direct) / max(abs(direct), 1e-14)
            good = rel <= 1e-6
            ok &= good
            rows.append({"density": dname, "integrand": gname, "decomposed": dec,
                         "direct": direct, "rel_err": rel, "ok": good})
    lam = decompose_density(densities["lambda4"], name="lambda4")
    vol = lam.integrate(integrands["one"])
    good = abs(vol - math.pi ** 2 / 2.0) <= 1e-6 * math.pi ** 2 / 2.0
    ok &= good
    rows.append({"density": "lambda4", "integrand": "one", "volume": vol,
                 "expect": math.pi ** 2 / 2.0, "ok": good})
    return CheckResult("decomposition-identity", ok, {"rows": rows}, time.time() - t0)


# -- criterion 12 --------------------------------------------------------------

def check_sc_to_c() -> CheckResult:
    t0 = time.time()
    corpus = {e.id: e.function for e in build_corpus()}
    shape = lambda s0, s1: np.broadcast(np.asarray(s0), np.asarray(s1)).shape
    measures = [
        decompose_density(lambda s0, s1, u: np.ones(shape(s0, s1)), name="lambda4"),
        derived_measure(DerivedMeasureSpec("mu_f", corpus["identity"])),
        derived_measure(DerivedMeasureSpec("mu_f", corpus["poly_random"])),
        derived_measure(DerivedMeasureSpec("mu_f", corpus["log_alpha_0.7"])),
        derived_measure(DerivedMeasureSpec("naive_mu_f", corpus["inv_sqrt"])),
        escalating_pointmass_measure(20000),
    ]
    ok = True
    rows = []
    for m in measures:
        rep = carleson_constant(m)
        if m.slice_density is not None:
            pts, _ = m.sphere_rule.nodes()
            units = [Quaternion(0.0, *p) for p in pts]
            sc = slice_carleson_constant(m, theta_grid=rep.theta_grid,
                                         h_rungs=rep.h_rungs, units=units)
        else:
            sc = slice_carleson_constant(m)
        nu = m.nu_total()
        lhs = rep.constant
        rhs = (1.0 + nu) * sc["uniform_constant"] * (1.0 + 1e-6)
        good = lhs <= rhs
        ok &= good
        rows.append({"measure": m.name, "global_constant": lhs,
                     "uniform_slice_constant": sc["uniform_constant"],
                     "nu_total": nu, "bound": rhs, "ok": good})
    return CheckResult("sc-to-c-bookkeeping", ok, {"rows": rows}, time.time() - t0)


ALL_CHECKS = [
    ("pointmass-counterexample", check_pointmass_counterexample),
    ("inv-sqrt-counterexample", check_inv_sqrt_counterexample),
    ("bmo-factor2", check_bmo_factor2),
    ("sandwich-inequalities", check_sandwich),
    ("parseval-oracle", check_parseval),
    ("dirichlet-identities", check_dirichlet),
    ("pairing-identity", check_pairing),
    ("representation-formula", check_representation),
    ("moebius-invariance", check_moebius_invariance),
    ("verdict-matrix", check_verdict_matrix),
    ("decomposition-identity", check_decomposition_identity),
    ("sc-to-c-bookkeeping", check_sc_to_c),
]


def run_suite(only=None):
    results = []
    for name, fn in ALL_CHECKS:
        if only and name != only:
            continue
        results.append(fn())
    return results
