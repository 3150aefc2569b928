"""JSON wire formats for quaternions, function specs, and measure specs."""

from __future__ import annotations

import json
import math

import numpy as np

from .carleson import (DerivedMeasureSpec, SliceDecomposedMeasure, decompose_density,
                       derived_measure, escalating_pointmass_measure, pointmass_measure)
from .corpus import gap_series_function, inv_sqrt_function, log_kernel_function
from .quaternion import Quaternion, imaginary_unit
from .slicefun import PowerSeriesFunction, SliceFunction


def quaternion_to_json(q: Quaternion):
    return q.to_list()


def quaternion_from_json(data) -> Quaternion:
    if not isinstance(data, (list, tuple)) or len(data) != 4:
        raise ValueError("quaternion must be a 4-element array [w, x1, x2, x3]")
    return Quaternion(*[float(v) for v in data])


def function_from_spec(spec: dict) -> SliceFunction:
    """Build a slice function from its JSON spec.

    Recognized types: power_series, log_alpha, inv_sqrt_one_plus_s, gap_series.
    """
    kind = spec.get("type")
    if kind == "power_series":
        coeffs = [quaternion_from_json(c) for c in spec["coeffs"]]
        return PowerSeriesFunction(coeffs, r_max=float(spec.get("r_max", 1.0 - 2.0 ** -20)))
    if kind == "log_alpha":
        unit = imaginary_unit(quaternion_from_json(spec.get("unit", [0, 1, 0, 0])))
        return log_kernel_function(float(spec["alpha"]), unit)
    if kind == "inv_sqrt_one_plus_s":
        return inv_sqrt_function()
    if kind == "gap_series":
        return gap_series_function(spec["exponents"], spec["coeffs"])
    raise ValueError(f"unknown function spec type {kind!r}")


def function_spec_from_file(path) -> SliceFunction:
    with open(path) as fh:
        return function_from_spec(json.load(fh))


_DERIVED = ("mu_f", "nu_f", "naive_mu_f", "naive_nu_f")


def measure_from_spec(spec: dict) -> SliceDecomposedMeasure:
    """Build a measure from its JSON spec.

    Recognized types: point_masses, density (lambda4 or a derived measure of a
    function spec), paper_example_pointmass (the escalating point-mass family;
    the type tag is part of the wire format).
    """
    kind = spec.get("type")
    if kind == "point_masses":
        atoms = [(quaternion_from_json(a["point"]), float(a["mass"]))
                 for a in spec["atoms"]]
        return pointmass_measure(atoms)
    if kind == "density":
        name = spec.get("name", "lambda4")
        if name == "lambda4":
            return decompose_density(lambda s0, s1, u: np.ones(np.broadcast(s0, s1).shape),
                                     name="lambda4")
        if name in _DERIVED:
            f = function_from_spec(spec["function"])
            return derived_measure(DerivedMeasureSpec(name, f))
        raise ValueError(f"unknown density name {name!r}")
    if kind == "paper_example_pointmass":
        return escalating_pointmass_measure(int(spec.get("n_max", 100000)))
    raise ValueError(f"unknown measure spec type {kind!r}")


def measure_spec_from_file(path) -> SliceDecomposedMeasure:
    with open(path) as fh:
        return measure_from_spec(json.load(fh))
