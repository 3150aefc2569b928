"""Numerics for slice functions on the quaternionic unit ball.

Quaternion arithmetic, slice-function representations, Moebius maps,
deterministic quadrature, Hardy / mean-oscillation / Bloch / Dirichlet
functionals, Carleson box certification with slice decompositions, a
reference corpus, and a CLI.
"""

from .quaternion import (Quaternion, SliceCoordinates, assemble, combine_basis,
                         imaginary_unit, mul, orthonormal_frame, sample_sphere,
                         split_basis, to_slice)
from .slicefun import (PlaneFunction, PowerSeriesFunction, SliceFunction,
                       SlicewiseFunction, SplitPair, dilate, evaluate, i_compose,
                       recombine, representation_formula, restrict, slice_derivative,
                       split)
from .moebius import (MoebiusParam, moebius_check, moebius_complex, moebius_compose,
                      moebius_ext, moebius_verbatim)
from .quadrature import (CircleRule, DiskRule, SphereRule, integrate_circle,
                         integrate_disk, integrate_sphere, radial_ladder, radial_limit)
from .norms import (ArcFamily, NormReport, bloch_norm, bmo_norm, bmo_seminorm_global,
                    bmo_seminorm_slice, dirichlet_inner, dual_pairing, gap_series_check,
                    hardy2_coeff, hardy_norm, majorant_criterion, star_seminorm,
                    vmo_modulus)
from .carleson import (CarlesonBox, CarlesonReport, DerivedMeasureSpec,
                       SliceDecomposedMeasure, box_measure, carleson_constant,
                       decompose_density, derived_measure, escalating_pointmass_measure,
                       pointmass_measure, slice_carleson_constant)
from .corpus import CorpusEntry, build_corpus, classify
from .config import RunConfig

__version__ = "0.1.0"
