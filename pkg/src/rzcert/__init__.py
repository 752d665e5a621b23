"""rzcert: certify real-zero polynomials, test interlacing via Bezoutiants
and Hermite matrices, and construct + verify positive self-adjoint
determinantal (LMI) representations of plane curves."""

__version__ = "0.1.0"

from .poly import (HomogeneousPolynomial, PolyMatrix, Polynomial,
                   ProjectivePoint, UnivariatePolynomial, dehomogenize,
                   directional_derivative, exact_divide, homogenize,
                   restrict_to_line, reversed_restriction)
from .realroots import RootList, all_real, power_sums, real_roots, sturm_count
from .rz import (HermiteMatrix, RzVerdict, hermite_matrix, hermite_psd_check,
                 is_rz_sampled, membership, renegar_derivative)
from .interlace import (bezout_matrix, bezoutiant_field, common_zero_count,
                        interlaces_sampled, psd_interlacing_check)
from .pencil import (MatrixPencil, cauchy_cross_check, derdet_check, det_poly,
                     eigenspace_orthogonality_check, pairing_check, realify,
                     verify_lmi)
from .detrep import (ConstructionError, ConstructionTrace, Divisor, construct,
                     extract_pencil, fill_matrix, intersection_divisor,
                     normalize_at_basepoint, split_divisor, vanishing_basis)
from .report import VerdictReport
from . import corpus

__all__ = [
    "HomogeneousPolynomial", "PolyMatrix", "Polynomial", "ProjectivePoint",
    "UnivariatePolynomial", "dehomogenize", "directional_derivative",
    "exact_divide", "homogenize", "restrict_to_line", "reversed_restriction",
    "RootList", "all_real", "power_sums", "real_roots", "sturm_count",
    "HermiteMatrix", "RzVerdict", "hermite_matrix", "hermite_psd_check",
    "is_rz_sampled", "membership", "renegar_derivative",
    "bezout_matrix", "bezoutiant_field", "common_zero_count",
    "interlaces_sampled", "psd_interlacing_check",
    "MatrixPencil", "cauchy_cross_check", "derdet_check", "det_poly",
    "eigenspace_orthogonality_check", "pairing_check", "realify", "verify_lmi",
    "ConstructionError", "ConstructionTrace", "Divisor", "construct",
    "extract_pencil", "fill_matrix", "intersection_divisor",
    "normalize_at_basepoint", "split_divisor", "vanishing_basis",
    "VerdictReport", "corpus",
]
