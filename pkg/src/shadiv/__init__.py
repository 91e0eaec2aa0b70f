"""shadiv: certified (non-)divisibility of Tate-Shafarevich elements.

A toolkit for explicit 2-descent on elliptic curves with full rational
2-torsion, everywhere-local analysis of genus-1 homogeneous spaces, and
the prime-condition calculus for cyclic covers y^p = c f(x), with
replayable JSON certificates for every verdict.
"""

from .arith import FiniteField, build_residue_field, factorize, is_prime, jacobi
from .cyclic import (
    KummerFamily,
    ObstructionCertificate,
    admissible,
    genus,
    local_factor_check,
    local_factor_scan,
    obstruction_prime_search,
    tau_parity,
)
from .descent import (
    CurveE2,
    GlobalClass,
    SelmerGroup,
    delta_of_point,
    local_image,
    search_points,
    selmer2,
    sha2_classes,
    torsion_image_set,
)
from .divisibility import (
    certify_nondivisibility,
    classify_sha_lifts,
    l_value_approx,
    locally_in_e4_kernel,
    search_4div,
    verify_everywhere,
)
from .errors import ShadivError
from .homspaces import (
    ConicPair,
    QuarticCover,
    conic_pair_solvable_at,
    quartic_els,
    quartic_solvable_at,
)
from .localfields import Place, SquareClass, hensel_roots, square_class

__version__ = "0.1.0"

__all__ = [
    "CurveE2",
    "ConicPair",
    "FiniteField",
    "GlobalClass",
    "KummerFamily",
    "ObstructionCertificate",
    "Place",
    "QuarticCover",
    "SelmerGroup",
    "ShadivError",
    "SquareClass",
    "admissible",
    "build_residue_field",
    "certify_nondivisibility",
    "classify_sha_lifts",
    "conic_pair_solvable_at",
    "delta_of_point",
    "factorize",
    "genus",
    "hensel_roots",
    "is_prime",
    "jacobi",
    "l_value_approx",
    "local_factor_check",
    "local_factor_scan",
    "local_image",
    "locally_in_e4_kernel",
    "obstruction_prime_search",
    "quartic_els",
    "quartic_solvable_at",
    "search_4div",
    "search_points",
    "selmer2",
    "sha2_classes",
    "square_class",
    "tau_parity",
    "torsion_image_set",
    "verify_everywhere",
]
