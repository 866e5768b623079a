"""Images of noncommutative polynomials on 2x2 matrices.

Exact classification for multilinear polynomials, randomized
classification for semi-homogeneous ones, constructive witness synthesis
for any target in the classified image, and an exhaustive finite-field
oracle for cross-checks.
"""

__version__ = "0.1.0"

from .errors import (
    ArityError,
    BisectionStallError,
    ConstantTermError,
    DegeneratePathError,
    DomainError,
    MatImageError,
    NonUnitEntryError,
    NoOffdiagonalError,
    NoPlaneError,
    NotInImageError,
    NotMultilinearError,
    NoWeightProfileError,
    StructuralViolationError,
    PolyParseError,
    SeedFailureError,
    TooLargeError,
    ZeroTraceError,
)
from .mat2 import (
    FLOAT64,
    GF,
    GenericSampler,
    GFElement,
    Matrix2,
    RATIONAL,
    conjugate,
    conjugator,
    domain_from_name,
    sample_generic,
)
from .ncpoly import (
    NCPoly,
    WeightProfile,
    evaluate,
    is_multilinear,
    make_poly,
    parse,
    to_string,
    weight_profile,
)
from .mlclass import (
    ImageClassML,
    ImageLabel,
    SpanLabel,
    UnitTable,
    chi_flip,
    classify,
    locate_offdiagonal,
    unit_table,
)
from .witness import (
    DEFAULT_SEED,
    PlaneRealizer,
    WitnessCertificate,
    plane_realizer,
    ratio_seed_tuples,
    realize_in_plane,
    synthesize,
    witness_distinct_eigs,
    witness_trace_zero,
    witness_zero_discr,
)
from .shclass import SHLabel, SHSignature, classify_sh, dense_witness_pair, g_ratio
from .fforacle import (
    CrosscheckReport,
    FFImage,
    check_conjugation_closed,
    crosscheck_multilinear,
    enumerate_image,
)

__all__ = [
    "__version__",
    # errors
    "MatImageError",
    "PolyParseError",
    "ConstantTermError",
    "ArityError",
    "DomainError",
    "NotMultilinearError",
    "TooLargeError",
    "StructuralViolationError",
    "NoOffdiagonalError",
    "NoPlaneError",
    "NotInImageError",
    "SeedFailureError",
    "BisectionStallError",
    "DegeneratePathError",
    "ZeroTraceError",
    "NoWeightProfileError",
    "NonUnitEntryError",
    # mat2
    "RATIONAL",
    "FLOAT64",
    "GF",
    "GFElement",
    "Matrix2",
    "GenericSampler",
    "sample_generic",
    "conjugate",
    "conjugator",
    "domain_from_name",
    # ncpoly
    "NCPoly",
    "WeightProfile",
    "parse",
    "make_poly",
    "to_string",
    "evaluate",
    "is_multilinear",
    "weight_profile",
    # mlclass
    "ImageClassML",
    "ImageLabel",
    "SpanLabel",
    "UnitTable",
    "unit_table",
    "classify",
    "locate_offdiagonal",
    "chi_flip",
    # witness
    "DEFAULT_SEED",
    "PlaneRealizer",
    "WitnessCertificate",
    "plane_realizer",
    "realize_in_plane",
    "witness_trace_zero",
    "ratio_seed_tuples",
    "witness_distinct_eigs",
    "witness_zero_discr",
    "synthesize",
    # shclass
    "SHLabel",
    "SHSignature",
    "g_ratio",
    "classify_sh",
    "dense_witness_pair",
    # fforacle
    "FFImage",
    "CrosscheckReport",
    "enumerate_image",
    "check_conjugation_closed",
    "crosscheck_multilinear",
]
