"""Linear systems of curves through fat points on Hirzebruch surfaces F_n."""

from .curves import enumerate_homogeneous, is_minus_one_class, mult_one_catalogue
from .degeneration import DimCertificate, DegenerationSplit, Prover, prove_dimension, recombine_dim, split
from .errors import (
    FieldTooSmallError,
    InvalidInputError,
    NonTerminationError,
    NotEffectiveError,
    OpenCaseError,
    OutOfRangeError,
    ParseError,
    ScrollsysError,
    UnsupportedError,
)
from .lattice import (
    BlowupClass,
    DivisorClass,
    SystemSpec,
    expected_dim,
    format_system,
    intersect,
    parse_spec,
    parse_system,
    virtual_dim,
)
from .oracle import OracleReport, effective_dim_mc, is_special_mc, robust_report
from .reduction import classify_table1, is_minus_one_special, predicted_dim, reduce
from .transform import elementary_transform, elementary_transform_point

__version__ = "0.1.0"

__all__ = [
    "BlowupClass", "DegenerationSplit", "DimCertificate", "DivisorClass", "FieldTooSmallError",
    "InvalidInputError", "NonTerminationError", "NotEffectiveError", "OpenCaseError", "OracleReport",
    "OutOfRangeError", "ParseError", "Prover", "ScrollsysError", "SystemSpec", "UnsupportedError",
    "classify_table1", "effective_dim_mc", "elementary_transform", "elementary_transform_point",
    "enumerate_homogeneous", "expected_dim", "format_system", "intersect", "is_minus_one_class",
    "is_minus_one_special", "is_special_mc", "mult_one_catalogue", "parse_spec", "parse_system",
    "predicted_dim", "prove_dimension", "recombine_dim", "reduce", "robust_report", "split", "virtual_dim",
]
