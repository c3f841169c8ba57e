"""Exact search and explicit constructions for 0/1 matrices without all-zero
k x k minors, and for point sets hitting every box of an N x N x N grid."""
from .matrix import (
    BinaryMatrix,
    DimensionError,
    MatrixFormatError,
    block_diag,
    common_zero_columns,
    parse_matrix,
    permute,
    serialize_matrix,
    transpose,
)
from ._backend import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BinaryMatrix",
    "DimensionError",
    "MatrixFormatError",
    "block_diag",
    "common_zero_columns",
    "parse_matrix",
    "permute",
    "serialize_matrix",
    "transpose",
]
