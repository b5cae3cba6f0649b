"""Classical number field sieve."""

from hybridgnfs.gnfs.linalg import RelationMatrix, preprocess_matrix, solve_nullspace
from hybridgnfs.gnfs.pipeline import FactorConfig, FactorReport, factor, nfs_split
from hybridgnfs.gnfs.polynomial import NfsPolynomial, norm, select_polynomial
from hybridgnfs.gnfs.relations import Relation, classical_relation_search, make_relation
from hybridgnfs.gnfs.sqrt import extract_factor

__all__ = [
    "FactorConfig",
    "FactorReport",
    "NfsPolynomial",
    "Relation",
    "RelationMatrix",
    "classical_relation_search",
    "extract_factor",
    "factor",
    "make_relation",
    "nfs_split",
    "norm",
    "preprocess_matrix",
    "select_polynomial",
    "solve_nullspace",
]
