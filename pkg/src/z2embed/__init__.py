"""Z2-embeddings of k-complexes into 2k-manifolds via GF(2) linear algebra."""

from .complexes import Graph, JoinComplex
from .conditions import KnComplex
from .gram import OmegaKind, OmegaSpec
from .search import Certificate, decide, parse_complex, tabulate_min_beta, verify

__all__ = [
    "Certificate",
    "Graph",
    "JoinComplex",
    "KnComplex",
    "OmegaKind",
    "OmegaSpec",
    "decide",
    "parse_complex",
    "tabulate_min_beta",
    "verify",
]
__version__ = "0.1.0"
