"""Small-matroid toolkit for N-connectivity: every pair of elements in a common N-minor."""

from __future__ import annotations

from .catalog import enumerate_classes, enumerate_up_to, named
from .connectivity import (
    connectivity_function,
    find_fans,
    is_k_connected,
    is_transitive,
    kappa,
    two_separations,
)
from .constructions import contract, delete, direct_sum, minor, parallel_connection, two_sum
from .core import Matroid, dual, from_bases, from_circuits, from_graph, uniform
from .isominor import has_minor_using, is_n_connected, isomorphic, pair_relation
from .kernels import BACKEND
from .treedecomp import DecompTree, canonical_tree, reconstruct

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DecompTree",
    "Matroid",
    "canonical_tree",
    "connectivity_function",
    "contract",
    "delete",
    "direct_sum",
    "dual",
    "enumerate_classes",
    "enumerate_up_to",
    "find_fans",
    "from_bases",
    "from_circuits",
    "from_graph",
    "has_minor_using",
    "is_k_connected",
    "is_n_connected",
    "is_transitive",
    "isomorphic",
    "kappa",
    "minor",
    "named",
    "pair_relation",
    "parallel_connection",
    "reconstruct",
    "two_separations",
    "two_sum",
    "uniform",
]
