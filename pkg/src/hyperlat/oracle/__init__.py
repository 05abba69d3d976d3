"""Independent reference implementations used to certify the main modules."""

from .disc import DiscTriangulation, enumerate_disc_triangulations
from .exhaustive import connecting_counts, exhaustive_percolation
from .subgraphs import count_connected_subgraphs, enumerate_connected_subgraphs

__all__ = [
    "DiscTriangulation",
    "connecting_counts",
    "count_connected_subgraphs",
    "enumerate_connected_subgraphs",
    "enumerate_disc_triangulations",
    "exhaustive_percolation",
]
