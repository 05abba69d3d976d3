"""Percolation thresholds and isoperimetry on planar lattices of large degree.

Balls of the regular tessellations H_{d,3} and H_{d,4}, the outer interfaces of
finite clusters, exact threshold bounds and Monte Carlo site percolation.
"""

from .errors import BudgetExceeded, HyperlatError, TooCloseToRim
from .interfaces import InterfacePair, enumerate_pairs, interface_of, reconstruct
from .isoperimetry import alpha, cheeger_sequence, min_vertex_cut, threshold_bounds, volume_bound
from .percolation import cluster_interface_stats, connection_probability, sample_instance, sweep
from .planar_map import PlanarMap, build_from_rotation
from .tessellation import LatticeBall, build_ball

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "HyperlatError",
    "InterfacePair",
    "LatticeBall",
    "PlanarMap",
    "TooCloseToRim",
    "alpha",
    "build_ball",
    "build_from_rotation",
    "cheeger_sequence",
    "cluster_interface_stats",
    "connection_probability",
    "enumerate_pairs",
    "interface_of",
    "min_vertex_cut",
    "reconstruct",
    "sample_instance",
    "sweep",
    "threshold_bounds",
    "volume_bound",
]
