"""Temporal alpha-shapes: every alpha-shape of every time window, precomputed
into a minimal cuboid description and served through stabbing queries."""

from .archive import Archive, read_archive, write_archive
from .boxtree import BoxTree, build as build_box_tree
from .datasets import Dataset, gen_swarm, ingest_csv
from .delaunay import alpha_edges_of_window, build_delaunay
from .enumeration import enumerate_all, enumerate_all_oracle
from .estimator import TemporalAlphaShape, check_points
from .geometry import TimedPoint
from .staircase import CuboidSet, temporal_alpha_shape

__all__ = [
    "Archive",
    "BoxTree",
    "CuboidSet",
    "Dataset",
    "TemporalAlphaShape",
    "TimedPoint",
    "alpha_edges_of_window",
    "build_box_tree",
    "build_delaunay",
    "check_points",
    "enumerate_all",
    "enumerate_all_oracle",
    "gen_swarm",
    "ingest_csv",
    "read_archive",
    "temporal_alpha_shape",
    "write_archive",
]

__version__ = "0.1.0"
