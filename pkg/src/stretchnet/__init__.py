"""Certified edge unfoldings (nets) of convex polyhedra via axis stretching."""

from .errors import UnfoldError
from .mesh import Polyhedron, load_off, export_off
from .pipeline import UnfoldRun, stretch_and_unfold
from .transform import Stretch, apply_stretch, plan_stretch
from .tree import SpanningTree, TieRule, build_increasing_tree
from .unfold import boundary_curve, cut, develop, export_json, export_svg
from .verdict import Status, Verdict
from .verify import certify_net

__all__ = [
    "UnfoldError",
    "Polyhedron",
    "load_off",
    "export_off",
    "UnfoldRun",
    "stretch_and_unfold",
    "Stretch",
    "apply_stretch",
    "plan_stretch",
    "SpanningTree",
    "TieRule",
    "build_increasing_tree",
    "boundary_curve",
    "cut",
    "develop",
    "export_json",
    "export_svg",
    "Status",
    "Verdict",
    "certify_net",
]

__version__ = "0.1.0"
