from .decompose import decompose_op, decompose_swaps, decompose_to_native
from .layout import Layout, LayoutError, initial_layout, sabre_layout, trivial_layout
from .optimize import optimize, optimize_with_permutation
from .outcome import OPT_LEVELS, ROUTERS, SabreParams, TranspileConfig, TranspileOutcome
from .pipeline import transpile
from .routing import RoutingError, route, uncoupled_gates

__all__ = [
    "Layout", "LayoutError", "OPT_LEVELS", "ROUTERS", "RoutingError", "SabreParams",
    "TranspileConfig", "TranspileOutcome", "decompose_op", "decompose_swaps",
    "decompose_to_native", "initial_layout", "optimize", "optimize_with_permutation",
    "route", "sabre_layout", "transpile", "trivial_layout", "uncoupled_gates",
]
