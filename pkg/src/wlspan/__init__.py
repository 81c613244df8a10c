"""Weakly leveled planar drawings with bounded edge span."""
from .cycletree import draw_3conn_cycle_tree, draw_cycle_tree, recognize_cycle_tree
from .drawing import (
    PolylineDrawing,
    check_geometric,
    check_via_normalized,
    normalize,
    queue_layout,
    weak_to_strict,
)
from .errors import WlspanError
from .graph import Graph, MarkedGraph, PlaneGraph, build_graph, graph_from_edges
from .kernels import (
    component_equivalent,
    modulator_kernelize,
    threshold_check,
    treedepth_kernelize,
    vc_kernelize,
    vc_reinsert,
)
from .solver import decide_span, min_span_wlp

__version__ = "0.1.0"
