from .cell_graph import CellGraph, build_knn_graph
from .dump import GRAPH_DUMP_VERSION, GraphDump, graph_dump_document, read_graph_dump, write_graph_dump
from .laplacian import LinkMarkers, canonicalize_signs, laplacian_markers, link_markers, normalized_laplacian

__all__ = [
    "GRAPH_DUMP_VERSION",
    "CellGraph",
    "GraphDump",
    "LinkMarkers",
    "build_knn_graph",
    "canonicalize_signs",
    "graph_dump_document",
    "laplacian_markers",
    "link_markers",
    "normalized_laplacian",
    "read_graph_dump",
    "write_graph_dump",
]
