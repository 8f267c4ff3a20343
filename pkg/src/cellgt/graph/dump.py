from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from cellgt.exceptions import CorpusParseError
from cellgt.graph.cell_graph import CellGraph
from cellgt.graph.laplacian import LinkMarkers

__all__ = (
    "GRAPH_DUMP_VERSION",
    "GraphDump",
    "graph_dump_document",
    "read_graph_dump",
    "write_graph_dump",
)

GRAPH_DUMP_VERSION = 1

_FIELDS = ("format_version", "n", "k", "k_effective", "centroids", "edge_list", "eigenvalues", "markers")


@dataclass(frozen=True)
class GraphDump:
    n: int
    k: int
    k_effective: int
    centroids: list[list[float]]
    edge_list: list[list[int]]
    eigenvalues: list[float]
    markers: list[list[float]]
    sample_id: str = ""


def graph_dump_document(graph: CellGraph, markers: LinkMarkers, sample_id: str = "") -> dict[str, Any]:
    return {
        "format_version": GRAPH_DUMP_VERSION,
        "sample_id": sample_id,
        "n": graph.n,
        "k": graph.requested_k,
        "k_effective": graph.k,
        "centroids": graph.centroids.tolist(),
        "edge_list": graph.edge_list.tolist(),
        "eigenvalues": markers.eigenvalues.tolist(),
        "markers": markers.markers.tolist(),
    }


def write_graph_dump(path: str | Path, graph: CellGraph, markers: LinkMarkers, sample_id: str = "") -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    document = graph_dump_document(graph, markers, sample_id)
    target.write_text(json.dumps(document, indent=1) + "\n", encoding="utf-8")
    return target


def read_graph_dump(path: str | Path) -> GraphDump:
    source = Path(path)
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CorpusParseError("graph dump not found", path=str(source)) from None
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"invalid JSON ({exc.msg})", path=str(source)) from exc

    for name in _FIELDS:
        if name not in raw:
            raise CorpusParseError("missing field", path=str(source), field=name)
    if raw["format_version"] != GRAPH_DUMP_VERSION:
        raise CorpusParseError(f"unsupported version {raw['format_version']!r}", path=str(source), field="format_version")

    n = int(raw["n"])
    edges = raw["edge_list"]
    if len(raw["centroids"]) != n or len(raw["markers"]) != n or len(raw["eigenvalues"]) != n:
        raise CorpusParseError("row count does not match n", path=str(source), field="n")
    if edges and (np.asarray(edges).min() < 0 or np.asarray(edges).max() >= n):
        raise CorpusParseError("edge index out of range", path=str(source), field="edge_list")

    return GraphDump(
        n=n,
        k=int(raw["k"]),
        k_effective=int(raw["k_effective"]),
        centroids=[[float(x), float(y)] for x, y in raw["centroids"]],
        edge_list=[[int(i), int(j)] for i, j in edges],
        eigenvalues=[float(v) for v in raw["eigenvalues"]],
        markers=[[float(v) for v in row] for row in raw["markers"]],
        sample_id=str(raw.get("sample_id", "")),
    )
