"""Line-oriented graph file format.

Grammar (one directive per line; ``#`` starts a comment; blank lines ok)::

    vertices <N>
    edge <id> <u> <v> <twist:0|1> <weight>
    rotation <v> <half-edge> ...
    curve <idx> <alpha|beta>
    cross <idx> <edge-id> ...
    crossing_edge <idx> <edge-id>
    companion <idx> <half-edge> ...

Half-edges are written ``<edge-id>.<0|1>``; half 0 anchors at the edge's
first endpoint.  Edge ids must be dense 0..E-1.  Weights are integers,
fractions like ``3/2`` or decimals.  Companion walks are arc sequences (each
arc leaves the anchor of the written half).  Unknown directives are
rejected.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, TextIO, Tuple

from .errors import MalformedFile
from .generators import LatticeInstance, TransverseCurve
from .homology import basis_from_cycles, chain_from_edges, edges_of
from .surface_graph import build_map, classify


def _parse_weight(tok: str) -> object:
    try:
        if "/" in tok:
            return Fraction(tok)
        if "." in tok or "e" in tok or "E" in tok:
            return float(tok)
        return int(tok)
    except ValueError as exc:
        raise MalformedFile(f"bad weight {tok!r}") from exc


def _parse_half(tok: str, edge_count: int) -> int:
    try:
        eid, side = tok.split(".")
        e, s = int(eid), int(side)
    except ValueError as exc:
        raise MalformedFile(f"bad half-edge token {tok!r}") from exc
    if not (0 <= e < edge_count and s in (0, 1)):
        raise MalformedFile(f"half-edge {tok!r} out of range")
    return 2 * e + s


def load(stream: TextIO) -> LatticeInstance:
    """Parse a graph file into a map plus optional curve data."""
    nv: Optional[int] = None
    edge_rows: Dict[int, Tuple[int, int, int, object]] = {}
    rotation_rows: Dict[int, List[str]] = {}
    curve_kind: Dict[int, str] = {}
    curve_cross: Dict[int, List[int]] = {}
    curve_companion: Dict[int, List[str]] = {}
    curve_edge: Dict[int, int] = {}

    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        key = toks[0]
        try:
            if key == "vertices":
                nv = int(toks[1])
            elif key == "edge":
                eid, u, v, tw = int(toks[1]), int(toks[2]), int(toks[3]), int(toks[4])
                w = _parse_weight(toks[5])
                if eid in edge_rows:
                    raise MalformedFile(f"duplicate edge id {eid}")
                edge_rows[eid] = (u, v, tw, w)
            elif key == "rotation":
                v = int(toks[1])
                if v in rotation_rows:
                    raise MalformedFile(f"duplicate rotation for vertex {v}")
                rotation_rows[v] = toks[2:]
            elif key == "curve":
                idx, kind = int(toks[1]), toks[2]
                if kind not in ("alpha", "beta"):
                    raise MalformedFile(f"curve kind must be alpha or beta, got {kind!r}")
                curve_kind[idx] = kind
            elif key == "cross":
                idx = int(toks[1])
                curve_cross[idx] = [int(t) for t in toks[2:]]
            elif key == "crossing_edge":
                curve_edge[int(toks[1])] = int(toks[2])
            elif key == "companion":
                idx = int(toks[1])
                curve_companion[idx] = toks[2:]
            else:
                raise MalformedFile(f"unknown directive {key!r}")
        except MalformedFile:
            raise
        except (IndexError, ValueError) as exc:
            raise MalformedFile(f"line {lineno}: cannot parse {line!r}") from exc

    if nv is None:
        raise MalformedFile("missing 'vertices' line")
    ne = len(edge_rows)
    if sorted(edge_rows) != list(range(ne)):
        raise MalformedFile("edge ids must be dense 0..E-1")
    endpoints = [(edge_rows[e][0], edge_rows[e][1]) for e in range(ne)]
    twists = [edge_rows[e][2] for e in range(ne)]
    weights = [edge_rows[e][3] for e in range(ne)]
    rotations = []
    for v in range(nv):
        toks = rotation_rows.get(v, [])
        rotations.append([_parse_half(t, ne) for t in toks])
    graph = build_map(nv, rotations, endpoints, twists, weights)

    curves = []
    for idx in sorted(curve_kind):
        kind = curve_kind[idx]
        cross = chain_from_edges(curve_cross.get(idx, []))
        comp = None
        if idx in curve_companion:
            comp = tuple(_parse_half(t, ne) for t in curve_companion[idx])
        curves.append(TransverseCurve(kind, cross, comp,
                                      crossing_edge=curve_edge.get(idx),
                                      ordered_crossings=tuple(curve_cross[idx])
                                      if idx in curve_cross else None))
    basis = None
    if curves and all(c.companion for c in curves):
        try:
            basis = basis_from_cycles(graph, [c.companion for c in curves])
        except Exception:
            basis = None
    return LatticeInstance(graph, classify(graph).name, tuple(curves), basis)


def dump(inst: LatticeInstance, stream: TextIO) -> None:
    """Serialize canonically; ``load(dump(x))`` reproduces the same map."""
    m = inst.map
    stream.write(f"vertices {m.vertex_count}\n")
    for e, edge in enumerate(m.edges):
        w = edge.weight
        wtok = str(w) if not isinstance(w, float) else repr(w)
        stream.write(f"edge {e} {edge.u} {edge.v} {edge.twist} {wtok}\n")
    for v in range(m.vertex_count):
        toks = " ".join(f"{h // 2}.{h % 2}" for h in m.rotations[v])
        stream.write(f"rotation {v} {toks}\n")
    for idx, cv in enumerate(inst.curves):
        stream.write(f"curve {idx} {cv.kind}\n")
        order = cv.ordered_crossings if cv.ordered_crossings else tuple(edges_of(cv.cross))
        stream.write(f"cross {idx} {' '.join(str(e) for e in order)}\n")
        if cv.crossing_edge is not None:
            stream.write(f"crossing_edge {idx} {cv.crossing_edge}\n")
        if cv.companion is not None:
            toks = " ".join(f"{h // 2}.{h % 2}" for h in cv.companion)
            stream.write(f"companion {idx} {toks}\n")
