"""Graphs cellularly embedded in closed surfaces, as signed rotation systems.

Encoding
--------
A map has vertices ``0..V-1`` and edges ``0..E-1``.  Edge ``e`` stores its
endpoints ``(u, v)``, a twist bit and a weight, and contributes two half-edges
``2*e`` (anchored at ``u``) and ``2*e + 1`` (anchored at ``v``).  For a loop
both half-edges anchor at the same vertex.  The rotation at a vertex is the
cyclic sequence of its half-edges, read counterclockwise in the local chart.
A twist bit of 1 means the charts at the two endpoints disagree when
transported along the edge, i.e. the edge reverses local orientation.

An *arc* is a half-edge used as a direction of travel: arc ``h`` traverses its
edge from the anchor of ``h`` to the anchor of the opposite half ``h ^ 1``.

Faces are traced on states ``(arc, sign)``.  The sign is the label of the
current lift vertex in the orientation double cover (0 for the lift whose
chart is counterclockwise, 1 for the other); it flips across twisted edges.
With the face kept on the left, the walk leaves a vertex along the rotation
predecessor of the arrival half-edge on sign 0 and along the successor on
sign 1.  Each face of the embedding corresponds to exactly two state orbits
(its two lifts, each traversed as its own oriented boundary); one canonical
orbit per face is retained.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import (
    DisconnectedGraph,
    MalformedRotation,
    NegativeWeight,
)

Weight = Union[int, Fraction, float]


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    twist: int = 0
    weight: Weight = 1


@dataclass(frozen=True)
class CombinatorialMap:
    vertex_count: int
    edges: Tuple[Edge, ...]
    rotations: Tuple[Tuple[int, ...], ...]
    # successor/predecessor of each half-edge inside its vertex rotation
    _next: Tuple[int, ...] = field(repr=False, default=())
    _prev: Tuple[int, ...] = field(repr=False, default=())

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def half_vertex(self, h: int) -> int:
        e, side = divmod(h, 2)
        return self.edges[e].u if side == 0 else self.edges[e].v

    def arc_target(self, h: int) -> int:
        return self.half_vertex(h ^ 1)

    def twist_bits(self) -> int:
        bits = 0
        for e, edge in enumerate(self.edges):
            if edge.twist:
                bits |= 1 << e
        return bits

    def is_loop(self, e: int) -> bool:
        return self.edges[e].u == self.edges[e].v

    def incident_halves(self, v: int) -> Tuple[int, ...]:
        return self.rotations[v]

    def rotation_next(self, h: int) -> int:
        return self._next[h]

    def rotation_prev(self, h: int) -> int:
        return self._prev[h]


@dataclass(frozen=True)
class Face:
    steps: Tuple[Tuple[int, int], ...]  # (arc half-edge, sign at the source)

    def __len__(self) -> int:
        return len(self.steps)

    def edge_multiplicities(self) -> dict:
        mult: dict = {}
        for h, _ in self.steps:
            mult[h // 2] = mult.get(h // 2, 0) + 1
        return mult

    def odd_edge_mask(self) -> int:
        mask = 0
        for h, _ in self.steps:
            mask ^= 1 << (h // 2)
        return mask


@dataclass(frozen=True)
class FaceSet:
    faces: Tuple[Face, ...]

    def __len__(self) -> int:
        return len(self.faces)

    def edge_face_incidence(self, edge_count: int) -> Tuple[Tuple[int, ...], ...]:
        """For each edge, the faces containing it, with multiplicity."""
        inc: list = [[] for _ in range(edge_count)]
        for fi, face in enumerate(self.faces):
            for h, _ in face.steps:
                inc[h // 2].append(fi)
        return tuple(tuple(sorted(lst)) for lst in inc)


@dataclass(frozen=True)
class SurfaceType:
    orientable: bool
    genus: int  # g in Sigma_g, Sigma_g # RP^2 or Sigma_g # Klein
    chi: int
    kind: str  # "orientable" | "nonorientable_odd_chi" | "nonorientable_even_chi"

    @property
    def b1(self) -> int:
        return 2 - self.chi

    @property
    def name(self) -> str:
        if self.orientable:
            return {0: "sphere", 1: "torus"}.get(self.genus, f"genus-{self.genus} surface")
        if self.kind == "nonorientable_odd_chi":
            return "projective plane" if self.genus == 0 else f"genus-{self.genus}#RP2"
        return "klein bottle" if self.genus == 0 else f"genus-{self.genus}#Klein"


def build_map(
    vertex_count: int,
    rotations: Sequence[Sequence[int]],
    edge_endpoints: Sequence[Tuple[int, int]],
    twists: Optional[Sequence[int]] = None,
    weights: Optional[Sequence[Weight]] = None,
) -> CombinatorialMap:
    """Validate raw data and build an immutable map.

    Raises MalformedRotation, NegativeWeight or DisconnectedGraph.
    """
    ne = len(edge_endpoints)
    twists = [0] * ne if twists is None else list(twists)
    weights = [1] * ne if weights is None else list(weights)
    if len(twists) != ne or len(weights) != ne:
        raise MalformedRotation("twist/weight lists must match the edge list")
    if len(rotations) != vertex_count:
        raise MalformedRotation("one rotation per vertex required")

    edges = []
    for (u, v), t, w in zip(edge_endpoints, twists, weights):
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise MalformedRotation(f"edge endpoint out of range: ({u}, {v})")
        if t not in (0, 1):
            raise MalformedRotation(f"twist must be 0 or 1, got {t!r}")
        if not w > 0:
            raise NegativeWeight(f"weight must be positive, got {w!r}")
        edges.append(Edge(u, v, t, w))

    seen = {}
    for v, rot in enumerate(rotations):
        for h in rot:
            if not (0 <= h < 2 * ne):
                raise MalformedRotation(f"unknown half-edge {h} at vertex {v}")
            if h in seen:
                raise MalformedRotation(f"half-edge {h} listed twice")
            seen[h] = v
    if len(seen) != 2 * ne:
        missing = [h for h in range(2 * ne) if h not in seen]
        raise MalformedRotation(f"half-edges missing from rotations: {missing}")
    for e, edge in enumerate(edges):
        if seen[2 * e] != edge.u or seen[2 * e + 1] != edge.v:
            raise MalformedRotation(f"half-edges of edge {e} anchored at wrong vertices")

    nxt = [0] * (2 * ne)
    prv = [0] * (2 * ne)
    for rot in rotations:
        k = len(rot)
        for i, h in enumerate(rot):
            nxt[h] = rot[(i + 1) % k]
            prv[h] = rot[(i - 1) % k]

    m = CombinatorialMap(
        vertex_count=vertex_count,
        edges=tuple(edges),
        rotations=tuple(tuple(r) for r in rotations),
        _next=tuple(nxt),
        _prev=tuple(prv),
    )
    _check_connected(m)
    return m


def _check_connected(m: CombinatorialMap) -> None:
    if m.vertex_count == 0:
        raise DisconnectedGraph("empty vertex set")
    seen = [False] * m.vertex_count
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        v = stack.pop()
        for h in m.rotations[v]:
            w = m.arc_target(h)
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    if count != m.vertex_count:
        raise DisconnectedGraph(f"{m.vertex_count - count} vertices unreachable")


def _face_successor(m: CombinatorialMap, h: int, s: int) -> Tuple[int, int]:
    e = h // 2
    s2 = s ^ m.edges[e].twist
    h_in = h ^ 1
    h_next = m.rotation_prev(h_in) if s2 == 0 else m.rotation_next(h_in)
    return h_next, s2


def trace_faces(m: CombinatorialMap) -> FaceSet:
    """Trace all face boundary walks.

    Returns one canonical orbit per face; the mirror orbit (the other lift,
    reverse traversal) is discarded.  Total step count over faces is 2E.
    """
    ne = m.edge_count
    visited = [False] * (4 * ne)  # state (h, s) -> index 2*h + s
    orbits = []
    for start in range(4 * ne):
        if visited[start]:
            continue
        h, s = start >> 1, start & 1
        orbit = []
        while True:
            idx = 2 * h + s
            if visited[idx]:
                break
            visited[idx] = True
            orbit.append((h, s))
            h, s = _face_successor(m, h, s)
        orbits.append(orbit)

    # Pair each orbit with its mirror: (h, s) -> (h^1, s ^ twist ^ 1).
    key_to_orbit = {}
    for i, orbit in enumerate(orbits):
        for st in orbit:
            key_to_orbit[st] = i
    faces = []
    used = set()
    for i, orbit in enumerate(orbits):
        if i in used:
            continue
        h, s = orbit[0]
        mirror = key_to_orbit[(h ^ 1, s ^ m.edges[h // 2].twist ^ 1)]
        if mirror == i or mirror in used:
            raise MalformedRotation("face orbit pairing failed; invalid rotation system")
        used.add(i)
        used.add(mirror)
        faces.append(Face(steps=tuple(orbit)))
    assert sum(len(f) for f in faces) == 2 * ne
    return FaceSet(faces=tuple(faces))


def euler_characteristic(m: CombinatorialMap, faces: Optional[FaceSet] = None) -> int:
    faces = faces if faces is not None else trace_faces(m)
    return m.vertex_count - m.edge_count + len(faces)


def spanning_tree(m: CombinatorialMap) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """BFS spanning tree.

    Returns (tree edge ids, parent arcs) where ``parent_arc[v]`` is the arc
    (half-edge) pointing from the tree parent of ``v`` to ``v``; the root 0
    gets -1.
    """
    parent_arc = [-1] * m.vertex_count
    seen = [False] * m.vertex_count
    seen[0] = True
    order = [0]
    tree = []
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for h in m.rotations[v]:
            w = m.arc_target(h)
            if not seen[w]:
                seen[w] = True
                parent_arc[w] = h
                tree.append(h // 2)
                order.append(w)
    return tuple(tree), tuple(parent_arc)


def tree_twist_parity(m: CombinatorialMap) -> Tuple[int, ...]:
    """Twist parity of the tree path from the root to each vertex."""
    _, parent_arc = spanning_tree(m)
    parity = [0] * m.vertex_count
    # parent_arc is produced in BFS order; recompute order to fill parities
    order = [0]
    seen = [False] * m.vertex_count
    seen[0] = True
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for h in m.rotations[v]:
            w = m.arc_target(h)
            if not seen[w] and parent_arc[w] == h:
                seen[w] = True
                parity[w] = parity[v] ^ m.edges[h // 2].twist
                order.append(w)
    return tuple(parity)


def is_orientable(m: CombinatorialMap) -> bool:
    """True iff the twist cochain is the coboundary of a vertex chart flip."""
    t = tree_twist_parity(m)
    for e, edge in enumerate(m.edges):
        if edge.twist ^ t[edge.u] ^ t[edge.v]:
            return False
    return True


def classify(m: CombinatorialMap, faces: Optional[FaceSet] = None) -> SurfaceType:
    chi = euler_characteristic(m, faces)
    if is_orientable(m):
        assert chi % 2 == 0
        return SurfaceType(True, (2 - chi) // 2, chi, "orientable")
    if chi % 2 == 1:
        return SurfaceType(False, (1 - chi) // 2, chi, "nonorientable_odd_chi")
    return SurfaceType(False, (-chi) // 2, chi, "nonorientable_even_chi")


def stiefel_whitney_cocycle(m: CombinatorialMap) -> int:
    """The twist cochain as an edge bitmask; represents the first
    Stiefel-Whitney class of the ambient surface."""
    return m.twist_bits()


def vertex_labels(m: CombinatorialMap, omega: Optional[int] = None) -> Tuple[int, ...]:
    """+-1 labels of one tree section of the orientation double cover.

    The root gets +1 and the sign flips across spanning-tree edges with
    ``omega(e) = 1``.  Well defined up to a global swap.
    """
    omega = m.twist_bits() if omega is None else omega
    _, parent_arc = spanning_tree(m)
    labels = [1] * m.vertex_count
    order = [0]
    seen = [False] * m.vertex_count
    seen[0] = True
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for h in m.rotations[v]:
            w = m.arc_target(h)
            if not seen[w] and parent_arc[w] == h:
                seen[w] = True
                flip = (omega >> (h // 2)) & 1
                labels[w] = -labels[v] if flip else labels[v]
                order.append(w)
    return tuple(labels)


def flip_charts(m: CombinatorialMap, vertices: Iterable[int]) -> CombinatorialMap:
    """Reverse the local chart at the given vertices.

    The rotation is reversed there and every non-loop incident edge's twist
    toggles (loops at a flipped vertex keep their twist: both charts flip).
    This is the standard equivalence move of signed rotation systems; it
    describes the same embedding.
    """
    flip = set(vertices)
    rotations = [tuple(reversed(r)) if v in flip else r for v, r in enumerate(m.rotations)]
    edges = []
    for edge in m.edges:
        t = edge.twist ^ ((edge.u in flip) ^ (edge.v in flip))
        edges.append(Edge(edge.u, edge.v, t, edge.weight))
    return build_map(m.vertex_count, rotations, [(e.u, e.v) for e in edges],
                     [e.twist for e in edges], [e.weight for e in edges])


def untwist(m: CombinatorialMap) -> CombinatorialMap:
    """Re-present an orientable map with all twists zero."""
    t = tree_twist_parity(m)
    flipped = flip_charts(m, [v for v in range(m.vertex_count) if t[v]])
    if flipped.twist_bits() != 0:
        raise MalformedRotation("map is not orientable; cannot remove twists")
    return flipped


def relabel(m: CombinatorialMap, perm: Sequence[int]) -> CombinatorialMap:
    """Map with vertices renamed by ``perm`` (old id -> new id).

    Edge ids, half-edge anchoring and rotations are carried over unchanged,
    so edge ``e`` still joins the same pair of (renamed) vertices.
    """
    inv = [0] * m.vertex_count
    for old, new in enumerate(perm):
        inv[new] = old
    rotations = [m.rotations[inv[v]] for v in range(m.vertex_count)]
    endpoints = [(perm[e.u], perm[e.v]) for e in m.edges]
    return build_map(m.vertex_count, rotations,
                     endpoints, [e.twist for e in m.edges], [e.weight for e in m.edges])
