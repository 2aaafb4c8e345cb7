"""Admissible edge orientations via face curvature on the orientation cover.

An orientation stores one direction bit per edge: bit 0 directs edge ``e``
from the anchor of half-edge ``2e`` to the anchor of ``2e+1`` (the stored
endpoint order), bit 1 reverses it.  The canonical start orientation directs
every non-loop edge from its lower-indexed endpoint.

The curvature of a face is computed on one lift of its boundary walk: writing
``n`` for the number of steps traversed against the orientation and ``m`` for
the number of steps whose two endpoint lifts both carry the minus label, the
curvature is ``n + m + 1 (mod 2)``.  An orientation is admissible when every
face has curvature zero; such orientations exist iff the vertex count is
even, and their equivalence classes (modulo flipping all edges at a vertex)
form a torsor under the group of cocycle classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import OddVertexCount, TooLarge
from .homology import (
    coboundary_preimage,
    is_coboundary,
    parity,
    solve_parity_system,
)
from .surface_graph import CombinatorialMap, FaceSet, trace_faces

EXHAUSTIVE_EDGE_BOUND = 20


@dataclass(frozen=True)
class Orientation:
    bits: int
    edge_count: int

    def direction(self, e: int) -> int:
        return (self.bits >> e) & 1

    def arrow(self, m: CombinatorialMap, e: int) -> Tuple[int, int]:
        edge = m.edges[e]
        return (edge.v, edge.u) if self.direction(e) else (edge.u, edge.v)

    def flipped(self, mask: int) -> "Orientation":
        return Orientation(self.bits ^ mask, self.edge_count)

    def disagrees_with_arc(self, h: int) -> int:
        """1 if the arc ``h`` runs against this orientation."""
        e, side = divmod(h, 2)
        return ((self.bits >> e) & 1) ^ side


def canonical_orientation(m: CombinatorialMap) -> Orientation:
    """Every non-loop edge from lower to higher vertex index; loops by
    half-edge order."""
    bits = 0
    for e, edge in enumerate(m.edges):
        if edge.u > edge.v:
            bits |= 1 << e
    return Orientation(bits, m.edge_count)


def _omega_flip_set(m: CombinatorialMap, omega: Optional[int]) -> Tuple[int, frozenset]:
    """Resolve an omega cochain into (omega bits, chart-swap vertex set).

    ``omega`` must differ from the twist cochain by a vertex coboundary (both
    then represent the first Stiefel-Whitney class); the returned set is the
    flip support, empty when omega is the twist cochain itself.
    """
    tw = m.twist_bits()
    if omega is None or omega == tw:
        return tw if omega is None else omega, frozenset()
    s = coboundary_preimage(m, omega ^ tw)
    if s is None:
        raise ValueError("omega does not represent the first Stiefel-Whitney class")
    return omega, frozenset(s)


def face_curvatures(m: CombinatorialMap, K: Orientation,
                    omega: Optional[int] = None,
                    faces: Optional[FaceSet] = None) -> List[int]:
    """Curvature bit of every face."""
    faces = faces if faces is not None else trace_faces(m)
    _, swap = _omega_flip_set(m, omega)
    out = []
    for face in faces.faces:
        L = len(face.steps)
        n = 0
        mm = 0
        labels = []
        for h, s in face.steps:
            n ^= K.disagrees_with_arc(h)
            labels.append(s ^ (1 if m.half_vertex(h) in swap else 0))
        for i in range(L):
            if labels[i] == 1 and labels[(i + 1) % L] == 1:
                mm ^= 1
        out.append((n + mm + 1) & 1)
    return out


def curvature(m: CombinatorialMap, K: Orientation, face_index: int,
              omega: Optional[int] = None,
              faces: Optional[FaceSet] = None) -> int:
    """Curvature bit of one face."""
    return face_curvatures(m, K, omega, faces)[face_index]


@dataclass(frozen=True)
class CurvatureReport:
    per_face: Tuple[int, ...]
    vertex_count: int

    @property
    def total_parity(self) -> int:
        return sum(self.per_face) & 1

    @property
    def curved_faces(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.per_face) if c)

    def consistent(self) -> bool:
        return self.total_parity == self.vertex_count % 2


def curvature_report(m: CombinatorialMap, K: Orientation,
                     omega: Optional[int] = None,
                     faces: Optional[FaceSet] = None) -> CurvatureReport:
    return CurvatureReport(tuple(face_curvatures(m, K, omega, faces)), m.vertex_count)


def is_kasteleyn(m: CombinatorialMap, K: Orientation,
                 omega: Optional[int] = None,
                 faces: Optional[FaceSet] = None) -> bool:
    return not any(face_curvatures(m, K, omega, faces))


def construct_kasteleyn(m: CombinatorialMap,
                        omega: Optional[int] = None,
                        faces: Optional[FaceSet] = None) -> Orientation:
    """Zero-curvature orientation by local repairs.

    Starts from the canonical orientation; curved faces come in pairs, and
    reversing the edges along a dual path between two curved faces repairs
    both without disturbing anything else.
    """
    if m.vertex_count % 2:
        raise OddVertexCount("no admissible orientation on an odd vertex count")
    faces = faces if faces is not None else trace_faces(m)
    K = canonical_orientation(m)
    curv = face_curvatures(m, K, omega, faces)
    assert sum(curv) % 2 == 0

    # dual adjacency through edges with two distinct incident faces
    edge_faces: List[List[int]] = [[] for _ in range(m.edge_count)]
    for fi, face in enumerate(faces.faces):
        for h, _ in face.steps:
            edge_faces[h // 2].append(fi)
    dual_adj: List[List[Tuple[int, int]]] = [[] for _ in range(len(faces))]
    for e, fs in enumerate(edge_faces):
        f1, f2 = fs
        if f1 != f2:
            dual_adj[f1].append((f2, e))
            dual_adj[f2].append((f1, e))

    while True:
        curved = [f for f, c in enumerate(curv) if c]
        if not curved:
            break
        src = curved[0]
        prev = {src: (-1, -1)}
        queue = [src]
        target = -1
        qi = 0
        while qi < len(queue):
            f = queue[qi]
            qi += 1
            if f != src and curv[f]:
                target = f
                break
            for g, e in dual_adj[f]:
                if g not in prev:
                    prev[g] = (f, e)
                    queue.append(g)
        if target < 0:
            # cannot happen on a connected cellular map; solve globally instead
            return _construct_by_solve(m, faces, omega)
        flip = 0
        f = target
        while f != src:
            g, e = prev[f]
            flip ^= 1 << e
            f = g
        K = K.flipped(flip)
        curv[src] ^= 1
        curv[target] ^= 1

    assert is_kasteleyn(m, K, omega, faces)
    return K


def _construct_by_solve(m: CombinatorialMap, faces: FaceSet,
                        omega: Optional[int]) -> Orientation:
    K0 = canonical_orientation(m)
    curv = face_curvatures(m, K0, omega, faces)
    constraints = [(face.odd_edge_mask(), c) for face, c in zip(faces.faces, curv)]
    phi = solve_parity_system(constraints, m.edge_count)
    if phi is None:  # pragma: no cover
        raise OddVertexCount("curvature is not a coboundary")
    K = K0.flipped(phi)
    assert is_kasteleyn(m, K, omega, faces)
    return K


def enumerate_classes(m: CombinatorialMap, K: Orientation,
                      dual_cochains: Sequence[int]) -> List[Orientation]:
    """One representative per orientation class: flip K by every subset sum
    of the given cocycles.  Subset ``I`` sits at index ``sum(2**i, i in I)``.
    """
    out = []
    for idx in range(1 << len(dual_cochains)):
        mask = 0
        for i, phi in enumerate(dual_cochains):
            if (idx >> i) & 1:
                mask ^= phi
        out.append(K.flipped(mask))
    return out


def equivalent(m: CombinatorialMap, K1: Orientation, K2: Orientation) -> bool:
    """True iff the orientations differ by vertex flips."""
    return is_coboundary(m, K1.bits ^ K2.bits)


def count_all_kasteleyn(m: CombinatorialMap,
                        omega: Optional[int] = None,
                        bound: int = EXHAUSTIVE_EDGE_BOUND) -> int:
    """Exhaustively count admissible orientations (small maps only)."""
    if m.edge_count > bound:
        raise TooLarge(f"{m.edge_count} edges exceeds exhaustive bound {bound}")
    faces = trace_faces(m)
    _, swap = _omega_flip_set(m, omega)

    # curvature of face f under orientation bits B:
    #   c_f(B) = parity(B & fold_f) xor const_f
    # where fold_f xors the step edges and const_f collects the step parity
    # of odd arcs plus the minus-minus count plus one.
    folds = []
    consts = []
    for face in faces.faces:
        fold = 0
        const = 1
        L = len(face.steps)
        labels = []
        for h, s in face.steps:
            fold ^= 1 << (h // 2)
            const ^= h & 1  # arc on half 1 reverses the stored direction
            labels.append(s ^ (1 if m.half_vertex(h) in swap else 0))
        for i in range(L):
            if labels[i] == 1 and labels[(i + 1) % L] == 1:
                const ^= 1
        folds.append(fold)
        consts.append(const)

    count = 0
    for bits in range(1 << m.edge_count):
        ok = True
        for fold, const in zip(folds, consts):
            if (parity(bits & fold) ^ const):
                ok = False
                break
        if ok:
            count += 1
    return count


def omega_change(m: CombinatorialMap, omega: int, K: Orientation,
                 v: int) -> Tuple[int, Orientation]:
    """Carry an admissible orientation across the move omega -> omega + delta(v).

    Reverses K exactly on the edges at ``v`` carrying omega = 1; the result is
    admissible for the new cochain.
    """
    from .homology import vertex_coboundary

    dv = vertex_coboundary(m, v)
    omega2 = omega ^ dv
    flip = 0
    for e, edge in enumerate(m.edges):
        if ((edge.u == v) or (edge.v == v)) and ((omega >> e) & 1):
            if edge.u != edge.v:
                flip |= 1 << e
    return omega2, K.flipped(flip)
