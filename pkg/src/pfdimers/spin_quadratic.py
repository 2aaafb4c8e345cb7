"""Matching signs, quadratic enhancements, Arf and Brown invariants.

The Z4-valued enhancement attached to an admissible orientation K, a perfect
matching D and a Stiefel-Whitney representative omega is evaluated on a
vertex-simple oriented closed walk C as

    q([C]) = 2*(n(C) + l(C) + 1) + t(D on C) - t(C off D)   (mod 4),

where n(C) counts walk steps running against K, t(...) counts omega = 1
edges in the respective subset of C, and l(C) counts the vertices of C whose
matched edge leaves C on the positive side.  "Positive side" is chart-local:
the frame (walk direction, matched edge) is positively oriented in the
vertex's rotation chart, which for a vertex in the omega chart-swap set is
read with the opposite sign.  The remaining binary choice of chirality is a
module constant pinned by the cross-validated partition functions and frozen
by a regression test.

Enhancements are stored through their values on a homology basis together
with the mod-2 intersection matrix; values on arbitrary classes follow from
the enhancement law q(x+y) = q(x) + q(y) + 2*(x.y).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import DegenerateForm, NotAMatching, NotOrientableForm
from .exactnum import GaussianRational, Root2, i_power, zeta8_power
from .homology import (
    HomologyBasis,
    Walk,
    check_simple_walk,
    dot,
    edges_of,
)
from .kasteleyn import Orientation, _omega_flip_set
from .surface_graph import CombinatorialMap

# Chirality of the "positive side" test inside ell_omega.  True counts a
# matched edge lying in the clockwise sector from the incoming to the
# outgoing half-edge (the walker's left in a counterclockwise chart).
LEFT_IS_POSITIVE = True


# ---------------------------------------------------------------------------
# Matchings and matching signs
# ---------------------------------------------------------------------------

def check_matching(m: CombinatorialMap, D: int) -> None:
    covered = [0] * m.vertex_count
    for e in edges_of(D):
        edge = m.edges[e]
        if edge.u == edge.v:
            raise NotAMatching("a loop cannot carry a dimer")
        covered[edge.u] += 1
        covered[edge.v] += 1
    if any(c != 1 for c in covered):
        raise NotAMatching("edge set does not cover every vertex exactly once")


def _permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation taking 0..n-1 to ``seq``."""
    n = len(seq)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = seq[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def matching_sign(m: CombinatorialMap, K: Orientation, D: int,
                  vertex_order: Optional[Sequence[int]] = None) -> int:
    """Sign of the matching's contribution to the Pfaffian expansion.

    Lists the dimers with endpoints ordered along K and takes the sign of
    the permutation (1..2n) -> (tail_1, head_1, ..., tail_n, head_n).
    """
    check_matching(m, D)
    order = list(range(m.vertex_count)) if vertex_order is None else list(vertex_order)
    pos = [0] * m.vertex_count
    for i, v in enumerate(order):
        pos[v] = i
    image = []
    for e in sorted(edges_of(D)):
        a, b = K.arrow(m, e)
        image.append(pos[a])
        image.append(pos[b])
    return _permutation_sign(image)


def n_mismatch(K: Orientation, walk: Walk) -> int:
    """Number of walk steps running against the orientation."""
    return sum(K.disagrees_with_arc(h) for h in walk)


# ---------------------------------------------------------------------------
# The local side test and the enhancement formula
# ---------------------------------------------------------------------------

def _positive_side(m: CombinatorialMap, h_in: int, h_out: int, h_dimer: int,
                   swapped: bool) -> bool:
    """Does the matched half-edge leave on the positive side of the walk
    corner (arrive via ``h_in``, depart via ``h_out``)?"""
    left = False
    h = m.rotation_prev(h_in)
    while h != h_out:
        if h == h_dimer:
            left = True
            break
        h = m.rotation_prev(h)
    positive = left if LEFT_IS_POSITIVE else not left
    return positive ^ swapped


def ell_omega(m: CombinatorialMap, D: int, walk: Walk,
              omega: Optional[int] = None) -> int:
    """Vertices of the walk whose dimer leaves it on the positive side."""
    check_simple_walk(m, walk)
    check_matching(m, D)
    _, swap = _omega_flip_set(m, omega)
    dimer_half = {}
    for e in edges_of(D):
        edge = m.edges[e]
        dimer_half[edge.u] = 2 * e
        dimer_half[edge.v] = 2 * e + 1
    on_walk = set(h // 2 for h in walk)
    count = 0
    L = len(walk)
    for i, h in enumerate(walk):
        v = m.arc_target(h)
        hd = dimer_half[v]
        if hd // 2 in on_walk:
            continue
        h_in = h ^ 1
        h_out = walk[(i + 1) % L]
        if _positive_side(m, h_in, h_out, hd, v in swap):
            count += 1
    return count


def quad_enhancement(m: CombinatorialMap, K: Orientation, D: int, walk: Walk,
                     omega: Optional[int] = None) -> int:
    """Evaluate the enhancement of (K, D, omega) on a simple closed walk."""
    om = m.twist_bits() if omega is None else omega
    check_simple_walk(m, walk)
    n = n_mismatch(K, walk)
    ell = ell_omega(m, D, walk, omega)
    on_d = off_d = 0
    for h in walk:
        e = h // 2
        if (om >> e) & 1:
            if (D >> e) & 1:
                on_d += 1
            else:
                off_d += 1
    return (2 * (n + ell + 1) + on_d - off_d) % 4


# ---------------------------------------------------------------------------
# Enhancements on a basis; Arf and Brown invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticEnhancement:
    basis_values: Tuple[int, ...]            # Z4 values on the basis classes
    gram: Tuple[Tuple[int, ...], ...]        # mod-2 intersection matrix

    @property
    def rank(self) -> int:
        return len(self.basis_values)

    def evaluate(self, coords: Sequence[int]) -> int:
        """Value on the class with the given mod-2 coordinates."""
        val = 0
        idx = [i for i, c in enumerate(coords) if c & 1]
        for i in idx:
            val += self.basis_values[i]
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                val += 2 * self.gram[idx[a]][idx[b]]
        return val % 4

    def shifted(self, character: Sequence[int]) -> "QuadraticEnhancement":
        """Torsor action q -> q + 2*phi for a mod-2 character on the basis."""
        vals = tuple((v + 2 * (c & 1)) % 4
                     for v, c in zip(self.basis_values, character))
        return QuadraticEnhancement(vals, self.gram)


def extend_enhancement(basis_values: Sequence[int],
                       gram: Sequence[Sequence[int]]) -> QuadraticEnhancement:
    return QuadraticEnhancement(tuple(v % 4 for v in basis_values),
                                tuple(tuple(r) for r in gram))


def basis_enhancement(m: CombinatorialMap, K: Orientation, D: int,
                      basis: HomologyBasis,
                      omega: Optional[int] = None) -> QuadraticEnhancement:
    vals = tuple(quad_enhancement(m, K, D, w, omega) for w in basis.cycles)
    return QuadraticEnhancement(vals, basis.gram)


def normalize_qB(m: CombinatorialMap, q_D: QuadraticEnhancement, D: int,
                 basis: HomologyBasis) -> QuadraticEnhancement:
    """Matching-independent enhancement: q_B = q_D + 2*(crossings with D)."""
    character = [dot(pd, D) for pd in basis.pd_cochains]
    return q_D.shifted(character)


def gauss_sum(q: QuadraticEnhancement) -> GaussianRational:
    """Sum of i**q(x) over all classes, exactly."""
    total = GaussianRational.of(0)
    for mask in range(1 << q.rank):
        coords = [(mask >> i) & 1 for i in range(q.rank)]
        total = total + i_power(q.evaluate(coords))
    return total


def brown(q: QuadraticEnhancement) -> int:
    """Brown invariant beta with gauss_sum = 2**(b1/2) * exp(i*pi/4)**beta."""
    s = gauss_sum(q)
    if s.abs2() != 2 ** q.rank:
        raise DegenerateForm(f"Gauss sum modulus^2 {s.abs2()} != 2^{q.rank}")
    target = Root2.of(s)
    scale = _power_of_two_sqrt(q.rank)
    for beta in range(8):
        if (scale * zeta8_power(beta) - target).is_zero():
            return beta
    raise DegenerateForm("Gauss sum is not a multiple of an eighth root of unity")


def _power_of_two_sqrt(b1: int) -> Root2:
    """2**(b1/2) as a Root2 value."""
    if b1 % 2 == 0:
        return Root2.of(GaussianRational.of(2 ** (b1 // 2)))
    return Root2.of(GaussianRational.of(0), GaussianRational.of(2 ** ((b1 - 1) // 2)))


def arf(q: QuadraticEnhancement) -> int:
    """Arf invariant of an orientable (even-valued) enhancement."""
    if any(v % 2 for v in q.basis_values):
        raise NotOrientableForm("enhancement takes odd values")
    if any(q.gram[i][i] for i in range(q.rank)):
        raise NotOrientableForm("intersection form has odd diagonal")
    total = 0
    for mask in range(1 << q.rank):
        coords = [(mask >> i) & 1 for i in range(q.rank)]
        total += 1 if q.evaluate(coords) == 0 else -1
    g = q.rank // 2
    if total == 2 ** g:
        return 0
    if total == -(2 ** g):
        return 1
    raise NotOrientableForm(f"Gauss sum {total} is not +-2^{g}")
