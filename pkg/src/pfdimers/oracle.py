"""Brute-force ground truth: enumerate perfect matchings directly."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple

from .errors import TooLarge
from .homology import HomologyBasis, edges_of
from .surface_graph import CombinatorialMap

VERTEX_BOUND = 36


def enumerate_matchings(m: CombinatorialMap,
                        max_vertices: int = VERTEX_BOUND) -> Iterator[int]:
    """Yield every perfect matching as an edge bitmask, each exactly once.

    Branches on the lowest-index unmatched vertex; loops never match.
    """
    if m.vertex_count > max_vertices:
        raise TooLarge(f"{m.vertex_count} vertices exceeds oracle bound {max_vertices}")
    if m.vertex_count % 2:
        return
    incident = [[] for _ in range(m.vertex_count)]
    for e, edge in enumerate(m.edges):
        if edge.u != edge.v:
            incident[edge.u].append((e, edge.v))
            incident[edge.v].append((e, edge.u))

    matched = [False] * m.vertex_count

    def rec(v: int, acc: int) -> Iterator[int]:
        while v < m.vertex_count and matched[v]:
            v += 1
        if v == m.vertex_count:
            yield acc
            return
        matched[v] = True
        for e, w in incident[v]:
            if not matched[w]:
                matched[w] = True
                yield from rec(v + 1, acc | (1 << e))
                matched[w] = False
        matched[v] = False

    yield from rec(0, 0)


def find_matching(m: CombinatorialMap,
                  max_vertices: int = VERTEX_BOUND) -> Optional[int]:
    for D in enumerate_matchings(m, max_vertices):
        return D
    return None


def partition_bruteforce(m: CombinatorialMap,
                         max_vertices: int = VERTEX_BOUND) -> Fraction:
    """Exact weighted sum over all perfect matchings."""
    total = Fraction(0)
    for D in enumerate_matchings(m, max_vertices):
        w = Fraction(1)
        for e in edges_of(D):
            w *= Fraction(m.edges[e].weight)
        total += w
    return total


def count_matchings(m: CombinatorialMap, max_vertices: int = VERTEX_BOUND) -> int:
    return sum(1 for _ in enumerate_matchings(m, max_vertices))


def homology_buckets(m: CombinatorialMap, D0: int, basis: HomologyBasis,
                     max_vertices: int = VERTEX_BOUND) -> Dict[Tuple[int, ...], Fraction]:
    """Weighted matching sums bucketed by the class of D + D0.

    Coordinates are taken in the given basis; the buckets sum to the full
    partition function.
    """
    buckets: Dict[Tuple[int, ...], Fraction] = {}
    for D in enumerate_matchings(m, max_vertices):
        w = Fraction(1)
        for e in edges_of(D):
            w *= Fraction(m.edges[e].weight)
        key = basis.coordinates(D ^ D0)
        buckets[key] = buckets.get(key, Fraction(0)) + w
    return buckets
