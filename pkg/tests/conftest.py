"""Shared fixtures: small hand-checked maps used across the suite."""

from __future__ import annotations

import pytest

from pfdimers import build_map, lattice


@pytest.fixture
def sphere_loop():
    """One vertex, one untwisted loop: two faces, chi = 2."""
    return build_map(1, [[0, 1]], [(0, 0)], [0], [1])


@pytest.fixture
def rp2_loop():
    """One vertex, one twisted loop: one face, chi = 1."""
    return build_map(1, [[0, 1]], [(0, 0)], [1], [1])


@pytest.fixture
def rp2_two_vertex():
    """Two vertices joined by an untwisted and a twisted edge; chi = 1.

    The smallest projective-plane graph with perfect matchings (it has two).
    """
    return build_map(2, [[0, 2], [1, 3]], [(0, 1), (0, 1)], [0, 1], [1, 1])


@pytest.fixture
def sphere_square():
    """Planar 4-cycle quadrangulating the sphere."""
    return lattice(2, 2, "planar").map


@pytest.fixture
def torus_two_vertex():
    """Two vertices, four parallel edges, quadrangulating the torus."""
    return build_map(2, [[0, 2, 4, 6], [1, 3, 5, 7]], [(0, 1)] * 4,
                     [0] * 4, [1] * 4)


@pytest.fixture
def path_with_twist():
    """Path v0 - v1 - v2 with a twist on the first edge."""
    return build_map(3, [[0], [1, 2], [3]], [(0, 1), (1, 2)], [1, 0], [1, 1])
