from __future__ import annotations

import random
from itertools import combinations

import pytest

from pfdimers import (
    DegenerateForm,
    NotAMatching,
    NotOrientableForm,
    arf,
    basis_enhancement,
    brown,
    build_map,
    canonical_orientation,
    construct_kasteleyn,
    cycle_basis,
    enumerate_matchings,
    extend_enhancement,
    find_matching,
    lattice,
    matching_sign,
    n_mismatch,
    normalize_qB,
    quad_enhancement,
)
from pfdimers.generators import random_map
from pfdimers.homology import dot, reverse_walk, vertex_coboundary
from pfdimers.kasteleyn import Orientation, omega_change
from pfdimers.spin_quadratic import ell_omega


def _single_edge():
    return build_map(2, [[0], [1]], [(0, 1)], [0], [1])


def test_matching_sign_single_edge():
    m = _single_edge()
    K_fwd = Orientation(0, 1)
    K_rev = Orientation(1, 1)
    assert matching_sign(m, K_fwd, 1) == 1
    assert matching_sign(m, K_rev, 1) == -1


def test_matching_sign_four_cycle(sphere_square):
    m = sphere_square
    K = canonical_orientation(m)  # all edges low -> high
    # the matching of the two horizontal edges (0-1) and (2-3)
    D = 0
    for e, edge in enumerate(m.edges):
        if {edge.u, edge.v} in ({0, 1}, {2, 3}):
            D |= 1 << e
    assert matching_sign(m, K, D) == 1


def test_matching_sign_rejects_non_matchings(sphere_square):
    with pytest.raises(NotAMatching):
        matching_sign(sphere_square, canonical_orientation(sphere_square), 1)


def test_sign_product_over_difference_cycles():
    # product of two matching signs = product over the loops of D + D' of
    # -(-1)^(mismatch count)
    rng = random.Random(0)
    tested = 0
    for _ in range(40):
        m = random_map(rng)
        ms = list(enumerate_matchings(m))
        if len(ms) < 2:
            continue
        K = Orientation(rng.getrandbits(m.edge_count), m.edge_count)
        for D1, D2 in combinations(ms[:6], 2):
            loops = _difference_loops(m, D1 ^ D2)
            prod = 1
            for loop in loops:
                n = sum(K.disagrees_with_arc(h) for h in loop)
                prod *= (-1) ** (n + 1)
            assert matching_sign(m, K, D1) * matching_sign(m, K, D2) == prod
            tested += 1
    assert tested > 10


def _difference_loops(m, chain):
    """Split an even-degree edge set into its disjoint simple loops as walks."""
    from pfdimers.homology import edges_of

    edges = set(edges_of(chain))
    loops = []
    while edges:
        e0 = min(edges)
        edges.discard(e0)
        walk = [2 * e0]
        cur = m.arc_target(2 * e0)
        start = m.half_vertex(2 * e0)
        while cur != start:
            nxt = next(e for e in edges
                       if m.edges[e].u == cur or m.edges[e].v == cur)
            edges.discard(nxt)
            h = 2 * nxt if m.edges[nxt].u == cur else 2 * nxt + 1
            walk.append(h)
            cur = m.arc_target(h)
        loops.append(tuple(walk))
    return loops


def test_n_mismatch_traversal_invariance():
    inst = lattice(3, 4, "torus")
    K = construct_kasteleyn(inst.map)
    for walk in inst.basis.cycles:
        if len(walk) % 2 == 0:
            assert n_mismatch(K, walk) % 2 == \
                n_mismatch(K, reverse_walk(walk)) % 2


def test_n_mismatch_flip_toggles():
    inst = lattice(3, 4, "torus")
    K = construct_kasteleyn(inst.map)
    walk = inst.basis.cycles[0]
    e = walk[0] // 2
    assert (n_mismatch(K, walk) + n_mismatch(K.flipped(1 << e), walk)) % 2 == 1


def test_ell_zero_when_dimers_on_cycle():
    # a 4-cycle matched by alternating edges: every dimer lies on the cycle
    m = lattice(2, 2, "planar").map
    basis_walk = _boundary_walk(m)
    D = find_matching(m)
    assert ell_omega(m, D, basis_walk) == 0


def _boundary_walk(m):
    # the square's unique cycle as a walk
    basis = cycle_basis(m)
    if basis.rank:
        return basis.cycles[0]
    # sphere square has rank 0; construct the 4-cycle by hand
    from pfdimers.homology import fundamental_cycle
    from pfdimers.surface_graph import spanning_tree

    tree, parent = spanning_tree(m)
    e = next(e for e in range(m.edge_count) if e not in set(tree))
    return fundamental_cycle(m, e, parent)


def test_quad_value_traversal_independent():
    rng = random.Random(1)
    for _ in range(30):
        m = random_map(rng)
        D = find_matching(m)
        if D is None:
            continue
        K = construct_kasteleyn(m) if m.vertex_count % 2 == 0 else None
        if K is None:
            continue
        basis = cycle_basis(m)
        for walk in basis.cycles:
            a = quad_enhancement(m, K, D, walk)
            b = quad_enhancement(m, K, D, reverse_walk(walk))
            assert a == b


def test_quad_klein_beta_values_odd():
    inst = lattice(5, 6, "klein_hexagon")
    m = inst.map
    D = find_matching(m)
    K = construct_kasteleyn(m)
    for walk in inst.basis.cycles:
        assert quad_enhancement(m, K, D, walk) % 2 == 1


def test_quad_parity_is_self_intersection():
    rng = random.Random(2)
    for _ in range(30):
        m = random_map(rng)
        if m.vertex_count % 2:
            continue
        D = find_matching(m)
        if D is None:
            continue
        K = construct_kasteleyn(m)
        basis = cycle_basis(m)
        q = basis_enhancement(m, K, D, basis)
        for i in range(basis.rank):
            assert q.basis_values[i] % 2 == basis.gram[i][i]


def test_extend_enhancement_examples():
    q = extend_enhancement([0, 0], [[0, 1], [1, 0]])
    assert q.evaluate([0, 0]) == 0
    assert q.evaluate([1, 1]) == 2  # q(a+b) = q(a)+q(b)+2(a.b)
    q2 = extend_enhancement([3], [[1]])
    assert q2.evaluate([0]) == 0 and q2.evaluate([1]) == 3


def test_arf_examples():
    gram = [[0, 1], [1, 0]]
    assert arf(extend_enhancement([0, 0], gram)) == 0
    assert arf(extend_enhancement([2, 2], gram)) == 1
    assert arf(extend_enhancement([], [])) == 0
    with pytest.raises(NotOrientableForm):
        arf(extend_enhancement([1, 0], gram))


def test_brown_examples():
    assert brown(extend_enhancement([], [])) == 0
    assert brown(extend_enhancement([1], [[1]])) == 1
    assert brown(extend_enhancement([3], [[1]])) == 7
    with pytest.raises(DegenerateForm):
        brown(extend_enhancement([2], [[0]]))  # degenerate pairing: sum 1 + i^2 = 0


def test_brown_additive_on_examples():
    # Klein bottle forms: gram I2, odd values; brown in {0, 2, 6}
    vals = {brown(extend_enhancement([a, b], [[1, 0], [0, 1]]))
            for a in (1, 3) for b in (1, 3)}
    assert vals == {0, 2, 6}


def test_enhancement_law_on_maps():
    # q(x+y) = q(x) + q(y) + 2 x.y checked through simple representatives:
    # evaluate() implements the law, so check it against direct evaluation
    # on the walk representatives for basis classes
    rng = random.Random(3)
    for _ in range(30):
        m = random_map(rng)
        if m.vertex_count % 2:
            continue
        D = find_matching(m)
        if D is None:
            continue
        K = construct_kasteleyn(m)
        basis = cycle_basis(m)
        q = basis_enhancement(m, K, D, basis)
        for i, walk in enumerate(basis.cycles):
            coords = [1 if j == i else 0 for j in range(basis.rank)]
            assert q.evaluate(coords) == quad_enhancement(m, K, D, walk)


def test_normalize_qB_matching_independent():
    inst = lattice(2, 4, "klein_hexagon")
    m, basis = inst.map, inst.basis
    K = construct_kasteleyn(m)
    ms = list(enumerate_matchings(m))
    tables = set()
    for D in ms[:8]:
        qB = normalize_qB(m, basis_enhancement(m, K, D, basis), D, basis)
        tables.add(qB.basis_values)
    assert len(tables) == 1


def test_normalize_qB_torus_independent():
    inst = lattice(4, 4, "torus")
    m, basis = inst.map, inst.basis
    K = construct_kasteleyn(m)
    ms = list(enumerate_matchings(m))
    tables = {normalize_qB(m, basis_enhancement(m, K, D, basis), D, basis).basis_values
              for D in [ms[0], ms[len(ms) // 2], ms[-1]]}
    assert len(tables) == 1


def test_qB_equivariance_under_class_flips():
    inst = lattice(2, 4, "klein_hexagon")
    m, basis = inst.map, inst.basis
    D = find_matching(m)
    K = construct_kasteleyn(m)
    qK = normalize_qB(m, basis_enhancement(m, K, D, basis), D, basis)
    for i, phi in enumerate(basis.dual_cochains):
        K2 = K.flipped(phi)
        q2 = normalize_qB(m, basis_enhancement(m, K2, D, basis), D, basis)
        expected = tuple((v + 2 * (1 if j == i else 0)) % 4
                         for j, v in enumerate(qK.basis_values))
        assert q2.basis_values == expected


def test_q_invariant_under_equivalence_moves():
    rng = random.Random(4)
    inst = lattice(3, 4, "rp2")
    m, basis = inst.map, inst.basis
    D = find_matching(m)
    K = construct_kasteleyn(m)
    q1 = basis_enhancement(m, K, D, basis)
    flips = 0
    for v in range(m.vertex_count):
        if rng.random() < 0.4:
            flips ^= vertex_coboundary(m, v)
    q2 = basis_enhancement(m, K.flipped(flips), D, basis)
    assert q1.basis_values == q2.basis_values


def test_q_shift_under_matching_change():
    # q_{D'} = q_D + 2 * (class pairing with D + D')
    inst = lattice(2, 4, "klein_hexagon")
    m, basis = inst.map, inst.basis
    K = construct_kasteleyn(m)
    ms = list(enumerate_matchings(m))
    D1, D2 = ms[0], ms[-1]
    q1 = basis_enhancement(m, K, D1, basis)
    q2 = basis_enhancement(m, K, D2, basis)
    for i in range(basis.rank):
        shift = dot(basis.pd_cochains[i], D1 ^ D2)
        assert q2.basis_values[i] == (q1.basis_values[i] + 2 * shift) % 4


def test_q_invariant_under_omega_change():
    inst = lattice(2, 4, "klein_hexagon")
    m, basis = inst.map, inst.basis
    D = find_matching(m)
    om = m.twist_bits()
    K = construct_kasteleyn(m)
    q1 = basis_enhancement(m, K, D, basis, om)
    # move omega across a vertex adjacent to a twisted edge
    v = next(v for v in range(m.vertex_count)
             if any((om >> (h // 2)) & 1 for h in m.rotations[v]))
    om2, K2 = omega_change(m, om, K, v)
    q2 = basis_enhancement(m, K2, D, basis, om2)
    assert q1.basis_values == q2.basis_values


def test_gauss_modulus_always_exact():
    rng = random.Random(5)
    for _ in range(40):
        m = random_map(rng)
        if m.vertex_count % 2:
            continue
        D = find_matching(m)
        if D is None:
            continue
        K = construct_kasteleyn(m)
        basis = cycle_basis(m)
        q = basis_enhancement(m, K, D, basis)
        brown(q)  # raises DegenerateForm on modulus mismatch
