import itertools
import math
import random
from fractions import Fraction

import pytest

from ctrop.errors import EmptyInput, Unbounded
from ctrop.grassmannian import GrData, hook_g_vector
from ctrop.linalg import Mat, vdot
from ctrop.polytopes import (AffineSubspace, Cone, Polytope, convex_hull,
                             lattice_points, slice_cone, superpotential_cone,
                             verify_unimodular, vertices_from_hrep)
from ctrop.trop import PLFunction


def test_hull_square_drops_interior():
    p = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1),
                     (Fraction(1, 2), Fraction(1, 2))])
    assert p.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert len(p.facets) == 4
    assert p.contains((Fraction(1, 3), Fraction(1, 2)))
    assert not p.contains((2, 0))


def test_hull_single_point():
    p = convex_hull([(3, -1, 2)])
    assert p.vertices == ((3, -1, 2),)
    assert p.facets == []
    assert len(p.equations) == 3


def test_hull_lower_dimensional():
    p = convex_hull([(0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert p.affine_dim() == 2
    assert any(vdot(n, (0, 0, 1)) == b for n, b in p.equations)
    assert p.contains((Fraction(1, 3), Fraction(1, 3), 1))
    assert not p.contains((0, 0, 0))


def test_hull_gr24_g_vectors():
    gr = GrData(2, 4)
    pts = [hook_g_vector(J, 2, 4) for J in gr.plucker_indices()]
    p = convex_hull(pts)
    assert len(p.vertices) == 6
    assert p.affine_dim() == 4


def test_hv_round_trip_fuzz():
    rng = random.Random(15)
    for dim in (2, 3, 4):
        for _ in range(6):
            pts = [tuple(rng.randint(-3, 3) for _ in range(dim))
                   for _ in range(dim + 3)]
            p = convex_hull(pts)
            # facets cut exactly the hull: all points inside, vertices tight
            for q in pts:
                assert p.contains(q)
            p2 = convex_hull(p.vertices)
            assert p2 == p
            # H -> V: re-enumerate vertices from the facets
            verts = vertices_from_hrep(p.facets, p.equations, dim)
            assert tuple(sorted(verts)) == p.vertices


def test_superpotential_cone_monomial():
    g = PLFunction("t", [(1, 2)])
    cone = superpotential_cone([g], [0])
    assert cone.contains((1, 0)) and cone.contains((0, 0))
    assert not cone.contains((-1, 0))
    gT = PLFunction("T", [(1, 0)])
    coneT = superpotential_cone([gT], [0])
    assert coneT.contains((-2, 5)) and not coneT.contains((1, 0))


def test_superpotential_offsets():
    g = PLFunction("t", [(1, 0), (0, 1)])
    c = superpotential_cone([g], [-2])
    # min(x, y) >= -2 expands into two exact linear inequalities
    assert c.contains((-2, 5)) and not c.contains((-3, 0))
    assert len(c.ineqs) == 2


def test_slice_simplicial_cone():
    cone = Cone([((1, 0), 0), ((0, 1), 0)], 2)
    fib = AffineSubspace([((1, 1), 1)], 2)
    seg = slice_cone(cone, fib)
    assert seg.vertices == ((0, 1), (1, 0))
    empty = slice_cone(cone, AffineSubspace([((1, 1), -1)], 2))
    assert empty.is_empty()


def test_slice_unbounded():
    cone = Cone([((1, 1), 0)], 2)
    with pytest.raises(Unbounded):
        slice_cone(cone, AffineSubspace([((1, 1), 1)], 2))


def test_lattice_points_examples():
    square = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(lattice_points(square)) == 4
    big = square.scale(2)
    assert len(lattice_points(big)) == 9
    assert lattice_points(Polytope([], [], [], 2)) == []


def test_lattice_points_brute_force():
    rng = random.Random(21)
    for _ in range(5):
        pts = [tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(6)]
        p = convex_hull(pts)
        got = set(lattice_points(p))
        lo = [min(v[i] for v in p.vertices) for i in range(3)]
        hi = [max(v[i] for v in p.vertices) for i in range(3)]
        brute = set()
        for q in itertools.product(*[range(math.ceil(a), math.floor(b) + 1)
                                     for a, b in zip(lo, hi)]):
            if p.contains(q):
                brute.add(q)
        assert got == brute


def test_verify_unimodular():
    square = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert verify_unimodular(square, square, Mat.identity(2), (0, 0))
    sheared = convex_hull([(0, 0), (1, 1), (0, 1), (1, 2)])
    u = Mat([[1, 0], [1, 1]])
    assert verify_unimodular(square, sheared, u, (0, 0))
    double = Mat([[2, 0], [0, 1]])
    stretched = convex_hull([(0, 0), (2, 0), (0, 1), (2, 1)])
    assert not verify_unimodular(square, stretched, double, (0, 0))


def test_minkowski_scaling_of_slices():
    cone = Cone([((1, 0), 0), ((0, 1), 0), ((1, -1), 0)], 2)
    s1 = slice_cone(cone, AffineSubspace([((1, 1), 1)], 2))
    s3 = slice_cone(cone, AffineSubspace([((1, 1), 3)], 2))
    assert s3 == s1.scale(3)


def test_empty_hull_raises():
    with pytest.raises(EmptyInput):
        convex_hull([])
