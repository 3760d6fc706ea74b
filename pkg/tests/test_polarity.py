import numpy as np
import pytest

from sparsehelly.core import HPolytope, OriginNotInterior, VPolytope
from sparsehelly.generate import regular_simplex_normals
from sparsehelly.hull import convex_hull, vertices_of_hpolytope
from sparsehelly.polarity import (
    contains,
    gauge,
    origin_is_interior,
    polar_of_hrep,
    polar_of_vrep,
    symmetry_constant,
)

from conftest import cube, instance_v


def test_polar_of_cube_is_cross_polytope():
    Q = polar_of_hrep(cube(3))
    expected = np.vstack([np.eye(3), -np.eye(3)])
    np.testing.assert_allclose(Q.points, expected)
    assert Q.tags == tuple(range(6))


def test_polar_requires_origin_inside():
    H = HPolytope(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]),
                  np.array([1.0, 0.0, 1.0, 1.0]))
    with pytest.raises(OriginNotInterior):
        polar_of_hrep(H)


def test_gauge_values():
    cross = instance_v("cross", 2, 0)
    assert gauge(cross, [0.5, 0.5]).value == pytest.approx(1.0)
    assert gauge(cross, [0.0, -3.0]).value == pytest.approx(3.0)
    sq = VPolytope(np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))
    assert gauge(sq, [0.5, 0.25]).value == pytest.approx(0.5)
    assert gauge(sq, [0.0, 0.0]).value == 0.0


def test_gauge_infinite_when_origin_on_boundary():
    tri = VPolytope(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert gauge(tri, [-1.0, 0.0]).value == np.inf
    assert not origin_is_interior(tri)


def test_contains():
    sq = VPolytope(np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))
    assert contains(sq, [1.0, 1.0])
    assert contains(sq, [0.3, -0.9])
    assert not contains(sq, [1.0 + 1e-6, 0.0])


def test_bipolar_membership(rng):
    for d in (2, 3):
        P = rng.standard_normal((12, d))
        Q = VPolytope(P - P.mean(axis=0))
        assert origin_is_interior(Q)
        polar = polar_of_vrep(Q)
        bipolar = polar_of_hrep(polar)
        X = 2 * rng.standard_normal((200, d))
        for x in X:
            a = contains(Q, x)
            b = contains(bipolar, x)
            g = gauge(Q, x).value
            if abs(g - 1) > 1e-6:
                assert a == b == (g <= 1)


def test_polar_reverses_inclusion(rng):
    d = 3
    Q = VPolytope(rng.standard_normal((15, d)))
    Q = VPolytope(Q.points - Q.points.mean(axis=0))
    R = Q.scaled(0.5)
    assert np.all(polar_of_vrep(R).b == 1.0)
    # vertices of Q° lie in R° (since R ⊆ Q)
    VQ = vertices_of_hpolytope(polar_of_vrep(Q))
    HR = polar_of_vrep(R)
    assert np.all(VQ.points @ HR.A.T <= HR.b + 1e-9)
    # scaling: (tQ)° = Q°/t
    VR = vertices_of_hpolytope(HR)
    assert len(VR) == len(VQ)
    for v in VQ.points:
        assert np.min(np.linalg.norm(VR.points - 2 * v, axis=1)) < 1e-7


def test_polar_of_vrep_uses_extreme_points_only():
    pts = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [0.2, 0.1]])
    H = polar_of_vrep(VPolytope(pts))
    assert sorted(H.tags) == [0, 1, 2, 3]


def test_symmetry_constant():
    sq = VPolytope(np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))
    assert symmetry_constant(sq) == pytest.approx(1.0)
    for d in (2, 3, 4):
        S = VPolytope(-d * regular_simplex_normals(d))
        assert symmetry_constant(S) == pytest.approx(d, rel=1e-9)
        assert len(convex_hull(S.points).extreme_indices) == d + 1


def test_symmetry_constant_of_symmetric_bodies_is_one():
    for i in range(10):
        Q = instance_v("random-symmetric-vpoly", 3, 5, i)
        assert symmetry_constant(Q) == pytest.approx(1.0, abs=1e-9)
