import numpy as np
import pytest

from sparsehelly import core
from sparsehelly.core import (
    AffineMap,
    Ellipsoid,
    GeometryError,
    HPolytope,
    VPolytope,
    apply_affine,
    negate,
    unit_ball_volume,
)


def test_affine_inverse_round_trip(rng):
    for _ in range(20):
        d = int(rng.integers(1, 5))
        T = AffineMap(rng.standard_normal((d, d)) + 3 * np.eye(d), rng.standard_normal(d))
        x = rng.standard_normal((7, d))
        np.testing.assert_allclose(T.inverse()(T(x)), x, atol=1e-10)
        np.testing.assert_allclose(T.compose(T.inverse())(x), x, atol=1e-10)


def test_singular_map_rejected():
    with pytest.raises(GeometryError):
        AffineMap(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_hrep_image_preserves_membership(rng):
    d = 3
    H = HPolytope(rng.standard_normal((10, d)), np.ones(10))
    T = AffineMap(rng.standard_normal((d, d)) + 2 * np.eye(d), rng.standard_normal(d))
    TH = apply_affine(T, H)
    X = 0.5 * rng.standard_normal((500, d))
    inside = np.all(X @ H.A.T <= H.b, axis=1)
    inside_img = np.all(T(X) @ TH.A.T <= TH.b + 1e-9, axis=1)
    assert inside.any() and (~inside).any()
    # points far from the boundary must agree exactly
    margin = np.min(np.abs(X @ H.A.T - H.b), axis=1) > 1e-6
    assert np.array_equal(inside[margin], inside_img[margin])


def test_vrep_image_and_negate():
    V = VPolytope(np.array([[1.0, 0.0], [0.0, 2.0], [-1.0, -1.0]]), tags=(4, 5, 6))
    T = AffineMap(2 * np.eye(2), [1.0, 0.0])
    W = apply_affine(T, V)
    np.testing.assert_allclose(W.points, 2 * V.points + [1.0, 0.0])
    assert W.tags == V.tags
    np.testing.assert_allclose(negate(V).points, -V.points)


def test_hpolytope_basics():
    H = HPolytope(np.array([[2.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]), np.array([2.0, 1.0, 1.0]))
    assert H.dim == 2 and len(H) == 3
    assert H.contains([0.5, 0.5]) and not H.contains([2.0, 0.0])
    Hn = H.normalized()
    np.testing.assert_allclose(np.linalg.norm(Hn.A, axis=1), 1.0)
    assert H.subset([0, 2]).tags is None
    tagged = HPolytope(H.A, H.b, tags=(7, 8, 9))
    assert tagged.subset([0, 2]).tags == (7, 9)


def test_ellipsoid_volume_and_validation():
    E = Ellipsoid(np.zeros(2), np.diag([2.0, 1.0]))
    assert E.volume() == pytest.approx(2 * np.pi)
    np.testing.assert_allclose(E.quadratic_form, np.diag([4.0, 1.0]))
    with pytest.raises(GeometryError):
        Ellipsoid(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(GeometryError):
        Ellipsoid(np.zeros(2), -np.eye(2))


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(np.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * np.pi / 3)


def test_set_tolerance_takes_effect():
    old = core.tolerance()
    try:
        core.set_tolerance(1e-6)
        assert core.tolerance() == 1e-6
        assert core.tolerance(1e-3) == 1e-3
    finally:
        core.set_tolerance(old)
    with pytest.raises(ValueError):
        core.set_tolerance(-1.0)
