import json

import numpy as np
import pytest

from sparsehelly.core import DegenerateInput, OriginNotInterior, VPolytope
from sparsehelly.io import dumps
from sparsehelly.polarity import contains, gauge
from sparsehelly.sparse_select import (
    SelectionCertificate,
    SimplexMode,
    boundary_point,
    caratheodory_select,
    check_local_maximality_gives_P,
    in_parallelotope,
    max_simplex,
    parallelotope_P,
    sparse_approx,
    verify_certificate,
)

from conftest import instance_v

SQUARE = VPolytope(np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))


def test_square_max_simplex():
    s = max_simplex(SQUARE)
    # |det| = 2 for any adjacent pair, so the origin triangle has area 1
    assert s.volume == pytest.approx(1.0)
    assert s.indices == (0, 1)


def test_square_boundary_point():
    u, y, fallback = boundary_point(SQUARE, (0, 1))
    np.testing.assert_allclose(u, [0.0, 1.0])
    np.testing.assert_allclose(y, [0.0, -1.0])
    assert not fallback


def test_cross_polytope_selection():
    Q = instance_v("cross", 3, 0)
    cert = sparse_approx(Q)
    assert cert.simplex.indices == (0, 1, 2)
    np.testing.assert_allclose(cert.y, -np.ones(3) / 3)
    assert set(cert.carath_indices) == {3, 4, 5}
    np.testing.assert_allclose(cert.carath_weights, 1 / 3)
    assert cert.qprime_indices == (0, 1, 2, 3, 4, 5)
    assert cert.lambda_measured == pytest.approx(1.0)
    assert cert.factor == pytest.approx(9.0)
    assert verify_certificate(Q, cert)


def test_parallelotope_representations_agree(rng):
    V = rng.standard_normal((3, 3))
    corners, H = parallelotope_P(V)
    assert len(corners) == 8
    assert np.all(corners.points @ H.A.T <= H.b + 1e-9)
    assert np.all(in_parallelotope(V, corners.points))
    assert not in_parallelotope(V, 1.01 * corners.points[:1])[0]


def test_parallelotope_needs_independent_vectors():
    with pytest.raises(DegenerateInput):
        parallelotope_P(np.array([[1.0, 0.0], [2.0, 0.0]]))


def test_maximal_simplex_gives_parallelotope(rng):
    for i in range(30):
        Q = instance_v("random-vpoly", 3, 9, i)
        for mode in SimplexMode:
            assert check_local_maximality_gives_P(Q, max_simplex(Q, mode))


def test_submaximal_simplex_misses_points():
    Q = VPolytope(np.array([[1.0, 0.0], [0.0, 1.0], [-3.0, -3.0], [0.5, -2.0]]))
    best = max_simplex(Q)
    assert check_local_maximality_gives_P(Q, best)
    assert not check_local_maximality_gives_P(Q, (0, 1))


def test_swap_close_to_exhaustive(capsys):
    ratios = []
    for i in range(100):
        Q = instance_v("random-vpoly", 3, 1, i, n=12)
        ex = max_simplex(Q, SimplexMode.EXHAUSTIVE).volume
        sw = max_simplex(Q, SimplexMode.SWAP).volume
        assert sw <= ex * (1 + 1e-12)
        ratios.append(sw / ex)
    ratios = np.array(ratios)
    with capsys.disabled():
        print(f"\nswap/exhaustive volume ratio: min {ratios.min():.4f}, "
              f"5% {np.percentile(ratios, 5):.4f}, median {np.median(ratios):.4f}, "
              f">= 0.99 on {np.count_nonzero(ratios >= 0.99)}/100")
    # frozen from the exhaustive oracle on this corpus
    assert np.count_nonzero(ratios >= 0.99) == 93
    assert np.median(ratios) == 1.0


def test_swap_result_is_locally_maximal():
    for i in range(30):
        Q = instance_v("random-vpoly", 3, 1, i, n=12)
        idx = list(max_simplex(Q, SimplexMode.SWAP).indices)
        P = np.asarray(Q.points)
        base = abs(np.linalg.det(P[idx]))
        for pos in range(3):
            for k in range(len(P)):
                trial = idx.copy()
                trial[pos] = k
                assert abs(np.linalg.det(P[trial])) <= base * (1 + 1e-9)


def test_caratheodory_support_and_reconstruction(rng):
    for i in range(30):
        Q = instance_v("random-vpoly", 3, 4, i)
        P = np.asarray(Q.points)
        d = rng.standard_normal(3)
        y = d / gauge(Q, d).value
        idx, w, _ = caratheodory_select(Q, y)
        assert len(idx) <= 3
        assert np.all(np.array(w) > 0) and sum(w) == pytest.approx(1.0)
        np.testing.assert_allclose(np.array(w) @ P[list(idx)], y, atol=1e-9)


def test_segment_between_u_and_y_is_covered():
    for i in range(10):
        Q = instance_v("random-vpoly", 3, 6, i)
        cert = sparse_approx(Q)
        Qp = Q.subset(cert.qprime_indices)
        for t in np.linspace(0.0, 1.0, 11):
            assert contains(Qp, (1 - t) * cert.u + t * cert.y)


@pytest.mark.parametrize("mode", list(SimplexMode))
def test_random_certificates_verify(mode):
    for d in (2, 3, 4):
        for i in range(15):
            Q = instance_v("random-vpoly", d, 2, i)
            cert = sparse_approx(Q, mode=mode)
            assert len(cert.qprime_indices) <= 2 * d
            assert cert.factor == pytest.approx((cert.lambda_used + 2) * d)
            assert verify_certificate(Q, cert)


def test_external_lambda_only_raises_factor():
    Q = instance_v("random-symmetric-vpoly", 2, 1)
    assert sparse_approx(Q, lam=0.5).lambda_used == pytest.approx(1.0)
    assert sparse_approx(Q, lam=2.0).factor == pytest.approx(8.0)


def test_exhaustive_permutation_invariance(rng):
    for i in range(10):
        Q = instance_v("random-vpoly", 3, 8, i)
        perm = rng.permutation(len(Q))
        Qp = VPolytope(Q.points[perm])
        a = sparse_approx(Q)
        b = sparse_approx(Qp)
        sel_a = {tuple(np.round(Q.points[j], 12)) for j in a.qprime_indices}
        sel_b = {tuple(np.round(Qp.points[j], 12)) for j in b.qprime_indices}
        assert sel_a == sel_b
        assert a.factor == pytest.approx(b.factor)


def test_origin_must_be_interior():
    Q = VPolytope(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(OriginNotInterior):
        sparse_approx(Q)


def test_certificate_json_round_trip():
    Q = instance_v("random-vpoly", 3, 3)
    cert = sparse_approx(Q)
    back = SelectionCertificate.from_dict(json.loads(dumps(cert.to_dict())))
    assert back.qprime_indices == cert.qprime_indices
    assert back.factor == cert.factor
    np.testing.assert_array_equal(back.y, cert.y)
    assert verify_certificate(Q, back)


def test_verifier_names_the_failing_check():
    Q = instance_v("random-vpoly", 3, 3)
    cert = sparse_approx(Q)
    v = verify_certificate(Q, cert.replace(factor=1e-3))
    assert not v and v.failed == "d"
    v = verify_certificate(Q, cert.replace(y=2 * cert.y))
    assert not v and v.failed == "structure"
    v = verify_certificate(Q, cert.replace(lambda_used=1e-3))
    assert not v and v.failed == "c"
