import math

import numpy as np
import pytest

from src.coverage import (
    empirical_helly_number,
    helly_triple_property,
    impossibility_certificate,
    min_core_residual,
    rigid_cover,
    translation_cover,
)
from src.geometry.core import (
    Configuration,
    InvalidParameterError,
    Point2,
    RigidMotion,
    apply,
    contains_all,
    rotation_matrix,
    signed_excess,
)
from src.lemma import regular_polygon_config
from tests.helpers import random_convex_body


def _config(rows) -> Configuration:
    return Configuration(tuple(Point2(x, y) for x, y in rows))


def test_square_covers_shifted_square(square2):
    res = translation_cover(_config([(0, 0), (2, 0), (2, 2), (0, 2)]), square2)
    assert res.found
    assert res.margin == pytest.approx(0.0, abs=1e-7)
    assert res.motion.t == pytest.approx((1.0, 1.0), abs=1e-6)
    assert res.solver_agreement is True


def test_square_translation_margins(square2):
    res = translation_cover(_config([(0, 0), (1.5, 0)]), square2)
    assert res.found
    assert res.margin == pytest.approx(0.25, abs=1e-6)

    res = translation_cover(_config([(0, 0), (2.5, 0)]), square2)
    assert not res.found
    assert res.motion is None
    assert res.margin == pytest.approx(-0.25, abs=1e-6)


def test_disc_translation(disc1):
    res = translation_cover(_config([(0, 0), (1.5, 0)]), disc1)
    assert res.found
    assert res.margin == pytest.approx(0.25, abs=1e-4)
    assert res.solver_agreement is None
    assert not translation_cover(_config([(0, 0), (2.5, 0), (1, 1)]), disc1).found


def test_min_core_residual_matches_geometry(square2):
    value, t = min_core_residual(np.array([[0.0, 0.0], [1.0, 0.0]]), square2)
    assert value == pytest.approx(-0.5, abs=1e-9)
    assert t[0] == pytest.approx(0.5, abs=1e-9)


@pytest.mark.slow
def test_translation_solvers_agree_on_random_instances():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        body = random_convex_body(rng, 7)
        pts = rng.normal(scale=0.8, size=(5, 2))
        res = translation_cover(_config(pts), body)
        assert res.solver_agreement is True


def test_helly_triples_on_translation(square2):
    report = helly_triple_property(_config([(0, 0), (1, 0), (0, 1), (1, 1)]), square2)
    assert report.whole_coverable and report.all_triples_coverable

    report = helly_triple_property(_config([(0, 0), (1, 0), (3, 0), (0, 1)]), square2)
    assert not report.whole_coverable
    assert report.witness == (0, 1, 2)
    assert not report.violation


def test_helly_triples_need_three_points(square2):
    with pytest.raises(InvalidParameterError):
        helly_triple_property(_config([(0, 0), (1, 0)]), square2)


def test_rigid_cover_finds_rotation(square2):
    corners = np.array([[-0.9, -0.9], [0.9, -0.9], [0.9, 0.9], [-0.9, 0.9]])
    pts = corners @ rotation_matrix(math.pi / 6).T + np.array([3.0, -1.0])
    config = _config(pts)
    assert not translation_cover(config, square2).found

    res = rigid_cover(config, square2, grid_n=360)
    assert res.found
    assert not res.inconclusive
    assert res.margin == pytest.approx(0.1, abs=1e-6)
    assert math.fmod(res.motion.theta, math.pi / 2) == pytest.approx(math.pi / 6, abs=0.15)
    assert np.all(contains_all(apply(res.motion, square2), pts))


def test_rigid_cover_reports_impossibility(square2, origin):
    octagon, _ = regular_polygon_config(origin, 1.0, 0.1, 8)
    res = rigid_cover(octagon, square2, grid_n=36)
    assert not res.found
    assert not res.inconclusive
    cert = res.certificate_of_impossibility
    assert cert.hull_inradius == pytest.approx(1.1, abs=1e-9)
    assert cert.body_inradius == pytest.approx(1.0, abs=1e-9)
    assert res.margin == pytest.approx(-0.1, abs=1e-9)


def test_impossibility_needs_a_real_hull(square2):
    assert impossibility_certificate(np.array([[0.0, 0.0], [5.0, 0.0]]), square2, 1e-7) is None


def test_rigid_cover_rejects_bad_grid(square2):
    with pytest.raises(InvalidParameterError):
        rigid_cover(_config([(0, 0)]), square2, grid_n=0)


def test_rounded_body_rigid_cover(rounded_triangle):
    res = rigid_cover(_config([(0.2, 0.1), (-0.3, 0.4)]), rounded_triangle, grid_n=12)
    assert res.found
    assert res.margin > 0.0


def test_helly_number_of_coverable_set(square2):
    est = empirical_helly_number(_config([(-1, -1), (1, -1), (1, 1), (-1, 1)]), square2)
    assert est.k_max == 4
    assert est.n_points == 4


def test_helly_number_stops_at_first_failing_pair(square2):
    big = _config([(-1.1, -1.1), (1.1, -1.1), (1.1, 1.1), (-1.1, 1.1)])
    est = empirical_helly_number(big, square2)
    assert est.k_max == 1
    assert est.mode == "exhaustive"


def test_helly_number_rejects_bad_budget(square2):
    with pytest.raises(InvalidParameterError):
        empirical_helly_number(_config([(0, 0), (1, 0)]), square2, budget=0)


@pytest.mark.slow
def test_helly_number_of_lemma_polygon(square2, origin):
    config, _ = regular_polygon_config(origin, 1.0, 0.01, 40)
    est = empirical_helly_number(config, square2, budget=60, seed=3)
    assert 3 <= est.k_max < 40
    assert est.mode == "sampled"


def test_single_point_margin_is_clearance(square2):
    res = translation_cover(_config([(5, 5)]), square2)
    assert res.found
    assert res.margin == pytest.approx(1.0, abs=1e-9)


def test_rigid_dominates_translation(tri_eq):
    rng = np.random.default_rng(31)
    for _ in range(10):
        config = _config(rng.uniform(-1.2, 1.2, size=(4, 2)))
        if translation_cover(config, tri_eq).found:
            assert rigid_cover(config, tri_eq, grid_n=24).found


def test_impossibility_agrees_with_brute_force(square2, origin):
    octagon, _ = regular_polygon_config(origin, 1.0, 0.05, 8)
    assert rigid_cover(octagon, square2, grid_n=8).certificate_of_impossibility is not None
    pts = octagon.as_array()
    ts = np.linspace(-0.5, 0.5, 25)
    for theta in np.linspace(0.0, 2 * math.pi, 16, endpoint=False):
        for tx in ts:
            for ty in ts:
                moved = apply(RigidMotion(theta, (tx, ty)), square2)
                assert not np.all(contains_all(moved, pts))


@pytest.mark.slow
def test_translation_helly_on_random_instances():
    rng = np.random.default_rng(100)
    for _ in range(100):
        body = random_convex_body(rng, int(rng.integers(3, 5)))
        pts = rng.normal(scale=0.7, size=(int(rng.integers(5, 13)), 2))
        report = helly_triple_property(_config(pts), body)
        assert not report.violation


def test_midpoint_of_two_covering_translations_covers(rounded_triangle):
    tol = 1e-7
    rng = np.random.default_rng(31)
    checked = 0
    for i in range(21):
        pts = rng.uniform(-0.4, 0.4, size=(4, 2))
        res = translation_cover(_config(pts), rounded_triangle, tol=tol)
        assert res.found
        t1 = np.array(res.motion.t)
        step = rng.normal(size=2)
        # within the margin t2 always covers, beyond it only sometimes
        t2 = t1 + (0.9, 2.0, 3.0)[i % 3] * res.margin * step / np.linalg.norm(step)
        if np.max(signed_excess(rounded_triangle, pts - t2)) > tol:
            continue
        mid = 0.5 * (t1 + t2)
        assert np.max(signed_excess(rounded_triangle, pts - mid)) <= 2 * tol
        checked += 1
    assert checked >= 7
