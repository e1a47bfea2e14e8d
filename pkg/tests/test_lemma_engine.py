import math

import numpy as np
import pytest

from src.geometry import inradius_of_points, marked_set
from src.geometry.core import (
    TWO_PI,
    AngularSet,
    BudgetExhausted,
    InvalidParameterError,
    Point2,
    contains,
)
from src.lemma import (
    CertificateBuilder,
    build_certificate,
    choose_construction_params,
    circumradius,
    regular_polygon_config,
    rotation_feasible_set,
    verify_certificate,
    verify_noncover,
    verify_subset,
)
from src.lemma.engine import rotate_about, vertex_angles
from src.utils.body_loader import parse_certificate
from src.utils.serializers import dumps
from tests.helpers import square_alpha


def test_regular_polygon_recovers_square_corners(square2, origin):
    config, R = regular_polygon_config(origin, 1.0, 0.0, 4, phase=math.pi / 4)
    assert R == pytest.approx(math.sqrt(2.0))
    corners = sorted((round(p.x, 12), round(p.y, 12)) for p in config.points)
    assert corners == [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    assert all(contains(square2, p) for p in config.points)


def test_regular_polygon_inradius(origin):
    config, R = regular_polygon_config(origin, 1.0, 0.1, 8)
    assert R == pytest.approx(1.1 / math.cos(math.pi / 8))
    assert len(config) == 8
    assert all(p.norm() == pytest.approx(R) for p in config.points)


@pytest.mark.parametrize("n, eps", [(2, 0.1), (4.5, 0.1), (8, -0.1)])
def test_regular_polygon_rejects_bad_params(origin, n, eps):
    with pytest.raises(InvalidParameterError):
        regular_polygon_config(origin, 1.0, eps, n)


def test_square_params_for_k3(square2, origin):
    params, alpha = choose_construction_params(square2, origin, 3)
    assert (params.epsilon, params.n) == (pytest.approx(0.01), 40)
    assert params.R == pytest.approx(1.01 / math.cos(math.pi / 40), rel=1e-12)
    assert params.R == pytest.approx(1.01311, abs=1e-4)
    assert alpha == pytest.approx(square_alpha(params.R), abs=1e-12)
    assert alpha == pytest.approx(1.28899, abs=1e-3)
    assert 3 * alpha < TWO_PI


def test_square_params_for_k10(square2, origin):
    params, alpha = choose_construction_params(square2, origin, 10)
    assert (params.epsilon, params.n) == (pytest.approx(0.001), 200)
    assert alpha == pytest.approx(square_alpha(circumradius(1.0, 0.001, 200)), abs=1e-10)
    assert 10 * alpha < TWO_PI


def test_halving_schedule_finds_minimal_n(square2, origin):
    params, alpha = choose_construction_params(square2, origin, 3, schedule="halving")
    limit = TWO_PI / (3 * 1.05)
    assert params.epsilon == pytest.approx(1.0 / 32)
    assert alpha < limit
    smaller = marked_set(square2, origin, circumradius(1.0, params.epsilon, params.n - 1)).alpha
    assert smaller >= limit


def test_disc_exhausts_budget(disc1, origin):
    with pytest.raises(BudgetExhausted):
        choose_construction_params(disc1, origin, 2, budget=4)


def test_bad_schedule_and_k(square2, origin):
    with pytest.raises(InvalidParameterError):
        choose_construction_params(square2, origin, 3, schedule="fibonacci")
    with pytest.raises(InvalidParameterError):
        choose_construction_params(square2, origin, 0)


def test_feasible_set_of_empty_marking_is_full():
    assert rotation_feasible_set(AngularSet.empty(), [0.0, 1.0]).is_full


def test_feasible_set_avoids_shifted_marks():
    U = AngularSet.from_bounds([(-0.1, 0.1)])
    feasible = rotation_feasible_set(U, [0.0, math.pi])
    assert feasible.measure == pytest.approx(TWO_PI - 0.4)
    assert not feasible.contains_angle(0.0)
    assert not feasible.contains_angle(math.pi)
    assert feasible.contains_angle(math.pi / 2)


def test_verify_subset_margin(square2, origin):
    config, _ = regular_polygon_config(origin, 1.0, 0.01, 40)
    assert verify_subset(square2, origin, config, [], 0.0) == math.inf
    # vertex 0 sits on the +x axis, just outside the edge x = 1
    assert verify_subset(square2, origin, config, [0], 0.0) < 0.0
    assert verify_subset(square2, origin, config, [0], math.pi / 4) > 0.0


def test_rotate_about_keeps_distances(origin):
    pts = np.array([[1.0, 0.0], [0.0, 2.0]])
    moved = rotate_about(pts, Point2(1.0, 1.0), 0.9)
    c = np.array([1.0, 1.0])
    assert np.hypot(*(moved - c).T) == pytest.approx(np.hypot(*(pts - c).T))


def test_verify_noncover(square2, origin):
    corners, _ = regular_polygon_config(origin, 1.0, 0.0, 4, phase=math.pi / 4)
    assert not verify_noncover(square2, corners)
    octagon, _ = regular_polygon_config(origin, 1.0, 0.1, 8)
    assert verify_noncover(square2, octagon)


def test_stadium_certificate_is_exhaustive(stadium):
    cert = build_certificate(stadium, 2)
    assert cert.center.as_tuple() == (1.0, 0.0)
    assert cert.params.n == 8
    assert cert.subset_strategy.mode == "exhaustive"
    assert len(cert.subset_results) == 28
    assert all(res.margin >= -1e-9 for res in cert.subset_results)
    assert cert.verdict
    assert verify_certificate(cert).ok


def test_disc_certificate_fails(disc1):
    with pytest.raises(BudgetExhausted):
        build_certificate(disc1, 2, budget=3)


def test_sampled_certificate_is_deterministic(square2):
    first = build_certificate(square2, 3, subset_budget=500, seed=4)
    second = build_certificate(square2, 3, subset_budget=500, seed=4)
    assert first.subset_strategy.to_dict()["mode"] == "sampled"
    assert "note" in first.subset_strategy.to_dict()
    assert dumps(first.to_dict()) == dumps(second.to_dict())
    report = verify_certificate(first)
    assert report.ok, report.violations
    assert report.subsets_checked == 500


def test_tampered_rotation_is_reported(square2):
    cert = build_certificate(square2, 3, subset_budget=200, seed=1)
    data = cert.to_dict()
    row = data["subset_results"][0]
    # park the first vertex of the subset on the +x axis, where it pokes out of the square
    i = row["subset"][0]
    row["theta"] = -TWO_PI * i / 40
    report = verify_certificate(parse_certificate(data))
    assert not report.ok
    assert any(v.startswith(f"subset {row['subset']}") for v in report.violations)


def test_tampered_alpha_is_reported(square2):
    data = build_certificate(square2, 3, subset_budget=50).to_dict()
    data["alpha"] = 2.5
    report = verify_certificate(parse_certificate(data))
    assert any(v.startswith("precondition") for v in report.violations)
    assert any(v.startswith("alpha") for v in report.violations)


def test_tampered_margin_is_reported(square2):
    data = build_certificate(square2, 3, subset_budget=50).to_dict()
    data["subset_results"][0]["margin"] = -0.5
    data["subset_results"][1]["margin"] += 0.01
    report = verify_certificate(parse_certificate(data))
    assert not report.ok
    stored = [v for v in report.violations if "stored margin" in v]
    assert len(stored) == 2


def test_moved_center_is_reported(square2):
    data = build_certificate(square2, 3, subset_budget=50).to_dict()
    data["center"] = [0.3, 0.0]
    report = verify_certificate(parse_certificate(data))
    assert not report.ok


@pytest.mark.slow
def test_square_certificate_k3_exhaustive(square2):
    cert = build_certificate(square2, 3)
    assert cert.subset_strategy.mode == "exhaustive"
    assert len(cert.subset_results) == math.comb(40, 3)
    assert verify_certificate(cert).ok


@pytest.mark.slow
def test_square_certificate_k10_sampled(square2):
    cert = build_certificate(square2, 10, seed=7)
    assert cert.params.n == 200
    assert cert.subset_strategy.mode == "sampled"
    assert cert.subset_strategy.count == 10_000
    assert len(cert.subset_results) == 10_000
    report = verify_certificate(cert)
    assert report.ok, report.violations
    assert report.hull_inradius - report.body_inradius >= 0.0005


def test_construction_inradius_is_exact(origin):
    for eps, n in [(0.1, 8), (0.01, 40), (0.001, 200)]:
        config, _ = regular_polygon_config(origin, 1.0, eps, n, phase=0.3)
        assert inradius_of_points(config.points) == pytest.approx(1.0 + eps, abs=1e-9)


def test_feasible_measure_bounds_and_soundness(stadium):
    cert = build_certificate(stadium, 2)
    U = marked_set(cert.body, cert.center, cert.params.R).U
    angles = np.array([(p - cert.center).angle() for p in cert.points.points])
    rng = np.random.default_rng(0)
    for res in cert.subset_results:
        feasible = rotation_feasible_set(U, angles[list(res.subset)])
        assert feasible.measure >= TWO_PI - cert.k * cert.alpha - 1e-9
        # any rotation inside the feasible set works, not only the recorded one
        arc = feasible.largest_arc()
        theta = arc.start + rng.uniform(0.05, 0.95) * arc.length
        assert verify_subset(cert.body, cert.center, cert.points, res.subset, theta) >= -1e-9


def test_sample_count_is_separate_from_threshold(square2):
    builder = CertificateBuilder(square2, 10)
    assert builder.subset_budget == 100_000
    assert builder.sample_count == 10_000
    # a small threshold also caps the default sample count
    assert CertificateBuilder(square2, 3, subset_budget=500).sample_count == 500

    cert = build_certificate(square2, 3, subset_budget=500, sample_count=60, seed=2)
    assert cert.subset_strategy.mode == "sampled"
    assert cert.subset_strategy.count == 60
    assert len(cert.subset_results) == 60
    with pytest.raises(InvalidParameterError):
        CertificateBuilder(square2, 3, sample_count=0)


def test_sampled_results_agree_with_exhaustive(stadium):
    full = build_certificate(stadium, 2)
    sampled = build_certificate(stadium, 2, subset_budget=10, seed=3)
    assert (full.subset_strategy.mode, sampled.subset_strategy.mode) == ("exhaustive", "sampled")
    by_subset = {res.subset: res for res in full.subset_results}
    for res in sampled.subset_results:
        assert by_subset[res.subset].theta == res.theta
        assert by_subset[res.subset].margin == res.margin
    assert verify_certificate(full).ok
    assert verify_certificate(sampled).ok


def test_square_k3_feasible_measure_on_sampled_subsets(square2):
    cert = build_certificate(square2, 3, subset_budget=100, seed=11)
    assert len(cert.subset_results) == 100
    U = marked_set(cert.body, cert.center, cert.params.R).U
    angles = vertex_angles(cert.points, cert.center)
    for res in cert.subset_results:
        feasible = rotation_feasible_set(U, angles[list(res.subset)])
        assert feasible.measure >= TWO_PI - 3 * cert.alpha - 1e-9
