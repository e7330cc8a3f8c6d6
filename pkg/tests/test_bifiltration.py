import numpy as np
import pytest

from landbands.bifiltration import (Bifiltration, Bigrade,
                                    build_rips_codensity, load_bifiltration,
                                    normalize, save_bifiltration, validate)
from landbands.pointcloud import PointCloud, gaussian_kde, sample_torus
from oracles import bifiltration_from_dict, random_bifiltration


def _cloud(points):
    return PointCloud(np.asarray(points, dtype=np.float64))


def test_two_points_grading_rule():
    cloud = _cloud([[0, 0, 0], [1, 0, 0]])
    bif = build_rips_codensity(cloud, np.array([2.0, 2.0]), max_scale=2.0)
    grades = {vs: g for vs, _, g in bif.iter_simplices()}
    assert grades[(0,)] == Bigrade(0.0, 0.0)
    assert grades[(1,)] == Bigrade(0.0, 0.0)
    assert grades[(0, 1)] == Bigrade(1.0, 0.0)
    assert len(bif) == 3


def test_codensity_is_max_density_minus_density():
    cloud = _cloud([[0, 0, 0], [1, 0, 0]])
    bif = build_rips_codensity(cloud, np.array([5.0, 3.0]), max_scale=2.0)
    grades = {vs: g for vs, _, g in bif.iter_simplices()}
    assert grades[(0,)] == Bigrade(0.0, 0.0)
    assert grades[(1,)] == Bigrade(0.0, 2.0)
    assert grades[(0, 1)] == Bigrade(1.0, 2.0)  # max over endpoints


def test_long_edge_and_triangle_excluded_by_max_scale():
    cloud = _cloud([[0, 0, 0], [1, 0, 0], [2, 0, 0]])
    bif = build_rips_codensity(cloud, np.ones(3), max_scale=1.5, max_dim=2)
    simplices = [vs for vs, _, _ in bif.iter_simplices()]
    assert simplices == [(0,), (1,), (2,), (0, 1), (1, 2)]


def test_max_scale_is_inclusive_and_defaults_to_diameter():
    cloud = _cloud([[0, 0, 0], [1, 0, 0]])
    at_cutoff = build_rips_codensity(cloud, np.ones(2), max_scale=1.0)
    assert len(at_cutoff) == 3  # edge at distance exactly max_scale stays
    default = build_rips_codensity(cloud, np.ones(2))
    assert len(default) == 3


def test_counts_match_cloud_and_distance_graph():
    cloud = sample_torus(40, 3.0, 0.7, seed=5)
    density = gaussian_kde(cloud, 0.9)
    bif = build_rips_codensity(cloud, density, max_scale=1.2)
    dims = [d for _, d, _ in bif.iter_simplices()]
    assert dims.count(0) == 40
    diff = cloud.points[:, None, :] - cloud.points[None, :, :]
    dist = np.sqrt((diff ** 2).sum(-1))
    expected_edges = int(np.sum(np.triu(dist <= 1.2, 1)))
    assert dims.count(1) == expected_edges


def test_build_output_passes_validate_and_is_sorted():
    rng = np.random.default_rng(7)
    for _ in range(5):
        cloud = PointCloud(rng.normal(size=(12, 3)))
        density = gaussian_kde(cloud, 0.8)
        bif = build_rips_codensity(cloud, density, max_scale=None, max_dim=2)
        assert validate(bif) == []
        keys = [(d, vs) for vs, d, _ in bif.iter_simplices()]
        assert keys == sorted(keys)


def test_scaling_cloud_scales_scale_axis():
    rng = np.random.default_rng(8)
    pts = rng.normal(size=(10, 3))
    density = np.ones(10)
    a = build_rips_codensity(PointCloud(pts), density, max_scale=None)
    b = build_rips_codensity(PointCloud(2.5 * pts), density, max_scale=None)
    assert len(a) == len(b)
    np.testing.assert_allclose(b.grades[:, 0], 2.5 * a.grades[:, 0], rtol=1e-10)


def test_mismatched_density_length_rejected():
    cloud = _cloud([[0, 0, 0], [1, 0, 0]])
    with pytest.raises(ValueError):
        build_rips_codensity(cloud, np.ones(3), max_scale=1.0)
    with pytest.raises(ValueError):
        build_rips_codensity(cloud, np.ones(2), max_scale=1.0, max_dim=0)


def test_normalize_affine_endpoints():
    bif = bifiltration_from_dict({(0,): (0.0, 0.0), (1,): (2.0, 4.0)}, T=4.0)
    out = normalize(bif, 1.0)
    grades = {vs: g for vs, _, g in out.iter_simplices()}
    assert grades[(0,)] == Bigrade(0.0, 0.0)
    assert grades[(1,)] == Bigrade(1.0, 1.0)
    assert out.T == 1.0


def test_normalize_identity_when_extremes_span_box():
    bif = bifiltration_from_dict({(0,): (0.0, 0.0), (1,): (1.0, 1.0),
                                  (0, 1): (1.0, 1.0)}, T=1.0)
    out = normalize(bif, 1.0)
    np.testing.assert_array_equal(out.grades, bif.grades)


def test_normalize_idempotent_and_in_box():
    rng = np.random.default_rng(11)
    for _ in range(20):
        bif = random_bifiltration(rng, max_simplices=8)
        once = normalize(bif, 1.0)
        twice = normalize(once, 1.0)
        assert np.max(np.abs(twice.grades - once.grades)) <= 1e-15
        assert once.grades.min() >= 0.0 and once.grades.max() <= 1.0
        assert validate(once) == []


def test_normalize_degenerate_axis_maps_to_zero():
    bif = bifiltration_from_dict({(0,): (1.0, 3.0), (1,): (2.0, 3.0)}, T=3.0)
    out = normalize(bif, 1.0)
    np.testing.assert_array_equal(out.grades[:, 1], [0.0, 0.0])
    np.testing.assert_array_equal(out.grades[:, 0], [0.0, 1.0])


def test_normalize_rejects_empty_and_bad_T():
    empty = Bifiltration(verts=np.empty((0, 3), dtype=np.int32),
                         dims=np.empty(0, dtype=np.int8),
                         grades=np.empty((0, 2)), T=1.0, max_dim=2)
    with pytest.raises(ValueError):
        normalize(empty, 1.0)
    bif = bifiltration_from_dict({(0,): (0.0, 0.0)}, T=1.0)
    with pytest.raises(ValueError):
        normalize(bif, 0.0)


def test_validate_reports_planted_monotonicity_defect():
    bif = bifiltration_from_dict({(0,): (0.5, 0.5), (1,): (0.0, 0.0),
                                  (0, 1): (0.25, 0.5)}, T=1.0)
    violations = validate(bif)
    assert len(violations) == 1
    assert "grade" in violations[0]


def test_validate_reports_planted_closure_defect():
    bif = bifiltration_from_dict({(0,): (0, 0), (1,): (0, 0), (2,): (0, 0),
                                  (0, 1): (1, 0), (0, 2): (1, 0),
                                  (0, 1, 2): (1, 0)}, T=1.0)
    violations = validate(bif)
    assert len(violations) == 1
    assert "missing" in violations[0]


def test_single_point_cloud_degenerates_gracefully():
    bif = build_rips_codensity(_cloud([[0, 0, 0]]), np.array([1.0]))
    assert len(bif) == 1
    assert bif.T == 1.0  # fallback box for all-zero grades
    assert validate(bif) == []


def test_bifiltration_file_roundtrip(tmp_path):
    rng = np.random.default_rng(13)
    bif = random_bifiltration(rng, max_simplices=8)
    path = tmp_path / "complex.bif"
    save_bifiltration(path, bif)
    back = load_bifiltration(path)
    assert back.T == bif.T
    assert back.max_dim == bif.max_dim
    np.testing.assert_array_equal(back.verts, bif.verts)
    np.testing.assert_array_equal(back.dims, bif.dims)
    np.testing.assert_array_equal(back.grades, bif.grades)


def test_bifiltration_file_validation(tmp_path):
    bad_header = tmp_path / "a.bif"
    bad_header.write_text("T=1\n")
    with pytest.raises(ValueError):
        load_bifiltration(bad_header)
    bad_line = tmp_path / "b.bif"
    bad_line.write_text("T=1 max_dim=2\n1 0 0.5\n")
    with pytest.raises(ValueError):
        load_bifiltration(bad_line)
    empty = tmp_path / "c.bif"
    empty.write_text("T=1 max_dim=2\n")
    with pytest.raises(ValueError):
        load_bifiltration(empty)
    too_deep = tmp_path / "d.bif"
    too_deep.write_text("T=1 max_dim=1\n2 0 1 2 0.5 0.5\n")
    with pytest.raises(ValueError):
        load_bifiltration(too_deep)
