"""Scene generation: geometry, determinism, ground-truth polar coordinates."""

import math

import numpy as np
import pytest

from chanchart.exceptions import ConfigurationError, DomainError
from chanchart.scene import (
    SceneConfig,
    generate_scene,
    true_polar,
    vip_glyph_points,
    write_scene_csv,
)

from conftest import make_scene


def test_default_scene_matches_config():
    scene = generate_scene(SceneConfig(rng_seed=1))
    assert scene.n_ue == 2048
    assert scene.ues.shape == (2048, 3)
    assert np.all(scene.ues[:, 0] >= 0) and np.all(scene.ues[:, 0] <= 1000)
    assert np.all(scene.ues[:, 1] >= 0) and np.all(scene.ues[:, 1] <= 500)
    assert np.all(scene.ues[:, 2] == 0.0)
    assert int(scene.vip_mask.sum()) == 234


def test_bs_at_mid_edge_with_height():
    scene = generate_scene(SceneConfig())
    assert scene.bs.x == 500.0
    assert scene.bs.y == 0.0
    assert scene.bs.z == 8.5


def test_single_uniform_point():
    scene = generate_scene(SceneConfig(n_ue=1, n_vip=0))
    assert scene.ues.shape == (1, 3)
    assert not scene.vip_mask.any()


def test_same_seed_is_bit_identical():
    cfg = SceneConfig(rng_seed=42)
    a, b = generate_scene(cfg), generate_scene(cfg)
    assert np.array_equal(a.ues, b.ues)
    assert np.array_equal(a.vip_mask, b.vip_mask)


def test_different_seeds_differ():
    a = generate_scene(SceneConfig(rng_seed=0))
    b = generate_scene(SceneConfig(rng_seed=1))
    assert not np.array_equal(a.ues, b.ues)


@pytest.mark.parametrize(
    "bad",
    [
        dict(n_vip=10, n_ue=5),
        dict(area_x=0.0),
        dict(area_y=-1.0),
        dict(n_ue=0),
    ],
)
def test_invalid_config_rejected(bad):
    with pytest.raises(ConfigurationError):
        generate_scene(SceneConfig(**bad))


def test_true_polar_broadside():
    scene = make_scene([(500.0, 100.0)])
    theta, _ = true_polar(scene, 0)
    assert theta == 90.0


def test_true_polar_pythagoras():
    scene = make_scene([(500.0, 40.0)], bs_height=30.0)
    _, rho = true_polar(scene, 0)
    assert rho == pytest.approx(50.0, abs=1e-12)


def test_true_polar_on_axis_endpoints():
    scene = make_scene([(900.0, 0.0), (100.0, 0.0)])
    assert true_polar(scene, 0)[0] == 0.0
    assert true_polar(scene, 1)[0] == 180.0


def test_true_polar_under_the_antenna():
    scene = make_scene([(500.0, 0.0)], bs_height=8.5)
    theta, rho = true_polar(scene, 0)
    assert theta == 90.0
    assert rho == 8.5


def test_true_polar_matches_arccos_oracle(small_scene):
    # independent route: angle from the normalized ground-plane dot product
    for ue in range(10):
        dx = small_scene.ues[ue, 0] - small_scene.bs.x
        dy = small_scene.ues[ue, 1] - small_scene.bs.y
        expected = math.degrees(math.acos(dx / math.hypot(dx, dy)))
        theta, _ = true_polar(small_scene, ue)
        assert theta == pytest.approx(expected, abs=1e-8)


def test_true_polar_bounds_and_height(small_scene):
    for ue in range(small_scene.n_ue):
        theta, rho = true_polar(small_scene, ue)
        assert 0.0 <= theta <= 180.0
        assert rho >= small_scene.config.bs_height


def test_true_polar_bad_index(small_scene):
    with pytest.raises(DomainError):
        true_polar(small_scene, small_scene.n_ue)


def test_vip_points_form_the_glyph_region():
    cfg = SceneConfig()
    pts = vip_glyph_points(cfg.n_vip, cfg.area_x, cfg.area_y)
    assert pts.shape == (234, 2)
    assert np.all(pts[:, 0] >= 0) and np.all(pts[:, 0] <= cfg.area_x)
    assert np.all(pts[:, 1] >= 0) and np.all(pts[:, 1] <= cfg.area_y)
    # glyph is centered and spans a readable fraction of the rectangle
    assert abs(pts[:, 0].mean() - cfg.area_x / 2) < cfg.area_x * 0.05
    assert np.ptp(pts[:, 1]) > 0.2 * cfg.area_y


def test_vip_points_have_nearly_equal_spacing():
    # equal arc-length placement: nearest-neighbor gaps cluster tightly
    pts = vip_glyph_points(234, 1000.0, 500.0)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    np.fill_diagonal(d, np.inf)
    nn = d.min(axis=1)
    assert nn.max() < 3.0 * np.median(nn)


def test_vip_points_are_scene_suffix():
    scene = generate_scene(SceneConfig(rng_seed=5))
    assert np.array_equal(np.flatnonzero(scene.vip_mask), np.arange(2048 - 234, 2048))


def test_scene_csv_roundtrip(tmp_path, small_scene):
    path = tmp_path / "scene.csv"
    write_scene_csv(small_scene, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "ue_id,x,y,z,is_vip"
    assert len(lines) == small_scene.n_ue + 1
    first = lines[1].split(",")
    assert int(first[0]) == 0
    assert float(first[1]) == pytest.approx(small_scene.ues[0, 0], abs=5e-7)
    assert first[4] in ("0", "1")
