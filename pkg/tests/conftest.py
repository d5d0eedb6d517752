"""Shared fixtures and hypothesis settings for the test suite."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from chanchart.scene import Position3, Scene, SceneConfig, generate_scene

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def small_scene() -> Scene:
    """64 uniform UEs in the default rectangle, no VIP glyph."""
    return generate_scene(SceneConfig(n_ue=64, n_vip=0, rng_seed=11))


def make_scene(positions, bs_height: float = 8.5) -> Scene:
    """Scene with handpicked ground positions, for geometry edge cases."""
    pts = np.asarray(positions, dtype=np.float64)
    ues = np.hstack([pts, np.zeros((pts.shape[0], 1))])
    cfg = SceneConfig(n_ue=pts.shape[0], n_vip=0, bs_height=bs_height)
    ues.setflags(write=False)
    vip = np.zeros(pts.shape[0], dtype=bool)
    vip.setflags(write=False)
    return Scene(
        bs=Position3(cfg.area_x / 2.0, 0.0, bs_height),
        ues=ues,
        vip_mask=vip,
        config=cfg,
    )
