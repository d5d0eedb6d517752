"""Deployment geometry: BS placement, random UE drop, and the VIP glyph subset.

The scene is a flat rectangle of UEs at z = 0 observed by a single elevated
base station. A configurable subset of UEs is placed on stroke-sampled
renderings of the letters "V", "I", "P" so charts can be judged visually:
if the chart preserves geometry, the word stays legible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, DomainError


@dataclass(frozen=True)
class Position3:
    """A point in scene coordinates, meters."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


@dataclass(frozen=True)
class SceneConfig:
    """Geometry parameters of the simulated deployment.

    The BS sits at the midpoint of the y = 0 edge with its array axis along
    +x, ``bs_height`` meters above the UE plane. ``n_vip`` of the ``n_ue``
    UEs are placed on the VIP glyph; the rest are uniform over the rectangle.
    """

    area_x: float = 1000.0
    area_y: float = 500.0
    n_ue: int = 2048
    n_vip: int = 234
    bs_height: float = 8.5
    rng_seed: int = 0

    def validate(self) -> None:
        if self.area_x <= 0 or self.area_y <= 0:
            raise ConfigurationError(f"area must be positive, got {self.area_x} x {self.area_y}")
        if self.n_ue < 1:
            raise ConfigurationError(f"n_ue must be >= 1, got {self.n_ue}")
        if self.n_vip < 0 or self.n_vip > self.n_ue:
            raise ConfigurationError(f"n_vip must be in [0, n_ue], got {self.n_vip}")
        if self.bs_height < 0:
            raise ConfigurationError(f"bs_height must be >= 0, got {self.bs_height}")


@dataclass(frozen=True)
class Scene:
    """Immutable deployment: BS position, UE positions, and the VIP index set.

    ``ues`` is an (n_ue, 3) float array in scene order; that order is the
    canonical UE id. ``vip_mask`` flags the glyph UEs.
    """

    bs: Position3
    ues: np.ndarray
    vip_mask: np.ndarray
    config: SceneConfig = field(repr=False, default=SceneConfig())

    @property
    def n_ue(self) -> int:
        return self.ues.shape[0]

    @property
    def vip_indices(self) -> np.ndarray:
        return np.flatnonzero(self.vip_mask)


# Letter strokes in a local unit box [0,1] x [0,1], y up. Each letter is a
# list of polylines; the glyph sampler walks them at equal arc-length steps.
_LETTERS: dict[str, list[list[tuple[float, float]]]] = {
    "V": [[(0.0, 1.0), (0.5, 0.0), (1.0, 1.0)]],
    "I": [
        [(0.15, 1.0), (0.85, 1.0)],
        [(0.5, 1.0), (0.5, 0.0)],
        [(0.15, 0.0), (0.85, 0.0)],
    ],
    "P": [
        [(0.0, 0.0), (0.0, 1.0)],
        [
            (0.0, 1.0),
            (0.55, 1.0),
            (0.78, 0.93),
            (0.88, 0.75),
            (0.78, 0.57),
            (0.55, 0.5),
            (0.0, 0.5),
        ],
    ],
}


def _glyph_segments(area_x: float, area_y: float) -> np.ndarray:
    """Assemble the scaled "VIP" strokes as an (n_seg, 2, 2) array of segments."""
    height = 0.36 * area_y
    # Keep the word inside narrow scenes as well.
    width_units = 3 * 0.55 + 2 * 0.35
    height = min(height, 0.9 * area_x / width_units)
    letter_w = 0.55 * height
    gap = 0.35 * height
    total_w = 3 * letter_w + 2 * gap
    x0 = (area_x - total_w) / 2.0
    y0 = (area_y - height) / 2.0

    segments = []
    for li, letter in enumerate("VIP"):
        ox = x0 + li * (letter_w + gap)
        for stroke in _LETTERS[letter]:
            pts = [(ox + u * letter_w, y0 + v * height) for u, v in stroke]
            for p, q in zip(pts[:-1], pts[1:]):
                segments.append((p, q))
    return np.array(segments, dtype=np.float64)


def vip_glyph_points(n_vip: int, area_x: float, area_y: float) -> np.ndarray:
    """Sample ``n_vip`` points at equal arc-length spacing along the "VIP" strokes.

    Pure geometry, no randomness: the k-th point sits at arc length
    (k + 1/2) * L / n_vip along the concatenated strokes of total length L.

    :return: (n_vip, 2) array of xy positions inside the scene rectangle.
    """
    if n_vip == 0:
        return np.zeros((0, 2), dtype=np.float64)
    segs = _glyph_segments(area_x, area_y)
    lengths = np.linalg.norm(segs[:, 1] - segs[:, 0], axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    s = (np.arange(n_vip) + 0.5) * total / n_vip
    seg_idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(segs) - 1)
    local = (s - cum[seg_idx]) / lengths[seg_idx]
    return segs[seg_idx, 0] + local[:, None] * (segs[seg_idx, 1] - segs[seg_idx, 0])


def generate_scene(cfg: SceneConfig) -> Scene:
    """Draw the deployment for ``cfg``: a pure function of the config.

    The uniform UEs come first in scene order and the VIP glyph UEs last, so
    any "first k UEs" training subset stays spatially uniform.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.rng_seed)
    n_uniform = cfg.n_ue - cfg.n_vip
    xy_uniform = rng.uniform(
        low=[0.0, 0.0], high=[cfg.area_x, cfg.area_y], size=(n_uniform, 2)
    )
    xy_vip = vip_glyph_points(cfg.n_vip, cfg.area_x, cfg.area_y)
    xy = np.vstack([xy_uniform, xy_vip])
    ues = np.hstack([xy, np.zeros((cfg.n_ue, 1))])
    vip_mask = np.zeros(cfg.n_ue, dtype=bool)
    if cfg.n_vip:
        vip_mask[-cfg.n_vip :] = True
    bs = Position3(cfg.area_x / 2.0, 0.0, cfg.bs_height)
    ues.setflags(write=False)
    vip_mask.setflags(write=False)
    return Scene(bs=bs, ues=ues, vip_mask=vip_mask, config=cfg)


def true_polar(scene: Scene, ue_index: int) -> tuple[float, float]:
    """Ground-truth (theta, rho) of one UE as seen from the BS array.

    rho is the 3-D BS-UE distance in meters. theta is the angle in degrees
    between the array axis (+x through the BS) and the ground projection of
    the BS->UE direction, folded into [0, 180]; a UE directly under the BS
    reports broadside (90 degrees).
    """
    if not 0 <= ue_index < scene.n_ue:
        raise DomainError(f"ue_index {ue_index} out of range [0, {scene.n_ue})")
    dx = scene.ues[ue_index, 0] - scene.bs.x
    dy = scene.ues[ue_index, 1] - scene.bs.y
    dz = scene.ues[ue_index, 2] - scene.bs.z
    rho = math.sqrt(dx * dx + dy * dy + dz * dz)
    if dx == 0.0 and dy == 0.0:
        theta = 90.0
    else:
        # atan2 stays well-conditioned near the array axis, where acos of the
        # normalized dot product would lose the small cross-axis component.
        theta = math.degrees(math.atan2(abs(dy), dx))
    return theta, rho


def write_scene_csv(scene: Scene, path) -> None:
    """Export the scene as CSV: ``ue_id,x,y,z,is_vip`` with 6 fractional digits."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("ue_id,x,y,z,is_vip\n")
        for i in range(scene.n_ue):
            x, y, z = scene.ues[i]
            f.write(f"{i},{x:.6f},{y:.6f},{z:.6f},{int(scene.vip_mask[i])}\n")
