"""Distance estimators: ISQ, supervised linear regression, and subcarrier spectra.

ISQ and LR work on absolute CSI magnitudes (path loss shrinks with distance),
so they consume the unnormalized amplitudes. MUSIC and Bartlett over the
subcarrier axis exploit the inter-tone phase ramp exp(-j*2*pi*rho*delta_f/c)
and need at least two subcarriers. Spectra over rho are periodic with period
c/delta_f; configurations whose grid reaches that period are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .aoa import Spectrum, _bartlett_values, _music_values, make_spectrum
from .channel import SPEED_OF_LIGHT
from .exceptions import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    FitError,
    InsufficientApertureError,
)
from .subspace import CovarianceMatrix, SubspaceSplit, _entries


@dataclass(frozen=True)
class RangeGrid:
    """Search grid in meters, endpoints included."""

    start: float = 0.0
    stop: float = 1000.0
    step: float = 1.0

    def __post_init__(self) -> None:
        if not self.start < self.stop:
            raise DomainError(f"grid start must be < stop, got [{self.start}, {self.stop}]")
        if self.step <= 0:
            raise DomainError(f"grid step must be > 0, got {self.step}")
        if self.start < 0:
            raise DomainError(f"range grid must be non-negative, start {self.start}")

    @property
    def n_points(self) -> int:
        return int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1

    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.n_points)


@dataclass(frozen=True)
class LrModel:
    """Fitted line rho = a * X + b over X = log(sum of CSI magnitudes)."""

    a: float
    b: float


def check_range_alias(grid: RangeGrid, delta_f: float) -> None:
    """Reject grids that reach the rho ambiguity period c/delta_f."""
    period = SPEED_OF_LIGHT / delta_f
    if grid.stop >= period:
        raise ConfigurationError(
            f"range grid stop {grid.stop} m reaches the ambiguity period "
            f"{period:.1f} m at delta_f = {delta_f} Hz"
        )


@lru_cache(maxsize=64)
def _subcarrier_matrix(grid: RangeGrid, n_sub: int, delta_f: float) -> np.ndarray:
    """(n_sub, G) matrix of subcarrier phase vectors over the grid."""
    omega = -2.0 * np.pi * delta_f / SPEED_OF_LIGHT * grid.values()
    b = np.exp(1j * np.outer(np.arange(n_sub), omega))
    b.setflags(write=False)
    return b


def _magnitude_sum(h: np.ndarray) -> float:
    total = float(np.sum(np.abs(h)))
    if total == 0.0:
        raise DegenerateInputError("all-zero CSI input")
    return total


def isq_rho(h: np.ndarray) -> float:
    """Inverse square root of summed CSI magnitudes: 1 / sqrt(sum |h_n|).

    The result is proportional to distance, not metric; rank-based chart
    metrics are indifferent to the missing scale.
    """
    return 1.0 / np.sqrt(_magnitude_sum(h))


def lr_fit(training: list[tuple[np.ndarray, float]]) -> LrModel:
    """Ordinary least squares of known distances on X = log(sum |h_n|).

    On physically consistent data amplitude decays with distance, so the
    fitted slope comes out negative.
    """
    if len(training) < 2:
        raise FitError(f"need at least 2 training pairs, got {len(training)}")
    x = np.array([np.log(_magnitude_sum(h)) for h, _ in training])
    rho = np.array([r for _, r in training], dtype=np.float64)
    if np.ptp(x) == 0.0:
        raise FitError("training abscissae are all equal; cannot fit a line")
    a, b = np.polyfit(x, rho, 1)
    return LrModel(a=float(a), b=float(b))


def lr_rho(model: LrModel, h: np.ndarray) -> float:
    """Predict distance a * log(sum |h_n|) + b, clamped below at 0."""
    x = np.log(_magnitude_sum(h))
    return max(model.a * x + model.b, 0.0)


def music_rho(
    split: SubspaceSplit,
    grid: RangeGrid = RangeGrid(),
    delta_f: float = 312.5e3 / 32,
) -> Spectrum:
    """MUSIC spectrum 1 / ||N^H B(rho)||_2 over the range grid.

    The subspace split must come from the subcarrier-axis covariance (the
    antenna columns of one CSI matrix as snapshots).
    """
    if split.n < 2:
        raise InsufficientApertureError("rho estimation needs n_sub >= 2")
    if split.noise_basis.shape[1] == 0:
        raise DomainError("noise basis is empty")
    check_range_alias(grid, delta_f)
    b = _subcarrier_matrix(grid, split.n, delta_f)
    return make_spectrum(grid.values(), _music_values(split.noise_basis, b))


def bartlett_rho(
    r: CovarianceMatrix,
    grid: RangeGrid = RangeGrid(),
    delta_f: float = 312.5e3 / 32,
    chol: np.ndarray | None = None,
    method: str = "lag",
) -> Spectrum:
    """Beamformer spectrum B^H(rho) R B(rho) over the range grid.

    Accepts the same evaluation routes as the angle variant: direct, lag
    regrouping (default), or ||L^H B||^2 when a Cholesky factor is passed.
    """
    e = _entries(r)
    if e.shape[0] < 2:
        raise InsufficientApertureError("rho estimation needs n_sub >= 2")
    check_range_alias(grid, delta_f)
    b = _subcarrier_matrix(grid, e.shape[0], delta_f)
    return make_spectrum(grid.values(), _bartlett_values(e, b, chol, method))
