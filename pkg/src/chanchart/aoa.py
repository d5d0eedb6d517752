"""Angle-of-arrival pseudo-spectra over a degree grid plus peak search.

Four estimators share the antenna-axis covariance: MUSIC and Minimum Norm
work on the noise subspace, Bartlett and MVDR on the covariance itself.
Spectra are unnormalized; only the argmax carries meaning, so reciprocal
spectra are clamped at 1/eps instead of producing infinities at exact nulls.

Bartlett evaluation routes: the quadratic form A^H R A can be computed
directly, through a Cholesky factor as ||L^H A||^2, or by regrouping the
double sum over the covariance diagonals (the grid vectors have Vandermonde
structure, so conj(A_a) A_b depends on b - a only). All three agree to
rounding; the lag regrouping is the cheap default.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import DegenerateWeightError, DomainError
from .subspace import CovarianceMatrix, SubspaceSplit, cholesky, default_loading, _entries

SPECTRUM_EPS = 1e-12


@dataclass(frozen=True)
class AngleGrid:
    """Search grid in degrees, endpoints included."""

    start: float = 0.0
    stop: float = 180.0
    step: float = 1.0

    def __post_init__(self) -> None:
        if not self.start < self.stop:
            raise DomainError(f"grid start must be < stop, got [{self.start}, {self.stop}]")
        if self.step <= 0:
            raise DomainError(f"grid step must be > 0, got {self.step}")

    @property
    def n_points(self) -> int:
        return int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1

    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.n_points)


@dataclass(frozen=True)
class Spectrum:
    """Sampled pseudo-spectrum: abscissae, non-negative values, argmax index."""

    grid: np.ndarray
    values: np.ndarray
    peak_index: int


def make_spectrum(grid_values: np.ndarray, values: np.ndarray) -> Spectrum:
    """Wrap sampled values; ties at the maximum resolve to the smallest index."""
    if values.shape != grid_values.shape or values.size == 0:
        raise DomainError("spectrum values must be a nonempty vector matching the grid")
    return Spectrum(grid=grid_values, values=values, peak_index=int(np.argmax(values)))


def peak_search(s: Spectrum) -> float:
    """Grid abscissa of the spectrum peak (smallest abscissa on ties)."""
    return float(s.grid[s.peak_index])


@lru_cache(maxsize=64)
def _steering_matrix(grid: AngleGrid, n_rx: int) -> np.ndarray:
    """(n_rx, G) matrix of ULA steering vectors over the grid, cached per run."""
    cos = np.cos(np.radians(grid.values()))
    a = np.exp(1j * np.pi * np.outer(np.arange(n_rx), cos))
    a.setflags(write=False)
    return a


@lru_cache(maxsize=16)
def _diag_index_mask(n: int) -> np.ndarray:
    """(n, n*n) selector whose row d sums the d-th upper diagonal of a raveled matrix."""
    mask = np.zeros((n, n * n), dtype=np.complex128)
    for d in range(n):
        rows = np.arange(n - d)
        mask[d, rows * n + rows + d] = 1.0
    mask.setflags(write=False)
    return mask


def _diag_sums(r: np.ndarray) -> np.ndarray:
    return _diag_index_mask(r.shape[0]) @ r.ravel()


def _music_values(noise_basis: np.ndarray, grid_matrix: np.ndarray) -> np.ndarray:
    proj = noise_basis.conj().T @ grid_matrix
    norms = np.linalg.norm(proj, axis=0)
    return 1.0 / np.maximum(norms, SPECTRUM_EPS)


def _bartlett_values(
    r: np.ndarray,
    grid_matrix: np.ndarray,
    chol: np.ndarray | None,
    method: str,
) -> np.ndarray:
    if chol is not None:
        g = chol.conj().T @ grid_matrix
        values = np.sum(np.abs(g) ** 2, axis=0)
    elif method == "lag":
        s = _diag_sums(r)
        values = s[0].real + 2.0 * np.real(s[1:] @ grid_matrix[1:])
    elif method == "direct":
        t = r @ grid_matrix
        values = np.einsum("ag,ag->g", grid_matrix.conj(), t).real
    else:
        raise DomainError(f"unknown bartlett method {method!r}")
    return np.maximum(values, 0.0)


def _mvdr_values(r: np.ndarray, grid_matrix: np.ndarray, loading: float) -> np.ndarray:
    low = cholesky(r, loading)
    g = solve_triangular(low, grid_matrix, lower=True)
    denom = np.sum(np.abs(g) ** 2, axis=0)
    return 1.0 / np.maximum(denom, 1e-300)


def _minnorm_weight(noise_basis: np.ndarray) -> np.ndarray:
    w = noise_basis @ noise_basis[0].conj()
    if np.linalg.norm(w) < 1e-12:
        raise DegenerateWeightError("first coordinate vector lies in the signal subspace")
    return w


def _minnorm_values(noise_basis: np.ndarray, grid_matrix: np.ndarray, method: str) -> np.ndarray:
    if method == "fast":
        w = _minnorm_weight(noise_basis)
        denom = np.abs(w.conj() @ grid_matrix) ** 2
    elif method == "naive":
        _minnorm_weight(noise_basis)  # same degeneracy contract on both routes
        p = noise_basis @ noise_basis.conj().T
        e1 = np.zeros(noise_basis.shape[0], dtype=np.complex128)
        e1[0] = 1.0
        pe = p @ e1
        denom = np.abs(
            np.einsum("g,g->g", (grid_matrix.conj().T @ pe), (pe.conj() @ grid_matrix))
        )
    else:
        raise DomainError(f"unknown minnorm method {method!r}")
    return 1.0 / np.maximum(denom, SPECTRUM_EPS)


def music_theta(split: SubspaceSplit, grid: AngleGrid = AngleGrid()) -> Spectrum:
    """MUSIC spectrum 1 / ||N^H A(theta)||_2 over the angle grid."""
    if split.noise_basis.shape[1] == 0:
        raise DomainError("noise basis is empty")
    a = _steering_matrix(grid, split.n)
    return make_spectrum(grid.values(), _music_values(split.noise_basis, a))


def bartlett_theta(
    r: CovarianceMatrix,
    grid: AngleGrid = AngleGrid(),
    chol: np.ndarray | None = None,
    method: str = "lag",
) -> Spectrum:
    """Conventional beamformer spectrum A^H(theta) R A(theta).

    Passing a Cholesky factor ``chol`` of R evaluates ||L^H A||^2 instead,
    which is the same number assembled from the factored form.
    """
    e = _entries(r)
    a = _steering_matrix(grid, e.shape[0])
    return make_spectrum(grid.values(), _bartlett_values(e, a, chol, method))


def mvdr_theta(
    r: CovarianceMatrix,
    grid: AngleGrid = AngleGrid(),
    loading: float | None = None,
) -> Spectrum:
    """Capon spectrum 1 / (A^H (R + loading I)^{-1} A).

    The inverse is applied through Cholesky solves. ``loading=None`` applies
    the default 1e-9 * trace(R)/N, which makes single-snapshot (rank-1)
    covariances workable.
    """
    e = _entries(r)
    if loading is None:
        loading = default_loading(e)
    a = _steering_matrix(grid, e.shape[0])
    return make_spectrum(grid.values(), _mvdr_values(e, a, loading))


def minnorm_theta(
    split: SubspaceSplit,
    grid: AngleGrid = AngleGrid(),
    method: str = "fast",
) -> Spectrum:
    """Minimum-Norm spectrum 1 / |w^H A(theta)|^2 with w = U_n U_n^H e_1.

    ``method="naive"`` evaluates the textbook four-matrix product instead of
    the precomputed weight; both give the same spectrum.
    """
    if split.noise_basis.shape[1] == 0:
        raise DomainError("noise basis is empty")
    a = _steering_matrix(grid, split.n)
    return make_spectrum(grid.values(), _minnorm_values(split.noise_basis, a, method))
