"""Shared covariance and eigenspace numerics under every spectral estimator.

Covariance estimation from snapshot vectors, deterministic Hermitian
eigendecomposition, signal/noise subspace splitting, and Cholesky
factorization with optional diagonal loading.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .exceptions import DegenerateSplitError, DomainError, NotPositiveDefiniteError


class CovarianceAxis(enum.Enum):
    ANTENNAS = "antennas"
    SUBCARRIERS = "subcarriers"


@dataclass(frozen=True)
class CovarianceMatrix:
    """Hermitian PSD sample covariance with provenance metadata."""

    entries: np.ndarray
    axis: CovarianceAxis = CovarianceAxis.ANTENNAS
    snapshot_count: int = 1

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; eigenvectors as matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class FixedK:
    """Keep the top ``k`` eigenvectors as the signal subspace."""

    k: int = 1


@dataclass(frozen=True)
class RatioThreshold:
    """Signal subspace = eigenvalues above ``tau`` times the largest."""

    tau: float = 0.01


SplitPolicy = Union[FixedK, RatioThreshold]


@dataclass(frozen=True)
class SubspaceSplit:
    """Signal dimension and the concatenated noise eigenvectors."""

    signal_dim: int
    noise_basis: np.ndarray

    @property
    def n(self) -> int:
        return self.noise_basis.shape[0]


def _entries(r: Union[CovarianceMatrix, np.ndarray]) -> np.ndarray:
    return r.entries if isinstance(r, CovarianceMatrix) else np.asarray(r)


def covariance(
    snapshots: Union[Sequence[np.ndarray], np.ndarray],
    axis: CovarianceAxis = CovarianceAxis.ANTENNAS,
) -> CovarianceMatrix:
    """Sample covariance R = (1/M) * sum_m h_m h_m^H over M snapshot vectors.

    For angle estimation the snapshots are the subcarrier rows of a CSI
    matrix (vectors over antennas); for distance estimation they are the
    antenna columns (vectors over subcarriers).
    """
    if isinstance(snapshots, np.ndarray):
        if snapshots.ndim != 2:
            raise DomainError(f"snapshot array must be 2-D (M, N), got shape {snapshots.shape}")
        s = snapshots
    else:
        snapshots = list(snapshots)
        if len(snapshots) == 0:
            raise DomainError("need at least one snapshot")
        lengths = {np.asarray(v).shape for v in snapshots}
        if len(lengths) != 1 or len(next(iter(lengths))) != 1:
            raise DomainError(f"snapshots must be equal-length vectors, got shapes {lengths}")
        s = np.asarray(snapshots)
    if s.shape[0] == 0:
        raise DomainError("need at least one snapshot")
    m = s.shape[0]
    r = np.einsum("ma,mb->ab", s, s.conj()) / m
    r = 0.5 * (r + r.conj().T)
    return CovarianceMatrix(entries=r, axis=axis, snapshot_count=m)


def hermitian_eig(r: Union[CovarianceMatrix, np.ndarray], rel_tol: float = 1e-12) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, deterministically oriented.

    Eigenvalues come back descending. Each eigenvector is rotated so its
    largest-magnitude component is real and positive, which pins the free
    phase and makes repeated runs byte-comparable.
    """
    a = _entries(r)
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > rel_tol * max(norm, 1e-300):
        raise DomainError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(a)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    anchor = np.argmax(np.abs(v), axis=0)
    pivots = v[anchor, np.arange(v.shape[1])]
    v *= (np.abs(pivots) / pivots)[None, :]
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def split_subspaces(eig: EigenDecomposition, policy: SplitPolicy = FixedK(1)) -> SubspaceSplit:
    """Partition eigenvectors into signal and noise per the chosen policy."""
    n = eig.eigenvalues.shape[0]
    if isinstance(policy, FixedK):
        if not 1 <= policy.k < n:
            raise DomainError(f"FixedK requires 1 <= k < {n}, got {policy.k}")
        k = policy.k
    else:
        lam_max = eig.eigenvalues[0]
        k = int(np.count_nonzero(eig.eigenvalues > policy.tau * lam_max))
        if k >= n:
            raise DegenerateSplitError(
                f"RatioThreshold({policy.tau}) left no noise subspace for n={n}"
            )
    return SubspaceSplit(signal_dim=k, noise_basis=eig.eigenvectors[:, k:])


def cholesky(r: Union[CovarianceMatrix, np.ndarray], loading: float = 0.0) -> np.ndarray:
    """Lower-triangular L with L L^H = R + loading * I."""
    a = _entries(r)
    if loading < 0:
        raise DomainError(f"loading must be >= 0, got {loading}")
    if loading:
        a = a + loading * np.eye(a.shape[0])
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"matrix not positive definite at loading {loading}: {exc}"
        ) from exc


def default_loading(r: Union[CovarianceMatrix, np.ndarray], factor: float = 1e-9) -> float:
    """Standard diagonal loading: ``factor`` times the mean eigenvalue trace(R)/N."""
    a = _entries(r)
    return factor * float(np.real(np.trace(a))) / a.shape[0]
