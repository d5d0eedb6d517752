"""Single-ray CSI simulation across a ULA and equally spaced subcarriers.

A UE at (theta, rho) produces the rank-1 noiseless matrix

    H0 = g * rho^(-r) * exp(-j(2*pi*rho/lambda + phi)) * outer(B(rho), A(theta))

with A the lambda/2 ULA steering vector over antennas, B the subcarrier phase
vector over tones, phi a per-UE random carrier phase, and g a per-UE scalar
fading gain (1 for LOS, Rician for the QLOS proxy, Rayleigh for the QNLOS
proxy; both proxies use the unit mean-square convention E[g^2] = 1).

SNR handling: the matrix handed to the spectral estimators is normalized to
unit nominal per-entry power before i.i.d. circular complex Gaussian noise of
power 10^(-snr_db/10) is added. The normalization factor is kept on the
:class:`CsiMatrix` so magnitude-based estimators can undo it and see absolute
path-loss amplitudes.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, DegenerateInputError, DomainError
from .scene import Scene, true_polar

SPEED_OF_LIGHT = 299792458.0


class ChannelModel(enum.Enum):
    LOS = "los"
    QLOS = "qlos"
    QNLOS = "qnlos"


@dataclass(frozen=True)
class ChannelParams:
    """Radio and model parameters shared by every UE of a run.

    ``snr_db = inf`` disables noise. ``rng_seed`` is the run-level seed; each
    UE derives its own substream from ``rng_seed ^ ue_id`` so serial and
    parallel generation agree.
    """

    carrier_freq: float = 2.0e9
    n_rx: int = 32
    n_sub: int = 1
    bandwidth: float = 312.5e3
    path_loss_exp: float = 2.0
    model: ChannelModel = ChannelModel.LOS
    snr_db: float = 0.0
    rician_k: float = 10.0
    rng_seed: int = 0

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def delta_f(self) -> float:
        """Subcarrier spacing: the configured bandwidth split over n_sub tones."""
        return self.bandwidth / self.n_sub

    def validate(self) -> None:
        if self.n_rx < 1 or self.n_sub < 1:
            raise ConfigurationError(f"need n_rx >= 1 and n_sub >= 1, got {self.n_rx}, {self.n_sub}")
        if self.carrier_freq <= 0 or self.bandwidth <= 0:
            raise ConfigurationError("carrier_freq and bandwidth must be positive")
        if self.path_loss_exp < 0:
            raise ConfigurationError(f"path_loss_exp must be >= 0, got {self.path_loss_exp}")
        if self.rician_k <= 0:
            raise ConfigurationError(f"rician_k must be > 0, got {self.rician_k}")


@dataclass(frozen=True)
class CsiMatrix:
    """Per-UE channel state: complex (n_sub, n_rx) entries plus normalization.

    ``entries`` carry unit nominal signal power (what the subspace estimators
    consume); ``scale`` is the pre-noise normalization factor, so
    ``unnormalized()`` restores absolute amplitudes for ISQ/LR.
    """

    entries: np.ndarray
    ue_id: int
    scale: float = 1.0

    @property
    def n_sub(self) -> int:
        return self.entries.shape[0]

    @property
    def n_rx(self) -> int:
        return self.entries.shape[1]

    def unnormalized(self) -> np.ndarray:
        return self.scale * self.entries


def steering_vector(theta_deg: float, n_rx: int) -> np.ndarray:
    """ULA steering vector at lambda/2 spacing: element k is exp(j*pi*k*cos(theta)).

    :param theta_deg: arrival angle in degrees, 0..180 (0 = array axis).
    :param n_rx: number of antennas.
    """
    if not 0.0 <= theta_deg <= 180.0:
        raise DomainError(f"theta must be in [0, 180] degrees, got {theta_deg}")
    if n_rx < 1:
        raise DomainError(f"n_rx must be >= 1, got {n_rx}")
    phase = np.pi * np.cos(np.radians(theta_deg)) * np.arange(n_rx)
    return np.exp(1j * phase)


def subcarrier_vector(rho_m: float, n_sub: int, delta_f: float) -> np.ndarray:
    """Inter-subcarrier phase vector: element k is exp(-j*2*pi*rho*k*delta_f/c)."""
    if rho_m < 0:
        raise DomainError(f"rho must be >= 0 meters, got {rho_m}")
    if n_sub < 1:
        raise DomainError(f"n_sub must be >= 1, got {n_sub}")
    phase = -2.0 * np.pi * rho_m * delta_f / SPEED_OF_LIGHT * np.arange(n_sub)
    return np.exp(1j * phase)


def ray_matrix(
    theta_deg: float,
    rho_m: float,
    params: ChannelParams,
    phi: float = 0.0,
    gain: float = 1.0,
) -> np.ndarray:
    """Noiseless single-ray CSI matrix for a UE at (theta, rho).

    Rank-1 by construction: the outer product of the subcarrier vector and
    the steering vector, scaled by the path-loss amplitude gain * rho^(-r)
    and the common carrier phase exp(-j(2*pi*rho/lambda + phi)).
    """
    if rho_m <= 0:
        raise DomainError(f"rho must be > 0 meters for path loss, got {rho_m}")
    a = steering_vector(theta_deg, params.n_rx)
    b = subcarrier_vector(rho_m, params.n_sub, params.delta_f)
    amplitude = gain * rho_m ** (-params.path_loss_exp)
    common = amplitude * np.exp(-1j * (2.0 * np.pi * rho_m / params.wavelength + phi))
    return common * np.outer(b, a)


def fading_gain(model: ChannelModel, rician_k: float, rng: np.random.Generator) -> float:
    """Per-UE scalar amplitude gain with E[g^2] = 1.

    Two standard normals are consumed for every model, LOS included, so the
    downstream noise stream stays aligned across models at a fixed seed.
    """
    z = rng.standard_normal(2)
    if model is ChannelModel.LOS:
        return 1.0
    if model is ChannelModel.QLOS:
        nu = np.sqrt(rician_k / (rician_k + 1.0))
        sigma = np.sqrt(0.5 / (rician_k + 1.0))
        return float(np.hypot(nu + sigma * z[0], sigma * z[1]))
    return float(np.sqrt(0.5 * (z[0] ** 2 + z[1] ** 2)))


def add_awgn(
    h0: CsiMatrix,
    snr_db: float,
    rng: np.random.Generator,
    scale: float | None = None,
) -> CsiMatrix:
    """Normalize the noiseless matrix to unit per-entry power and add noise.

    ``scale`` is the amplitude the entries are divided by before noise of
    per-entry power 10^(-snr_db/10) is added; it defaults to the realized RMS
    amplitude of ``h0`` and is retained on the result. ``snr_db = inf``
    returns the normalized matrix unchanged.
    """
    entries = h0.entries
    if scale is None:
        scale = float(np.sqrt(np.mean(np.abs(entries) ** 2)))
        if scale == 0.0:
            raise DegenerateInputError("cannot normalize an all-zero CSI matrix")
    normalized = entries / scale
    if np.isinf(snr_db):
        noisy = normalized
    else:
        noise_power = 10.0 ** (-snr_db / 10.0)
        sigma = np.sqrt(noise_power / 2.0)
        noise = sigma * (rng.standard_normal(entries.shape) + 1j * rng.standard_normal(entries.shape))
        noisy = normalized + noise
    return CsiMatrix(entries=noisy, ue_id=h0.ue_id, scale=h0.scale * scale)


def generate_csi(scene: Scene, ue: int, params: ChannelParams) -> CsiMatrix:
    """Simulate the CSI matrix one UE presents to the BS.

    Draw order within the UE substream is fixed (phase, fading, noise), so a
    (rng_seed, ue_id) pair fully determines the realization. The pre-noise
    normalization uses the ensemble amplitude rho^(-r) (exact for LOS since
    g = 1; in expectation for the fading proxies), so at snr_db = 0 the LOS
    signal and noise powers are equal entry by entry.
    """
    params.validate()
    theta, rho = true_polar(scene, ue)
    rng = np.random.default_rng(params.rng_seed ^ ue)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    g = fading_gain(params.model, params.rician_k, rng)
    h0 = ray_matrix(theta, rho, params, phi=phi, gain=g)
    nominal_scale = rho ** (-params.path_loss_exp)
    return add_awgn(CsiMatrix(h0, ue), params.snr_db, rng, scale=nominal_scale)


_CSI_MAGIC = b"CSIK"
_CSI_HEADER = struct.Struct("<4sIII")


def write_csi(path, matrix: CsiMatrix) -> None:
    """Dump entries as little-endian f64 interleaved (re, im) after a 16-byte header."""
    inter = np.empty(matrix.entries.shape + (2,), dtype="<f8")
    inter[..., 0] = matrix.entries.real
    inter[..., 1] = matrix.entries.imag
    with open(path, "wb") as f:
        f.write(_CSI_HEADER.pack(_CSI_MAGIC, matrix.n_sub, matrix.n_rx, 0))
        f.write(inter.tobytes())


def read_csi(path, ue_id: int = 0) -> CsiMatrix:
    """Read a matrix written by :func:`write_csi`."""
    with open(path, "rb") as f:
        magic, n_sub, n_rx, _ = _CSI_HEADER.unpack(f.read(_CSI_HEADER.size))
        if magic != _CSI_MAGIC:
            raise DomainError(f"bad CSI dump magic {magic!r}")
        raw = np.frombuffer(f.read(), dtype="<f8").reshape(n_sub, n_rx, 2)
    return CsiMatrix(entries=raw[..., 0] + 1j * raw[..., 1], ue_id=ue_id)
