"""Distance estimators: ISQ magnitude, linear regression, subcarrier spectra."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chanchart.aoa import peak_search
from chanchart.channel import (
    ChannelParams,
    CsiMatrix,
    add_awgn,
    ray_matrix,
    subcarrier_vector,
)
from chanchart.exceptions import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    FitError,
    InsufficientApertureError,
)
from chanchart.pipeline import lr_training_pairs
from chanchart.ranging import (
    LrModel,
    RangeGrid,
    bartlett_rho,
    check_range_alias,
    isq_rho,
    lr_fit,
    lr_rho,
    music_rho,
)
from chanchart.scene import SceneConfig, generate_scene, true_polar
from chanchart.subspace import (
    CovarianceAxis,
    FixedK,
    SubspaceSplit,
    cholesky,
    covariance,
    hermitian_eig,
    split_subspaces,
)

DELTA_F = 312.5e3 / 32
GRID = RangeGrid()


def rho_covariance(entries: np.ndarray):
    return covariance(entries.T, axis=CovarianceAxis.SUBCARRIERS)


def noiseless_rho_split(rho: float, n_sub: int = 32):
    r = rho_covariance(ray_matrix(60.0, rho, ChannelParams(n_sub=n_sub)))
    return r, split_subspaces(hermitian_eig(r), FixedK(1))


def test_range_grid_defaults():
    assert GRID.n_points == 1001
    v = GRID.values()
    assert v[0] == 0.0 and v[-1] == 1000.0


@pytest.mark.parametrize(
    "kw", [dict(start=-5.0), dict(start=7.0, stop=7.0), dict(step=0.0)]
)
def test_range_grid_rejects_bad_bounds(kw):
    with pytest.raises(DomainError):
        RangeGrid(**kw)


def test_alias_guard_rejects_wide_spacing():
    # at the full 312.5 kHz per tone the ambiguity period is ~959 m
    with pytest.raises(ConfigurationError):
        check_range_alias(GRID, 312.5e3)
    check_range_alias(GRID, DELTA_F)


def test_isq_known_values():
    assert isq_rho(np.array([1.0, 1.0, 1.0, 1.0])) == 0.5
    assert isq_rho(np.array([4.0 + 0.0j])) == 0.5


def test_isq_rejects_zero_input():
    with pytest.raises(DegenerateInputError):
        isq_rho(np.zeros((4, 4), dtype=complex))


def test_isq_proportional_to_distance_noiseless():
    params = ChannelParams()
    rhos = np.array([50.0, 100.0, 250.0, 500.0, 1000.0])
    est = np.array([isq_rho(ray_matrix(60.0, r, params)) for r in rhos])
    assert np.all(np.diff(est) > 0)
    ratio = est * math.sqrt(params.n_rx * params.n_sub)
    assert np.allclose(ratio, rhos, rtol=1e-9)


@given(st.floats(min_value=1e-6, max_value=1e6), st.integers(min_value=0, max_value=50))
def test_isq_scale_equivariance(c, seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    assert isq_rho(c * h) == pytest.approx(isq_rho(h) / math.sqrt(c), rel=1e-12)


def test_lr_fit_two_point_line():
    model = lr_fit([(np.array([1.0]), 10.0), (np.array([math.e]), 8.0)])
    assert model.a == pytest.approx(-2.0, abs=1e-9)
    assert model.b == pytest.approx(10.0, abs=1e-9)


def test_lr_fit_recovers_exact_line():
    a, b = -3.5, 120.0
    xs = np.linspace(1.0, 4.0, 9)
    training = [(np.array([math.exp(x)]), a * x + b) for x in xs]
    model = lr_fit(training)
    assert model.a == pytest.approx(a, rel=1e-9)
    assert model.b == pytest.approx(b, rel=1e-9)


def test_lr_fit_rejects_degenerate_training():
    with pytest.raises(FitError):
        lr_fit([(np.array([1.0]), 10.0)])
    with pytest.raises(FitError):
        lr_fit([(np.array([2.0]), 10.0), (np.array([2.0]), 20.0)])


def test_lr_predict_values():
    model = LrModel(a=-2.0, b=10.0)
    assert lr_rho(model, np.array([1.0])) == 10.0
    assert lr_rho(model, np.array([math.exp(10.0)])) == 0.0  # clamped at zero
    with pytest.raises(DegenerateInputError):
        lr_rho(model, np.zeros(3))


def test_lr_predict_matches_direct_formula():
    rng = np.random.default_rng(21)
    for _ in range(10):
        model = LrModel(a=float(rng.normal()), b=float(rng.normal() * 50))
        h = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        want = max(model.a * math.log(np.sum(np.abs(h))) + model.b, 0.0)
        assert lr_rho(model, h) == pytest.approx(want, rel=1e-12)


def test_lr_beats_constant_predictor_on_holdout():
    scene = generate_scene(SceneConfig())
    params = ChannelParams(n_sub=8)
    training = lr_training_pairs(scene, params, 256)
    model = lr_fit(training)
    const = float(np.mean([r for _, r in training]))
    err_lr, err_const = [], []
    for ue in range(256, 512):
        from chanchart.channel import generate_csi

        truth = true_polar(scene, ue)[1]
        h = generate_csi(scene, ue, params).unnormalized()
        err_lr.append(lr_rho(model, h) - truth)
        err_const.append(const - truth)
    rms_lr = float(np.sqrt(np.mean(np.square(err_lr))))
    rms_const = float(np.sqrt(np.mean(np.square(err_const))))
    assert model.a < 0
    assert rms_lr < 0.5 * rms_const
    assert rms_lr < 60.0


def test_music_rho_peaks_at_truth():
    _, split = noiseless_rho_split(400.0)
    assert peak_search(music_rho(split, GRID, DELTA_F)) == 400.0


def test_music_rho_zero_distance_peak():
    r = covariance([subcarrier_vector(0.0, 16, DELTA_F)], axis=CovarianceAxis.SUBCARRIERS)
    split = split_subspaces(hermitian_eig(r), FixedK(1))
    assert peak_search(music_rho(split, GRID, DELTA_F)) == 0.0


def test_music_rho_needs_aperture():
    split = SubspaceSplit(signal_dim=1, noise_basis=np.zeros((1, 0), dtype=complex))
    with pytest.raises(InsufficientApertureError):
        music_rho(split, GRID, DELTA_F)


def test_music_rho_rejects_empty_noise_basis():
    split = SubspaceSplit(signal_dim=4, noise_basis=np.zeros((4, 0), dtype=complex))
    with pytest.raises(DomainError):
        music_rho(split, GRID, DELTA_F)


def test_music_rho_monte_carlo_error_bound():
    # 0 dB, 32 tones over 312.5 kHz: a coarse aperture, so the workable
    # guarantee is a 40 m error bound in at least 95 of 100 trials
    params = ChannelParams(n_sub=32)
    hits = 0
    for trial in range(100):
        rng = np.random.default_rng(2000 + trial)
        h0 = ray_matrix(60.0, 400.0, params, phi=rng.uniform(0, 2 * np.pi))
        noisy = add_awgn(CsiMatrix(h0, 0), 0.0, rng, scale=400.0**-2.0)
        split = split_subspaces(hermitian_eig(rho_covariance(noisy.entries)))
        hits += abs(peak_search(music_rho(split, GRID, DELTA_F)) - 400.0) <= 40.0
    assert hits >= 95


def test_bartlett_rho_flat_on_identity():
    from chanchart.subspace import CovarianceMatrix

    r = CovarianceMatrix(entries=np.eye(16, dtype=complex), axis=CovarianceAxis.SUBCARRIERS)
    s = bartlett_rho(r, GRID, DELTA_F)
    assert np.allclose(s.values, 16.0, atol=1e-9)


def test_bartlett_rho_rank_one_peak():
    r, _ = noiseless_rho_split(400.0)
    s = bartlett_rho(r, GRID, DELTA_F)
    assert peak_search(s) == 400.0


def test_bartlett_rho_routes_agree():
    rng = np.random.default_rng(4)
    snaps = rng.standard_normal((40, 16)) + 1j * rng.standard_normal((40, 16))
    r = covariance(snaps, axis=CovarianceAxis.SUBCARRIERS)
    lag = bartlett_rho(r, GRID, DELTA_F).values
    direct = bartlett_rho(r, GRID, DELTA_F, method="direct").values
    chol = bartlett_rho(r, GRID, DELTA_F, chol=cholesky(r)).values
    assert np.max(np.abs(lag - direct)) < 1e-10 * lag.max()
    assert np.max(np.abs(lag - chol)) < 1e-10 * lag.max()


def test_bartlett_rho_needs_aperture():
    from chanchart.subspace import CovarianceMatrix

    r = CovarianceMatrix(entries=np.eye(1, dtype=complex), axis=CovarianceAxis.SUBCARRIERS)
    with pytest.raises(InsufficientApertureError):
        bartlett_rho(r, GRID, DELTA_F)


def test_music_and_bartlett_agree_noiseless():
    for rho in (123.0, 400.0, 777.0):
        r, split = noiseless_rho_split(rho)
        assert peak_search(music_rho(split, GRID, DELTA_F)) == peak_search(
            bartlett_rho(r, GRID, DELTA_F)
        )


def test_spectra_reject_aliasing_grid():
    _, split = noiseless_rho_split(400.0)
    with pytest.raises(ConfigurationError):
        music_rho(split, GRID, delta_f=312.5e3)
