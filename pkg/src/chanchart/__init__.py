"""chanchart: model-based channel charting from simulated CSI.

Simulates multi-antenna, multi-subcarrier channel state information for
randomly placed UEs, estimates per-UE angle of arrival and distance with
classical spectral estimators, assembles 2-D channel charts, and scores them
with trustworthiness/continuity metrics and wall-clock benchmarks.
"""

__version__ = "0.1.0"

from .aoa import (
    AngleGrid,
    Spectrum,
    bartlett_theta,
    make_spectrum,
    minnorm_theta,
    music_theta,
    mvdr_theta,
    peak_search,
)
from .bench import TimingRecord, benchmark_matrix, format_table, records_to_json, time_pipeline
from .channel import (
    SPEED_OF_LIGHT,
    ChannelModel,
    ChannelParams,
    CsiMatrix,
    add_awgn,
    fading_gain,
    generate_csi,
    ray_matrix,
    read_csi,
    steering_vector,
    subcarrier_vector,
    write_csi,
)
from .chart import Chart, ChartPoint, build_chart, polar_to_chart, read_chart_csv, write_chart_csv
from .cli import ExperimentConfig, main, run_experiment, run_suite
from .exceptions import (
    AssemblyError,
    BenchmarkError,
    ChartingError,
    ConfigurationError,
    DegenerateInputError,
    DegenerateSplitError,
    DegenerateWeightError,
    DomainError,
    FitError,
    InsufficientApertureError,
    NotPositiveDefiniteError,
)
from .metrics import (
    QualityReport,
    continuity,
    quality_curve,
    rank_matrix,
    read_metrics_json,
    trustworthiness,
    write_metrics_json,
)
from .pipeline import (
    EstimateContext,
    METRIC_RHO_ALGOS,
    RHO_ALGOS,
    THETA_ALGOS,
    estimate_rho,
    estimate_scene,
    estimate_theta,
    fit_lr,
    sweep_estimates,
)
from .ranging import (
    LrModel,
    RangeGrid,
    bartlett_rho,
    check_range_alias,
    isq_rho,
    lr_fit,
    lr_rho,
    music_rho,
)
from .scene import (
    Position3,
    Scene,
    SceneConfig,
    generate_scene,
    true_polar,
    vip_glyph_points,
    write_scene_csv,
)
from .subspace import (
    CovarianceAxis,
    CovarianceMatrix,
    EigenDecomposition,
    FixedK,
    RatioThreshold,
    SubspaceSplit,
    cholesky,
    covariance,
    default_loading,
    hermitian_eig,
    split_subspaces,
)
