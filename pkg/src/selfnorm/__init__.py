"""Simulation laboratory for self-normalized partial-sum processes.

Draw heavy-tailed i.i.d. samples, form the interpolated self-normalized path
Y_{n,p}, and check its limiting behavior (degenerate, Brownian, or non-tight)
against reference laws and the limiting joint characteristic function.
"""
from .diagnostics import (
    NormChain,
    dan_criterion_curve,
    dan_transform,
    darling_ratio,
    max_ratio,
    modulus_of_continuity,
    norm_chain,
    sum_sq_ratio,
)
from .errors import (
    ConfigError,
    DegenerateSampleError,
    InternalConsistencyError,
    MissingStatisticsError,
    OracleMissingError,
    ParameterDomainError,
)
from .families import FAMILY_KINDS, FamilySpec, SampleBatch, sample_family
from .harness import (
    CHF_U_GRID,
    CHF_W_GRID,
    EXPERIMENT_KINDS,
    ORACLE_PATHS,
    ORACLE_SEED,
    ORACLE_STEPS,
    AggregateRow,
    ExperimentConfig,
    ExperimentReport,
    build_oracles,
    decide_regime,
    default_oracle_dir,
    load_default_thresholds,
    read_report,
    regime_map,
    report_payload,
    run_experiment,
    sweep,
    write_report,
)
from .limits import (
    QuadSpec,
    ReferenceLaw,
    TailConstants,
    brownian_functional_oracle,
    chf_exponent,
    dispersion_matrix,
    empirical_chf,
    g1_law,
    g2_law,
    ks_statistic,
    ks_two_sample,
    limit_chf,
    load_oracle,
    save_oracle,
    scaled_normal_law,
    std_normal_law,
    tail_constants,
)
from .process import (
    EKFunctionals,
    PartialSumPath,
    PNorm,
    ProcessPath,
    ek_functionals,
    p_norm,
    partial_sums,
    y_at,
    y_path,
)
from .rng import SeededStream, derive_seed

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "CHF_U_GRID",
    "CHF_W_GRID",
    "ConfigError",
    "DegenerateSampleError",
    "EKFunctionals",
    "EXPERIMENT_KINDS",
    "ExperimentConfig",
    "ExperimentReport",
    "FAMILY_KINDS",
    "FamilySpec",
    "InternalConsistencyError",
    "MissingStatisticsError",
    "NormChain",
    "ORACLE_PATHS",
    "ORACLE_SEED",
    "ORACLE_STEPS",
    "OracleMissingError",
    "PNorm",
    "ParameterDomainError",
    "PartialSumPath",
    "ProcessPath",
    "QuadSpec",
    "ReferenceLaw",
    "SampleBatch",
    "SeededStream",
    "TailConstants",
    "brownian_functional_oracle",
    "build_oracles",
    "chf_exponent",
    "dan_criterion_curve",
    "dan_transform",
    "darling_ratio",
    "decide_regime",
    "default_oracle_dir",
    "derive_seed",
    "dispersion_matrix",
    "ek_functionals",
    "empirical_chf",
    "g1_law",
    "g2_law",
    "ks_statistic",
    "ks_two_sample",
    "limit_chf",
    "load_default_thresholds",
    "load_oracle",
    "max_ratio",
    "modulus_of_continuity",
    "norm_chain",
    "p_norm",
    "partial_sums",
    "read_report",
    "regime_map",
    "report_payload",
    "run_experiment",
    "sample_family",
    "save_oracle",
    "scaled_normal_law",
    "std_normal_law",
    "sum_sq_ratio",
    "sweep",
    "tail_constants",
    "write_report",
    "y_at",
    "y_path",
]
