"""AR latent-variable graphical model identification."""

from ._core import (
    BlockRow,
    ConfigError,
    CovSequence,
    DataError,
    DualCertificate,
    DualSolution,
    EdgeSet,
    ExtensionCertificate,
    FixedModel,
    IoError,
    LatentArModel,
    LatentStructure,
    MaxentOptions,
    RegParams,
    RegPath,
    ScoredModel,
    SolverError,
    SolverOptions,
    SweepOptions,
    SweepResult,
    certify_extension,
    coherence_mean,
    complexity,
    dot_string,
    estimate_lags,
    gen_model,
    log_returns,
    recover_latent,
    recover_x,
    sample,
    solve_fixed,
    solve_sl_dual,
    support_edges,
    sweep,
    transversality,
)

__all__ = [
    "BlockRow",
    "ConfigError",
    "CovSequence",
    "DataError",
    "DualCertificate",
    "DualSolution",
    "EdgeSet",
    "ExtensionCertificate",
    "FixedModel",
    "IoError",
    "LatentArModel",
    "LatentStructure",
    "MaxentOptions",
    "RegParams",
    "RegPath",
    "ScoredModel",
    "SolverError",
    "SolverOptions",
    "SweepOptions",
    "SweepResult",
    "certify_extension",
    "coherence_mean",
    "complexity",
    "dot_string",
    "estimate_lags",
    "gen_model",
    "log_returns",
    "recover_latent",
    "recover_x",
    "sample",
    "solve_fixed",
    "solve_sl_dual",
    "support_edges",
    "sweep",
    "transversality",
]
