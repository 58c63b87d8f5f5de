from ._core import (
    ConfigError,
    NumericError,
    bound_gap,
    bound_regret,
    bound_regret_decentralized,
    lambda2,
    metropolis_weights,
    min_consensus_rounds,
    parse_config,
    run_config_file,
    run_config_text,
    step_size,
    __version__,
)

__all__ = [
    "ConfigError",
    "NumericError",
    "bound_gap",
    "bound_regret",
    "bound_regret_decentralized",
    "lambda2",
    "metropolis_weights",
    "min_consensus_rounds",
    "parse_config",
    "run_config_file",
    "run_config_text",
    "step_size",
    "__version__",
]
