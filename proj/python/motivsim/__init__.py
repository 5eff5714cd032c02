"""Homeostatic drive-reduction agents in a recharge-station grid world."""

from ._motivsim import (
    Action,
    AgentState,
    ConfigError,
    DivergenceError,
    EpisodeLog,
    ExperimentConfig,
    GridConfig,
    Metabolism,
    RechargeScheme,
    RewardModel,
    RunDirError,
    StationSpec,
    TrainingResult,
    build_config,
    default_grid,
    drive,
    drive_summary,
    experiment_ids,
    features,
    grid_from_layout_json,
    occupancy,
    reward_m1,
    reward_m2,
    run_cli,
    step,
    test,
    train,
    window_stats,
)

__all__ = [
    "Action",
    "AgentState",
    "ConfigError",
    "DivergenceError",
    "EpisodeLog",
    "ExperimentConfig",
    "GridConfig",
    "Metabolism",
    "RechargeScheme",
    "RewardModel",
    "RunDirError",
    "StationSpec",
    "TrainingResult",
    "build_config",
    "default_grid",
    "drive",
    "drive_summary",
    "experiment_ids",
    "features",
    "grid_from_layout_json",
    "occupancy",
    "reward_m1",
    "reward_m2",
    "run_cli",
    "step",
    "test",
    "train",
    "window_stats",
]
