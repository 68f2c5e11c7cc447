"""Dispatch toolkit for an island electricity/heat/freshwater system."""

from islandies._core import (
    Checkpoint,
    ChpParams,
    ConfigError,
    ConvergenceReport,
    CostParams,
    CwpParams,
    DeviceParams,
    DispatchDecision,
    DpResult,
    Emergency,
    EmergencyResult,
    EnvConfig,
    EnvState,
    EpisodeEval,
    GaussianPolicy,
    GbParams,
    GridSpec,
    GtParams,
    HstAnalysis,
    HstParams,
    Hyperparams,
    IesEnv,
    InfeasibleError,
    Mlp,
    PeriodLoads,
    RewardConfig,
    RunConfig,
    SceneGenConfig,
    Scenario,
    StepInfo,
    StepOutcome,
    SwarmConfig,
    SwarmResult,
    SwarmRunStat,
    TrainLogRow,
    TrainResult,
    analyze_hst,
    apply_emergency,
    assess_convergence,
    box_feasible,
    default_base_day,
    dp_oracle,
    evaluate_policy,
    generate_scene,
    greedy_action,
    load_checkpoint,
    load_config,
    load_scenario,
    make_env_config,
    make_scene_config,
    neutral_decision,
    parse_emergency_spec,
    project_feasible,
    pso_dispatch,
    reduce_decision,
    resolve_scenario,
    save_checkpoint,
    save_scenario,
    step_feasible,
    total_cost,
    train,
    woa_dispatch,
)

__all__ = [name for name in dir() if not name.startswith("_")]
