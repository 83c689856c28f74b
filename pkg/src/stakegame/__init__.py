"""Deterministic simulator and equilibrium solver for repeated staking games.

Players with fixed capability types and growing token stakes repeatedly
decide whether to participate; a monetary policy picks a winner each round
and pays out a budget.  Everything is computed with exact rationals, so runs
reproduce bit-for-bit and equilibrium comparisons are never at the mercy of
floating-point noise.
"""

from .core import (
    AffineValue,
    GameState,
    IdentityValue,
    Instance,
    Player,
    RoundRecord,
    TableValue,
    ValidationReport,
    rank,
    scalar,
    suffix_set,
    validate_instance,
)
from .engine import (
    PropertyReport,
    Runner,
    Trace,
    monitor_properties,
    run,
    trace_rows,
    write_trace,
)
from .equilibrium import (
    LookaheadHorizonError,
    LookaheadSolver,
    RecoveryPlan,
    Threshold,
    brute_force_equilibrium,
    is_harmful,
    lookahead_equilibrium,
    myopic_equilibrium,
    recovery_winner_labels,
    threshold,
)
from .measures import (
    AlignmentReport,
    AxiomReport,
    check_alignment,
    check_decentralization_axioms,
    max_attainable_index,
    tau_decentralization_index,
    tau_index_measure,
    token_value,
)
from .policies import (
    FixedWinner,
    MuAll,
    MuAlpha,
    MuEll,
    MuStar,
    budget_allocation,
    expected_budget,
    expected_rewards,
    winner_distribution,
)
from .scenarios import (
    BUILTIN_SCENARIOS,
    Scenario,
    ScenarioError,
    builtin_scenario,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
)
from .sybil import (
    SybilConditionReport,
    SybilSplit,
    enumerate_splits,
    is_recovery_sybils,
    make_split,
    max_sybil_gain,
    preferred_recovery_sybils,
    sybil_gain,
    sybil_proofness_condition,
)
from .virtualstake import (
    InvarianceReport,
    VirtualStakeState,
    check_invariance,
    expected_step,
    incumbent_gap_state,
    longrun_share,
    sampled_win_frequencies,
    selection_probabilities,
    theorem6_counterexample,
)

__version__ = "0.1.0"

__all__ = [
    "AffineValue",
    "AlignmentReport",
    "AxiomReport",
    "BUILTIN_SCENARIOS",
    "FixedWinner",
    "GameState",
    "IdentityValue",
    "Instance",
    "InvarianceReport",
    "LookaheadHorizonError",
    "LookaheadSolver",
    "MuAll",
    "MuAlpha",
    "MuEll",
    "MuStar",
    "Player",
    "PropertyReport",
    "RecoveryPlan",
    "RoundRecord",
    "Runner",
    "Scenario",
    "ScenarioError",
    "SybilConditionReport",
    "SybilSplit",
    "TableValue",
    "Threshold",
    "Trace",
    "ValidationReport",
    "VirtualStakeState",
    "brute_force_equilibrium",
    "budget_allocation",
    "builtin_scenario",
    "check_alignment",
    "check_decentralization_axioms",
    "check_invariance",
    "enumerate_splits",
    "expected_budget",
    "expected_rewards",
    "expected_step",
    "incumbent_gap_state",
    "is_harmful",
    "is_recovery_sybils",
    "load_scenario",
    "longrun_share",
    "lookahead_equilibrium",
    "make_split",
    "max_attainable_index",
    "max_sybil_gain",
    "monitor_properties",
    "myopic_equilibrium",
    "parse_scenario",
    "preferred_recovery_sybils",
    "rank",
    "recovery_winner_labels",
    "run",
    "sampled_win_frequencies",
    "save_scenario",
    "scalar",
    "scenario_to_dict",
    "selection_probabilities",
    "suffix_set",
    "sybil_gain",
    "sybil_proofness_condition",
    "tau_decentralization_index",
    "tau_index_measure",
    "theorem6_counterexample",
    "threshold",
    "token_value",
    "trace_rows",
    "validate_instance",
    "winner_distribution",
    "write_trace",
]
