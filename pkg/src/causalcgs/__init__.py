"""Finite-domain structural causal models, actual-cause search, and
tree-shaped concurrent game structures with strategy play-out."""

from .bridge import (
    BridgeError,
    BridgeVerdict,
    FixedActionStrategy,
    StrategySide,
    causal_profile,
    check_prop_cause_iff_strategy,
    check_prop_superset_strategy,
    definition_choice,
    play_deviation,
    witness_sweep,
)
from .builder import (
    BuilderError,
    CausalCgs,
    Origin,
    SizeBoundError,
    SizeReport,
    StateIndex,
    action_path,
    build_causal_cgs,
    build_states,
    check_child_ranges,
    check_leaf_correspondence,
    check_rank_stability,
    check_transition_injectivity,
    check_tree_shape,
    corresponds,
    label_states,
    moves_at,
    size_report,
    transition,
)
from .causality import (
    CandidateCause,
    CausalityError,
    CauseCertificate,
    Witness,
    check_cause,
    dependence_with_witness,
    enumerate_causes,
    is_butfor_cause,
)
from .cgs import (
    NO_OP,
    Cgs,
    CgsError,
    Strategy,
    StrategyProfile,
    fixed_action_strategy,
    legal_move_vectors,
    play,
    validate_cgs,
)
from .cli import cli_main, main
from .dsl import (
    ModelDocument,
    ParseError,
    document_diagnostics,
    outcome_formula,
    parse_checked,
    parse_model,
)
from .export import cgs_payload, export_dot, export_json
from .graph import (
    AgentRanking,
    CausalNetwork,
    GraphError,
    RankingError,
    agent_ranking,
    build_network,
    variable_levels,
)
from .model import (
    BOOL,
    FALSE,
    TRUE,
    And,
    CausalModel,
    Const,
    Diagnostic,
    EqTest,
    EventFormula,
    Expression,
    Ite,
    ModelError,
    Not,
    Or,
    Var,
    all_contexts,
    as_event_formula,
    evaluate,
    free_variables,
    intervened_model,
    make_model,
    satisfies,
    validate_context,
    validate_model,
)
from .randgen import GeneratorConfig, random_expression, random_model, random_true_event

__all__ = [name for name in dir() if not name.startswith("_")]
