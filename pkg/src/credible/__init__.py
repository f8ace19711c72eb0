"""Credible-equilibrium solver and verifier for multi-stage games."""

from .model import (
    BehaviorProfile,
    CapExceeded,
    CyclicProfile,
    GameError,
    MixedProfile,
    MultiStageGame,
    StageGame,
    UnsupportedHorizon,
    discounted_payoff,
    expected_stage_payoff,
    subgames_equivalent,
    validate_game,
)
from .nash import enumerate_mixed_nash_2p, enumerate_pure_nash, has_unique_nash, is_nash
from .finite import (
    analyze_uniqueness,
    construct_credible,
    enumerate_pure_credible,
    enumerate_pure_spne,
    verify_credible,
    verify_spne,
)
from .automaton import (
    automaton_values,
    reachable_states_at_time,
    verify_credible_automaton,
    verify_spne_automaton,
)
from .tree import backward_induction_all, check_prop3, equivalent_subgame_classes, verify_credible_tree
from .verdict import Verdict, Witness

__version__ = "0.1.0"
