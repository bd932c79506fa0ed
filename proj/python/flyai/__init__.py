"""Gobang agents with entropy injection: engine, entropy sources, statistics."""

import json as _json

from ._flyai import (
    Agent,
    ContractViolation,
    EntropyConfigurationError,
    GameState,
    IllegalMove,
    InsufficientData,
    InvalidConfiguration,
    ParseError,
    UndefinedMoment,
    agent_names,
    alphabeta,
    candidate_moves,
    evaluate,
    map_sample_to_depth,
    map_sample_to_stimulation,
    minimax,
    replay,
    samples,
    simulate_fly,
    summarize,
)
from ._flyai import run_match as _run_match


def run_match(agents, **kwargs):
    """Play challengers against the original agent; returns the summary as a dict."""
    return _json.loads(_run_match(list(agents), **kwargs))


__all__ = [
    "Agent",
    "ContractViolation",
    "EntropyConfigurationError",
    "GameState",
    "IllegalMove",
    "InsufficientData",
    "InvalidConfiguration",
    "ParseError",
    "UndefinedMoment",
    "agent_names",
    "alphabeta",
    "candidate_moves",
    "evaluate",
    "map_sample_to_depth",
    "map_sample_to_stimulation",
    "minimax",
    "replay",
    "run_match",
    "samples",
    "simulate_fly",
    "summarize",
]
