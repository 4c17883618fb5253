"""Causal effect identification on acyclic directed mixed graphs."""

from ._causid import (
    CausidError,
    Graph,
    Model,
    Result,
    backdoor_sets,
    backdoor_violations,
    cli,
    ctf_probability,
    effect,
    evaluate,
    fuzz,
    identify,
    identify_effect,
    instruments,
    mediation,
    probability,
    pse,
    pse_value,
)

__all__ = [
    "CausidError",
    "Graph",
    "Model",
    "Result",
    "backdoor_sets",
    "backdoor_violations",
    "cli",
    "ctf_probability",
    "effect",
    "evaluate",
    "fuzz",
    "identify",
    "identify_effect",
    "instruments",
    "mediation",
    "probability",
    "pse",
    "pse_value",
]
