"""Exact optimization of multi-agent linear models with contrastive what-if explanations."""

from .model import (
    Assignment,
    LinearConstraint,
    Model,
    Variable,
    build_model,
    check_feasibility,
    evaluate_objective,
    model_from_json,
    model_to_json,
    normalize_sense,
)
from .solver import SolveParams, SolveResult, brute_force, solve

__all__ = [
    "Assignment",
    "LinearConstraint",
    "Model",
    "Variable",
    "build_model",
    "check_feasibility",
    "evaluate_objective",
    "model_from_json",
    "model_to_json",
    "normalize_sense",
    "SolveParams",
    "SolveResult",
    "brute_force",
    "solve",
]
