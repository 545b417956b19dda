"""Exact multistochastic Kantorovich linear programs."""

from .model import (
    LPModel,
    LPSolution,
    MarginalSpec,
    build_model,
    consistency_check,
    dual_objective,
    dual_potentials,
    product_cost,
    solve,
    uniform_spec,
)
from .simplex import enumerate_basic_solutions, simplex

__all__ = [
    "LPModel",
    "LPSolution",
    "MarginalSpec",
    "build_model",
    "consistency_check",
    "dual_objective",
    "dual_potentials",
    "enumerate_basic_solutions",
    "product_cost",
    "simplex",
    "solve",
    "uniform_spec",
]
