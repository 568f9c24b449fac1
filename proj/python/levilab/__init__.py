"""Exact certificates for collective order convergence and sigma-Levi classes."""

from _levilab import (  # noqa: F401
    Model,
    ModelError,
    WitnessInvalid,
    check_cauchy,
    check_collective,
    check_convergence,
    check_decreasing_null,
    classify,
    classify_set,
    paper_scenarios,
    parse_model,
)

__all__ = [
    "Model",
    "ModelError",
    "WitnessInvalid",
    "check_cauchy",
    "check_collective",
    "check_convergence",
    "check_decreasing_null",
    "classify",
    "classify_set",
    "paper_scenarios",
    "parse_model",
]
