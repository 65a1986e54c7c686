"""Discrete asymptotic surfaces with prescribed negative curvature."""

from ._core import (
    ConfigError,
    Mesh,
    NumericalError,
    eval_curvature,
    fast_march,
    generate,
    geometric_schedule,
    load,
    parse,
    quad_update,
    run,
    surgery,
    unfold_candidate,
)

__all__ = [
    "ConfigError",
    "Mesh",
    "NumericalError",
    "eval_curvature",
    "fast_march",
    "generate",
    "geometric_schedule",
    "load",
    "parse",
    "quad_update",
    "run",
    "surgery",
    "unfold_candidate",
]
