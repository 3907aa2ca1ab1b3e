"""Quantum-walk circuit compiler and scattering analysis."""

from ._core import (
    Graph,
    ParseError,
    QwalkError,
    bound_states,
    build_widget,
    compile_circuit,
    compose_deviation,
    effective_length,
    evolve,
    filter_chain,
    glue_series,
    group_velocity,
    reference_coefficient,
    run,
    s_matrix,
    transmission,
)

__all__ = [
    "Graph",
    "ParseError",
    "QwalkError",
    "bound_states",
    "build_widget",
    "compile_circuit",
    "compose_deviation",
    "effective_length",
    "evolve",
    "filter_chain",
    "glue_series",
    "group_velocity",
    "reference_coefficient",
    "run",
    "s_matrix",
    "transmission",
]
