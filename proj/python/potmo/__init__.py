"""Multi-objective time-dependent route planning and traffic microsimulation."""

from ._potmo import (
    DIM_NAMES,
    Forecast,
    Graph,
    NoPathError,
    Scenario,
    ValidationError,
    brute_force_optimum,
    count_simple_paths,
    dijkstra_ssp,
    fraction_on_front,
    generate_scenario,
    pareto_min_series,
    plan,
    pmd,
    potmo_astar,
    savgol_coefficients,
    simulate,
    tdd,
    wsp_weight,
)

__all__ = [
    "DIM_NAMES",
    "Forecast",
    "Graph",
    "NoPathError",
    "Scenario",
    "ValidationError",
    "brute_force_optimum",
    "count_simple_paths",
    "dijkstra_ssp",
    "fraction_on_front",
    "generate_scenario",
    "pareto_min_series",
    "plan",
    "pmd",
    "potmo_astar",
    "savgol_coefficients",
    "simulate",
    "tdd",
    "wsp_weight",
]
