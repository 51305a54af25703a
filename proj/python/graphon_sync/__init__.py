"""Kuramoto-type oscillators on graphon random networks."""

from ._core import (
    ConfigError,
    DimensionError,
    DivergenceError,
    DomainError,
    FrameError,
    Graphon,
    InputError,
    ParameterError,
    beta_threshold_p,
    connectivity_threshold,
    derive_seed,
    discretize,
    erdos_renyi,
    g_bar,
    is_connected,
    linf_distance,
    max_beta_for,
    order_parameter,
    phase_diameter,
    positive_system_bound,
    run_phase_diagram,
    sample_network,
    simulate_ads,
    simulate_cds,
    simulate_sds,
    solve_initial_frame,
)

__all__ = [name for name in dir() if not name.startswith("_")]
