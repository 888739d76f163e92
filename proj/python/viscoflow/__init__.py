"""Compressible viscoelastic flow on periodic grids."""

from ._viscoflow import (
    Grid,
    Physics,
    State,
    ViscoflowError,
    acoustic_state,
    add_cell_flow,
    compatible_deformation_state,
    convergence_study,
    curl_defect,
    elastic_compatibility_divergence,
    equilibrium_state,
    exact_state,
    incompatible_state,
    initial_state,
    manufactured_cases,
    parse_config,
    piola_stress,
    piola_stress_numeric,
    random_smooth_state,
    read_snapshot,
    report,
    run_cli,
    simulate,
    write_snapshot,
)

__version__ = "0.1.0"
