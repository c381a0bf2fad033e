"""Pressure-robust weak Galerkin solver for coupled Stokes-Darcy flow."""

from ._wgsd import (
    InterfaceGuardError,
    SolverError,
    compare_csv,
    convergence_table,
    infsup,
    interface_residuals,
    mesh,
    quadrature,
    robustness_sweep,
    run,
    solve,
)

ERROR_COLUMNS = ("err_energy_s", "err_l2_s", "err_p_s", "err_energy_d", "err_l2_d", "err_p_d")

__all__ = [
    "ERROR_COLUMNS",
    "InterfaceGuardError",
    "SolverError",
    "compare_csv",
    "convergence_table",
    "infsup",
    "interface_residuals",
    "mesh",
    "quadrature",
    "robustness_sweep",
    "run",
    "solve",
]
