"""Two-phase fluid-interface model bindings."""

import json

from ._core import (
    CapillarError,
    Cell,
    ClosureKind,
    EquilibriumMode,
    EquilibriumProblem,
    GeometricClosure,
    InterfaceEos,
    Materials,
    MixtureState,
    ModelParams,
    PhaseEos,
    SourceSign,
    energy_density,
    eval_interface,
    eval_mixture,
    eval_phase,
    gibbs_residuals,
    run_command,
    simulate,
    solve_equilibrium,
    spectrum,
)


def report(command, config, out_dir=None):
    """Run check-thermo, equilibrium or eigen and return (exit_code, report dict)."""
    code, out, err = run_command(command, str(config), None if out_dir is None else str(out_dir))
    if not out:
        raise CapillarError(err.strip())
    return code, json.loads(out)


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
