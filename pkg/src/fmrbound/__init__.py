"""Guaranteed enclosures for ferromagnetic-resonance fields.

The solver encloses every resonance field of an axially anisotropic
wire by interval branch and bound: no true resonance is ever missed,
and every reported interval carries a machine-checkable containment
argument built from outward-rounded interval arithmetic.
"""

from .interval import EMPTY, UNBOUNDED, Interval
from .params import GAMMA_PER_G, FieldDirection, MaterialParams, load_preset
from .energy import EnergyDerivatives, derivatives, energy
from .resonance import Reason, TestOutcome, omega_over_gamma_sq, test_box
from .solver import (
    Box3,
    ListOverflow,
    ResonanceResult,
    SolverConfig,
    SolverState,
    Status,
    solve_orientation,
)
from .oracle import BranchJump, OracleRoot, equilibrium, omega_sq_at, scan_resonances
from .kernels import backend_name

__version__ = "0.1.0"

__all__ = [
    "Interval",
    "EMPTY",
    "UNBOUNDED",
    "MaterialParams",
    "FieldDirection",
    "GAMMA_PER_G",
    "load_preset",
    "EnergyDerivatives",
    "energy",
    "derivatives",
    "Reason",
    "TestOutcome",
    "omega_over_gamma_sq",
    "test_box",
    "Box3",
    "SolverConfig",
    "SolverState",
    "Status",
    "ResonanceResult",
    "ListOverflow",
    "solve_orientation",
    "OracleRoot",
    "BranchJump",
    "equilibrium",
    "omega_sq_at",
    "scan_resonances",
    "backend_name",
    "__version__",
]
