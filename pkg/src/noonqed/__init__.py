"""Two-photon cavity QED simulator for NOON-state generation in two cavities."""

from .fockspace import (
    AtomLevel,
    CavityLabel,
    CutoffError,
    ImpossibleOutcome,
    JointState,
    Params,
    boundary_leakage,
    inner,
    make_basis_state,
    project_atom,
    superposition_atom,
)
from .dynamics import LeakageError, coefficients, delta_n, evolve_cavity, gamma_n, rotate_atom

__version__ = "0.1.0"
