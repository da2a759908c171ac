"""Protocol-level studies: NOON read-out, tau_p search and parameter sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import evolve_cavity
from .fockspace import AtomLevel, CavityLabel, ImpossibleOutcome, Params, make_basis_state, project_atom
from .observables import NoonTarget, atomic_inversion, noon_fidelity
from .optimize import grid_then_golden
from .protocol import Program, noon_program, run

NOON_TARGET = NoonTarget(4, +1)


@dataclass(frozen=True)
class NoonReport:
    tau: float
    params: Params
    fidelity_ground: float
    p_ground: float
    fidelity_excited: float
    p_excited: float


@dataclass(frozen=True)
class SweepRow:
    chi: float
    delta: float
    fidelity: float
    p_ground: float


def _branch(prog: Program, target: NoonTarget) -> tuple[float, float]:
    # the last step is the read-out; strip it and project by hand so that an
    # impossible branch reports (F, P) = (0, 0) instead of aborting
    state = run(Program(prog.params, prog.steps[:-1])).final_state
    outcome = prog.steps[-1].outcome
    try:
        prob, collapsed = project_atom(state, outcome)
    except ImpossibleOutcome as exc:
        return 0.0, exc.probability
    return noon_fidelity(collapsed, target), prob


def noon_report(tau: float, params: Params | None = None) -> NoonReport:
    """Fidelity and detection probability of both read-out branches.

    The ground branch is scored against (|4,0> + |0,4>)/sqrt(2), the excited
    branch against the minus-sign state.
    """
    params = params or Params()
    fg, pg = _branch(noon_program(tau, params, AtomLevel.GROUND), NOON_TARGET)
    fe, pe = _branch(noon_program(tau, params, AtomLevel.EXCITED), NOON_TARGET.flipped())
    return NoonReport(tau, params, fg, pg, fe, pe)


def noon_fidelity_at(tau: float, params: Params | None = None) -> float:
    return _branch(noon_program(tau, params or Params(), AtomLevel.GROUND), NOON_TARGET)[0]


def find_tau(lo: float, hi: float, tol: float, grid: int = 200, params: Params | None = None) -> tuple[float, float]:
    """Interaction time in [lo, hi] maximizing the ground-branch NOON fidelity."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if lo <= 0:
        raise ValueError("lo must be positive")
    return grid_then_golden(lambda t: noon_fidelity_at(t, params), lo, hi, tol, grid)


def _row(tau: float, chi: float, delta: float, cutoff: int) -> SweepRow:
    p = Params(chi=float(chi), delta=float(delta), cutoff=cutoff)
    fid, prob = _branch(noon_program(tau, p, AtomLevel.GROUND), NOON_TARGET)
    return SweepRow(float(chi), float(delta), fid, prob)


def sweep_chi(
    tau: float,
    chi_max: float,
    steps: int,
    deltas=(0.0,),
    cutoff: int = Params().cutoff,
) -> list[SweepRow]:
    """Ground-branch fidelity on a chi grid [0, chi_max], once per detuning."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    return [_row(tau, chi, delta, cutoff) for delta in deltas for chi in np.linspace(0.0, chi_max, steps)]


def compensate_detuning(tau: float, chi: float, deltas, cutoff: int = Params().cutoff) -> tuple[SweepRow, SweepRow]:
    """Best detuning on a grid for fixed chi, returned with the Delta = 0 row."""
    best = max((_row(tau, chi, d, cutoff) for d in deltas), key=lambda r: r.fidelity)
    return best, _row(tau, chi, 0.0, cutoff)


def inversion_at(tau: float, n0: int, p: Params, atom0: AtomLevel = AtomLevel.EXCITED) -> float:
    s0 = make_basis_state(atom0, n0, 0, p.cutoff)
    return atomic_inversion(evolve_cavity(s0, CavityLabel.A, tau, p))


def inversion_minimum(n0: int, p: Params, tau_max: float, steps: int, tol: float = 1e-10) -> tuple[float, float]:
    """Smallest W(tau) on [0, tau_max]: grid search refined by golden section."""
    tau, neg = grid_then_golden(lambda t: -inversion_at(t, n0, p), 0.0, tau_max, tol, steps)
    return tau, -neg
