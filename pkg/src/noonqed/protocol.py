"""Sequential protocol engine: prepare, interact, rotate, measure.

A run starts from |g, 0, 0>. Preparation steps overwrite a factor of the
current state and are only legal while that factor is still a product:
``PrepareCavity`` needs the mode to sit in a single Fock state, and
``PrepareAtom`` needs the atom in a definite level, as it is initially and
after every measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .dynamics import LeakageError, evolve_cavity, rotate_atom
from .fockspace import (
    IMPOSSIBLE_TOL,
    AtomLevel,
    CavityLabel,
    ImpossibleOutcome,
    JointState,
    Params,
    atom_probability,
    make_basis_state,
    product_state,
    project_atom,
)


class AtomPreparation(Enum):
    EXCITED = "e"
    GROUND = "g"
    SUPERPOSITION = "superposition"

    def vector(self) -> np.ndarray:
        if self is AtomPreparation.EXCITED:
            return np.array([1.0, 0.0])
        if self is AtomPreparation.GROUND:
            return np.array([0.0, 1.0])
        return np.array([1.0, 1.0]) / math.sqrt(2)


@dataclass(frozen=True)
class PrepareAtom:
    state: AtomPreparation


@dataclass(frozen=True)
class PrepareCavity:
    cavity: CavityLabel
    n: int


@dataclass(frozen=True)
class Rotate:
    theta: float


@dataclass(frozen=True)
class Interact:
    cavity: CavityLabel
    tau: float


@dataclass(frozen=True)
class MeasureAtom:
    """Atom detection. ``seed=None`` post-selects ``outcome``; otherwise the
    outcome is drawn from the Born probabilities with that seed."""

    outcome: AtomLevel
    seed: int | None = None

    @property
    def sampled(self) -> bool:
        return self.seed is not None


Step = Union[PrepareAtom, PrepareCavity, Rotate, Interact, MeasureAtom]


class ProgramError(ValueError):
    """Program violates a structural rule at ``step_index``."""

    def __init__(self, step_index: int, message: str):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index
        self.message = message


class ProtocolAbort(RuntimeError):
    def __init__(self, step_index: int, message: str):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index


@dataclass(frozen=True)
class Program:
    params: Params = field(default_factory=Params)
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))


@dataclass(frozen=True)
class Event:
    index: int
    description: str
    probability: float | None = None
    outcome: AtomLevel | None = None


@dataclass(frozen=True)
class RunResult:
    final_state: JointState
    events: tuple[Event, ...]
    joint_postselect_probability: float


def validate_program(prog: Program) -> None:
    """Raise ProgramError for structurally invalid programs."""
    seen_interact = False
    atom_preps = 0
    for i, step in enumerate(prog.steps):
        if isinstance(step, Interact):
            if not (math.isfinite(step.tau) and step.tau >= 0):
                raise ProgramError(i, f"interaction time must be finite and >= 0, got {step.tau}")
            seen_interact = True
        elif isinstance(step, PrepareCavity):
            if not 0 <= step.n <= prog.params.cutoff:
                raise ProgramError(i, f"fock {step.n} outside [0, {prog.params.cutoff}]")
        elif isinstance(step, PrepareAtom):
            if not seen_interact:
                atom_preps += 1
                if atom_preps > 1:
                    raise ProgramError(i, "more than one atom preparation before the first interaction")
        elif isinstance(step, MeasureAtom):
            if not seen_interact:
                raise ProgramError(i, "measurement before any interaction")
        elif isinstance(step, Rotate):
            if not math.isfinite(step.theta):
                raise ProgramError(i, "rotation angle must be finite")
        else:
            raise ProgramError(i, f"unknown step {step!r}")


def _prepare_atom(s: JointState, prep: AtomPreparation, i: int) -> JointState:
    pe = atom_probability(s, AtomLevel.EXCITED)
    pg = atom_probability(s, AtomLevel.GROUND)
    if min(pe, pg) > IMPOSSIBLE_TOL:
        raise ProtocolAbort(i, "atom is entangled with the field; measure it before re-preparing")
    level = AtomLevel.EXCITED if pe > pg else AtomLevel.GROUND
    return product_state(prep.vector(), s.block(level))


def _prepare_cavity(s: JointState, cavity: CavityLabel, n: int, i: int) -> JointState:
    probs = (np.abs(s.amplitudes) ** 2).sum(axis=(0, 3 - cavity.axis))
    occupied = np.flatnonzero(probs > IMPOSSIBLE_TOL)
    if len(occupied) != 1:
        raise ProtocolAbort(i, f"cavity {cavity.value} is not in a number state; cannot re-prepare it")
    amps = np.zeros_like(s.amplitudes)
    src = np.take(s.amplitudes, occupied[0], axis=cavity.axis)
    idx = [slice(None)] * 3
    idx[cavity.axis] = n
    amps[tuple(idx)] = src
    return JointState(amps)


def run(prog: Program, seed: int | None = None) -> RunResult:
    """Execute ``prog`` from |g, 0, 0>.

    ``seed`` turns every post-selecting measurement into a Born sample drawn
    from a generator seeded with it; steps with their own seed keep it.
    """
    validate_program(prog)
    p = prog.params
    s = make_basis_state(AtomLevel.GROUND, 0, 0, p.cutoff)
    shared_rng = np.random.default_rng(seed) if seed is not None else None
    events: list[Event] = []
    joint = 1.0
    for i, step in enumerate(prog.steps):
        if isinstance(step, PrepareAtom):
            s = _prepare_atom(s, step.state, i)
            events.append(Event(i, f"prepare atom {step.state.value}"))
        elif isinstance(step, PrepareCavity):
            s = _prepare_cavity(s, step.cavity, step.n, i)
            events.append(Event(i, f"prepare cavity {step.cavity.value} fock {step.n}"))
        elif isinstance(step, Rotate):
            s = rotate_atom(s, step.theta)
            events.append(Event(i, f"rotate {step.theta:.6g}"))
        elif isinstance(step, Interact):
            try:
                s = evolve_cavity(s, step.cavity, step.tau, p)
            except LeakageError as exc:
                raise ProtocolAbort(i, str(exc)) from exc
            events.append(Event(i, f"interact {step.cavity.value} tau={step.tau:.6g}"))
        elif isinstance(step, MeasureAtom):
            rng = np.random.default_rng(step.seed) if step.sampled else shared_rng
            if rng is None:
                outcome = step.outcome
                how = "post-select"
            else:
                pe = atom_probability(s, AtomLevel.EXCITED)
                outcome = AtomLevel.EXCITED if rng.random() < pe else AtomLevel.GROUND
                how = "sampled"
            try:
                prob, s = project_atom(s, outcome)
            except ImpossibleOutcome as exc:
                raise ProtocolAbort(i, str(exc)) from exc
            joint *= prob
            events.append(Event(i, f"measure atom {how} -> {outcome.symbol}", prob, outcome))
    return RunResult(s, tuple(events), joint)


def twotwo_program(tau: float, params: Params | None = None) -> Program:
    """Deposit two photons in each empty cavity with one excited atom."""
    if not (math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tau must be finite and >= 0, got {tau}")
    steps = (
        PrepareAtom(AtomPreparation.EXCITED),
        PrepareCavity(CavityLabel.A, 0),
        PrepareCavity(CavityLabel.B, 0),
        Interact(CavityLabel.A, tau),
        MeasureAtom(AtomLevel.GROUND),
        Rotate(math.pi),
        Interact(CavityLabel.B, tau),
        MeasureAtom(AtomLevel.GROUND),
    )
    return Program(params or Params(), steps)


def noon_program(tau: float, params: Params | None = None, outcome: AtomLevel = AtomLevel.GROUND) -> Program:
    """Entangle two |2> cavities through a superposed atom, then read it out."""
    if not (math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tau must be finite and >= 0, got {tau}")
    steps = (
        PrepareCavity(CavityLabel.A, 2),
        PrepareCavity(CavityLabel.B, 2),
        PrepareAtom(AtomPreparation.SUPERPOSITION),
        Interact(CavityLabel.A, tau),
        Interact(CavityLabel.B, tau),
        Rotate(math.pi / 2),
        MeasureAtom(outcome),
    )
    return Program(params or Params(), steps)
