"""Joint atom + two-cavity pure states in a truncated Fock basis.

Amplitudes are stored densely as a complex array of shape
``(2, cutoff + 1, cutoff + 1)`` indexed ``(atom, n_a, n_b)``. Row 0 of the
atom axis is the excited level, row 1 the ground level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

NORM_TOL = 1e-10
IMPOSSIBLE_TOL = 1e-12
DEFAULT_CUTOFF = 20
MIN_CUTOFF = 6


class AtomLevel(Enum):
    EXCITED = 0
    GROUND = 1

    @property
    def symbol(self) -> str:
        return "e" if self is AtomLevel.EXCITED else "g"

    def other(self) -> "AtomLevel":
        return AtomLevel.GROUND if self is AtomLevel.EXCITED else AtomLevel.EXCITED


class CavityLabel(Enum):
    A = "A"
    B = "B"

    @property
    def axis(self) -> int:
        """Axis of the amplitude array holding this mode."""
        return 1 if self is CavityLabel.A else 2


class CutoffError(ValueError):
    """Occupation number outside the truncated basis, or mismatched cutoffs."""


class ImpossibleOutcome(ValueError):
    """Post-selection onto an outcome with (numerically) zero probability."""

    def __init__(self, outcome: AtomLevel, probability: float):
        super().__init__(
            f"impossible outcome {outcome.symbol}: probability {probability:.3e} "
            f"below {IMPOSSIBLE_TOL:g}"
        )
        self.outcome = outcome
        self.probability = probability


@dataclass(frozen=True)
class Params:
    """Physical parameters in units of the coupling (lambda = 1).

    Attributes:
        chi: Stark-shift coefficient chi / lambda.
        delta: detuning Delta / lambda.
        cutoff: largest Fock occupation kept per mode.
    """

    chi: float = 0.0
    delta: float = 0.0
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        if not (math.isfinite(self.chi) and math.isfinite(self.delta)):
            raise ValueError(f"chi and delta must be finite, got {self.chi}, {self.delta}")
        if isinstance(self.cutoff, bool) or int(self.cutoff) != self.cutoff:
            raise ValueError(f"cutoff must be an integer, got {self.cutoff!r}")
        if self.cutoff < MIN_CUTOFF:
            raise CutoffError(f"cutoff must be >= {MIN_CUTOFF}, got {self.cutoff}")


@dataclass(frozen=True, eq=False)
class JointState:
    """Immutable state vector of atom (x) cavity A (x) cavity B."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 3 or amps.shape[0] != 2 or amps.shape[1] != amps.shape[2]:
            raise ValueError(f"amplitudes must have shape (2, M, M), got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[1] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "JointState":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return JointState(self.amplitudes / nrm)

    def block(self, level: AtomLevel) -> np.ndarray:
        """Field amplitudes ``[n_a, n_b]`` conditioned on an atomic level."""
        return self.amplitudes[level.value]

    def amplitude(self, level: AtomLevel, n_a: int, n_b: int) -> complex:
        return complex(self.amplitudes[level.value, n_a, n_b])

    def __repr__(self):
        nz = np.argwhere(np.abs(self.amplitudes) > 1e-12)
        terms = [
            f"({self.amplitudes[tuple(ix)]:.4g})|{'eg'[ix[0]]},{ix[1]},{ix[2]}>"
            for ix in nz[:6]
        ]
        more = " + ..." if len(nz) > 6 else ""
        return f"JointState(cutoff={self.cutoff}: {' + '.join(terms) or '0'}{more})"


def _check_occupation(n: int, cutoff: int, mode: str):
    if n < 0 or n > cutoff:
        raise CutoffError(f"occupation n_{mode}={n} outside [0, {cutoff}]")


def zeros(cutoff: int) -> np.ndarray:
    return np.zeros((2, cutoff + 1, cutoff + 1), dtype=complex)


def make_basis_state(atom: AtomLevel, n_a: int, n_b: int, cutoff: int = DEFAULT_CUTOFF) -> JointState:
    """Return the basis ket |atom, n_a, n_b>."""
    _check_occupation(n_a, cutoff, "a")
    _check_occupation(n_b, cutoff, "b")
    amps = zeros(cutoff)
    amps[atom.value, n_a, n_b] = 1.0
    return JointState(amps)


def superposition_atom(n_a: int, n_b: int, cutoff: int = DEFAULT_CUTOFF) -> JointState:
    """Return (|e> + |g>)|n_a, n_b> / sqrt(2)."""
    _check_occupation(n_a, cutoff, "a")
    _check_occupation(n_b, cutoff, "b")
    amps = zeros(cutoff)
    amps[:, n_a, n_b] = 1.0 / math.sqrt(2.0)
    return JointState(amps)


def inner(s1: JointState, s2: JointState) -> complex:
    """<s1|s2>, conjugate-linear in the first argument."""
    if s1.cutoff != s2.cutoff:
        raise CutoffError(f"cutoff mismatch: {s1.cutoff} vs {s2.cutoff}")
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def atom_probability(s: JointState, level: AtomLevel) -> float:
    return float(np.sum(np.abs(s.block(level)) ** 2))


def project_atom(s: JointState, outcome: AtomLevel) -> tuple[float, JointState]:
    """Measure the atom and keep only ``outcome``.

    Returns the Born probability and the renormalized collapsed state.
    Raises ImpossibleOutcome when the probability is below 1e-12.
    """
    prob = atom_probability(s, outcome)
    if prob < IMPOSSIBLE_TOL:
        raise ImpossibleOutcome(outcome, prob)
    amps = zeros(s.cutoff)
    amps[outcome.value] = s.block(outcome) / math.sqrt(prob)
    return prob, JointState(amps)


def boundary_leakage(s: JointState, margin: int) -> float:
    """Probability mass with n_a or n_b above ``cutoff - margin``."""
    if not 0 <= margin < s.cutoff:
        raise ValueError(f"margin must lie in [0, {s.cutoff}), got {margin}")
    probs = np.abs(s.amplitudes) ** 2
    n = np.arange(s.cutoff + 1)
    outside = n > s.cutoff - margin
    mask = outside[:, None] | outside[None, :]
    return float(probs[:, mask].sum())


def product_state(atom: np.ndarray, field: np.ndarray) -> JointState:
    """Tensor an atomic 2-vector with a two-mode field array."""
    return JointState(np.multiply.outer(np.asarray(atom, dtype=complex), field))
