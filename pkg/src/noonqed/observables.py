"""Atomic inversion, photon statistics and NOON-state fidelity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import evolve_cavity
from .fockspace import (
    AtomLevel,
    CavityLabel,
    JointState,
    Params,
    atom_probability,
    make_basis_state,
)


@dataclass(frozen=True, eq=False)
class InversionSeries:
    taus: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        if len(self.taus) != len(self.w):
            raise ValueError("taus and w must have equal length")
        if np.any(np.diff(self.taus) <= 0):
            raise ValueError("taus must be strictly increasing")


@dataclass(frozen=True)
class NoonTarget:
    """(|N,0> + sign |0,N>) / sqrt(2)."""

    n_photons: int
    relative_sign: int = 1

    def __post_init__(self):
        if self.n_photons < 1:
            raise ValueError(f"n_photons must be >= 1, got {self.n_photons}")
        if self.relative_sign not in (1, -1):
            raise ValueError(f"relative_sign must be +1 or -1, got {self.relative_sign}")

    def flipped(self) -> "NoonTarget":
        return NoonTarget(self.n_photons, -self.relative_sign)

    def field(self, cutoff: int) -> np.ndarray:
        if self.n_photons > cutoff:
            raise ValueError(f"N={self.n_photons} exceeds cutoff {cutoff}")
        out = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        out[self.n_photons, 0] = 1 / math.sqrt(2)
        out[0, self.n_photons] = self.relative_sign / math.sqrt(2)
        return out


def atomic_inversion(s: JointState) -> float:
    """P_e - P_g."""
    return atom_probability(s, AtomLevel.EXCITED) - atom_probability(s, AtomLevel.GROUND)


def inversion_trace(
    atom0: AtomLevel,
    n0: int,
    cavity: CavityLabel,
    p: Params,
    tau_max: float,
    steps: int,
) -> InversionSeries:
    """W(tau) on ``steps`` evenly spaced times in [0, tau_max].

    The atom starts in ``atom0`` with ``n0`` photons in ``cavity`` and the
    other cavity empty. Every sample is propagated directly from tau = 0.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not tau_max > 0:
        raise ValueError("tau_max must be positive")
    n_a, n_b = (n0, 0) if cavity is CavityLabel.A else (0, n0)
    s0 = make_basis_state(atom0, n_a, n_b, p.cutoff)
    taus = np.linspace(0.0, tau_max, steps)
    w = np.array([atomic_inversion(evolve_cavity(s0, cavity, t, p)) for t in taus])
    return InversionSeries(taus, np.clip(w, -1.0, 1.0))


def photon_distribution(s: JointState, cavity: CavityLabel) -> np.ndarray:
    probs = np.abs(s.amplitudes) ** 2
    other = 2 if cavity is CavityLabel.A else 1
    return probs.sum(axis=(0, other))


def noon_fidelity(field_state: JointState, target: NoonTarget) -> float:
    """|<NOON|psi>|^2 for a state whose atom has already been measured.

    Summing the overlap over both atomic blocks makes this the target's
    population in the reduced field state; for a collapsed state only one
    block is nonzero and the two definitions agree.
    """
    t = target.field(field_state.cutoff)
    f = sum(abs(np.vdot(t, field_state.block(lv))) ** 2 for lv in AtomLevel)
    return float(min(max(f, 0.0), 1.0))


def field_fidelity(field_state: JointState, field: np.ndarray) -> float:
    """Overlap with an arbitrary normalized two-mode field array."""
    return float(sum(abs(np.vdot(field, field_state.block(lv))) ** 2 for lv in AtomLevel))


def infer_noon_n(s: JointState, min_weight: float = 0.5) -> int | None:
    """N whose {(N,0), (0,N)} entries hold most of the field population.

    Returns None unless that weight exceeds ``min_weight``; the photon-free
    vacuum never qualifies.
    """
    probs = (np.abs(s.amplitudes) ** 2).sum(axis=0)
    n = np.arange(1, s.cutoff + 1)
    weight = probs[n, 0] + probs[0, n]
    best = int(np.argmax(weight))
    return int(n[best]) if weight[best] > min_weight else None
