"""Brute-force reference propagator from a dense Hamiltonian.

The single-mode Hamiltonian used here is

    H = (Delta + chi a^dag a) sigma_z / 2 + a^2 sigma_+ + a^dag^2 sigma_-

in the basis ordered (atom level major, Fock index minor) with e first.
The factor 1/2 on the sigma_z term is what reproduces the closed-form
propagator in ``dynamics``, including its exp(i chi tau / 2) prefactor.
It is exponentiated exactly through ``numpy.linalg.eigh``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dynamics import check_leakage
from .fockspace import CavityLabel, JointState, Params


@dataclass(frozen=True, eq=False)
class DenseHamiltonian:
    matrix: np.ndarray
    params: Params
    cutoff: int

    def index(self, level: int, n: int) -> int:
        """Row of |level, n>, where level 0 is e and 1 is g."""
        return level * (self.cutoff + 1) + n

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def build_hamiltonian(cavity_cutoff: int, p: Params) -> DenseHamiltonian:
    if cavity_cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cavity_cutoff}")
    m = cavity_cutoff + 1
    n = np.arange(m)
    a = np.diag(np.sqrt(n[1:].astype(float)), k=1)
    a2 = a @ a
    sz = np.diag([1.0, -1.0])
    sp = np.array([[0.0, 1.0], [0.0, 0.0]])
    h = np.kron(sz, np.diag(0.5 * (p.delta + p.chi * n))) + np.kron(sp, a2) + np.kron(sp.T, a2.T)
    return DenseHamiltonian(h.astype(complex), p, cavity_cutoff)


@lru_cache(maxsize=64)
def _eig(cutoff: int, p: Params):
    w, v = np.linalg.eigh(build_hamiltonian(cutoff, p).matrix)
    return w, v


def propagator(cutoff: int, tau: float, p: Params) -> np.ndarray:
    """V exp(-i E tau) V^dag for the single-mode Hamiltonian."""
    w, v = _eig(cutoff, p)
    return (v * np.exp(-1j * w * tau)) @ v.conj().T


def _apply_single_mode(op: np.ndarray, s: JointState, cavity: CavityLabel) -> np.ndarray:
    m = s.cutoff + 1
    op4 = op.reshape(2, m, 2, m)
    if cavity is CavityLabel.A:
        return np.einsum("iajm,jmb->iab", op4, s.amplitudes)
    return np.einsum("ibjm,jam->iab", op4, s.amplitudes)


def expm_evolve(s: JointState, cavity: CavityLabel, tau: float, p: Params) -> JointState:
    """Reference counterpart of ``dynamics.evolve_cavity``."""
    check_leakage(s, cavity)
    u = propagator(s.cutoff, tau, p)
    return JointState(_apply_single_mode(u, s, cavity))


def energy(s: JointState, cavity: CavityLabel, p: Params) -> float:
    """<H> of the selected cavity's interaction Hamiltonian."""
    h = build_hamiltonian(s.cutoff, p).matrix
    return float(np.vdot(s.amplitudes, _apply_single_mode(h, s, cavity)).real)


def random_state(rng: np.random.Generator, cutoff: int, support: int) -> JointState:
    """Gaussian random normalized state with occupations <= ``support``."""
    amps = np.zeros((2, cutoff + 1, cutoff + 1), dtype=complex)
    shape = (2, support + 1, support + 1)
    amps[:, : support + 1, : support + 1] = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return JointState(amps).normalized()


@dataclass
class ValidationReport:
    trials: int
    compared: int
    rejected: int
    max_deviation: float
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def validate(cutoff: int, trials: int, seed: int, support: int | None = None) -> ValidationReport:
    """Compare the closed-form propagator with the dense exponential.

    Each trial draws a random state with occupations <= ``support``
    (default ``cutoff - 4``), a cavity, tau in [0, 10] and chi, Delta in
    [-1, 1]. States that violate the leakage precondition are counted as
    rejections rather than deviations.
    """
    from .dynamics import LeakageError, evolve_cavity

    if trials < 1:
        raise ValueError("trials must be >= 1")
    if support is None:
        support = cutoff - 4
    rng = np.random.default_rng(seed)
    worst = 0.0
    compared = rejected = 0
    for _ in range(trials):
        s = random_state(rng, cutoff, support)
        cavity = CavityLabel.A if rng.integers(2) == 0 else CavityLabel.B
        tau = rng.uniform(0.0, 10.0)
        p = Params(chi=rng.uniform(-1, 1), delta=rng.uniform(-1, 1), cutoff=max(cutoff, 6))
        try:
            analytic = evolve_cavity(s, cavity, tau, p)
        except LeakageError:
            rejected += 1
            continue
        exact = expm_evolve(s, cavity, tau, p)
        worst = max(worst, float(np.max(np.abs(analytic.amplitudes - exact.amplitudes))))
        compared += 1
    return ValidationReport(trials, compared, rejected, worst)
