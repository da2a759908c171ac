"""Closed-form two-photon propagator and classical-field atomic rotations.

Each cavity couples the doublet {|e, n>, |g, n+2>} with strength
sqrt((n+1)(n+2)) (lambda = 1). Within a doublet the evolution is

    U = exp(i chi tau / 2) [[C_n,                 -i sqrt((n+1)(n+2)) S_n],
                            [-i sqrt((n+1)(n+2)) S_n,  conj(C_n)        ]]

with C_n = cos(delta_n tau) - i (Gamma_n / delta_n) sin(delta_n tau),
S_n = sin(delta_n tau) / delta_n, Gamma_n = (Delta + chi (n+1)) / 2 and
delta_n = sqrt(Gamma_n**2 + (n+1)(n+2)).

The ground row uses the complex conjugate of the shifted coefficient; that
is what keeps the block unitary once Gamma is nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fockspace import CavityLabel, JointState, Params, boundary_leakage

LEAKAGE_TOL = 1e-8


class LeakageError(ValueError):
    """State has too much weight near the truncation edge to be propagated."""


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Matrix entries of the propagator at one Fock index.

    ``c_upper`` multiplies the excited amplitude at n, ``c_lower`` the ground
    amplitude at n, ``s_val`` is S_n and ``global_phase`` is exp(i chi tau/2).
    """

    c_upper: complex
    c_lower: complex
    s_val: float
    global_phase: complex


def gamma_n(n, p: Params):
    """(Delta + chi (n+1)) / 2. Accepts scalars or integer arrays."""
    out = (p.delta + p.chi * (np.asarray(n, dtype=float) + 1)) / 2.0
    return float(out) if np.ndim(n) == 0 else out


def delta_n(n, p: Params):
    """Generalized Rabi rate sqrt(Gamma_n**2 + (n+1)(n+2))."""
    n_arr = np.asarray(n, dtype=float)
    radicand = gamma_n(n_arr, p) ** 2 + (n_arr + 1) * (n_arr + 2)
    if np.any(radicand < 0):
        raise ArithmeticError(f"negative radicand in delta_n for n={n}")
    out = np.sqrt(radicand)
    return float(out) if np.ndim(n) == 0 else out


def _c_and_s(gam, dlt, tau: float):
    # sin(x)/x via sinc so that delta = 0 (only reachable for n in {-2, -1})
    # falls back to its limits without a 0/0
    s = tau * np.sinc(dlt * tau / np.pi)
    c = np.cos(dlt * tau) - 1j * gam * s
    return c, s


def coefficients(n: int, tau: float, p: Params) -> PropagatorCoefficients:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    c_up, s = _c_and_s(gamma_n(n, p), delta_n(n, p), tau)
    c_shift, _ = _c_and_s(gamma_n(n - 2, p), delta_n(n - 2, p), tau)
    return PropagatorCoefficients(
        c_upper=complex(c_up),
        c_lower=complex(np.conj(c_shift)),
        s_val=float(s),
        global_phase=complex(np.exp(0.5j * p.chi * tau)),
    )


def check_leakage(s: JointState, cavity: CavityLabel):
    leak = boundary_leakage(s, 2)
    if leak > LEAKAGE_TOL:
        raise LeakageError(
            f"cavity {cavity.value}: boundary mass {leak:.3e} within 2 of cutoff "
            f"{s.cutoff} exceeds {LEAKAGE_TOL:g}; raise the cutoff"
        )


def evolve_cavity(s: JointState, cavity: CavityLabel, tau: float, p: Params) -> JointState:
    """Propagate the atom through one cavity for scaled time ``tau``.

    The other mode is a spectator. Excited amplitudes at the top two Fock
    indices have no partner inside the basis; they acquire the diagonal
    phase only, so the map is exactly unitary on the truncated space.

    Raises:
        LeakageError: if more than 1e-8 of probability lies within two
            quanta of the cutoff in either mode.
    """
    if not math.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau}")
    check_leakage(s, cavity)

    x = np.moveaxis(s.amplitudes, cavity.axis, -1)
    e, g = x[0], x[1]
    m = x.shape[-1]
    n = np.arange(m - 2)
    k = np.sqrt((n + 1.0) * (n + 2.0))
    c, sv = _c_and_s(gamma_n(n, p), delta_n(n, p), tau)

    new_e = np.empty_like(e)
    new_g = np.empty_like(g)
    new_e[..., : m - 2] = c * e[..., : m - 2] - 1j * sv * k * g[..., 2:]
    new_g[..., 2:] = -1j * k * sv * e[..., : m - 2] + np.conj(c) * g[..., 2:]

    low = np.array([-2, -1])
    c_low, _ = _c_and_s(gamma_n(low, p), delta_n(low, p), tau)
    new_g[..., :2] = np.conj(c_low) * g[..., :2]
    top = np.arange(m - 2, m)
    new_e[..., m - 2 :] = np.exp(-1j * gamma_n(top, p) * tau) * e[..., m - 2 :]

    out = np.stack([new_e, new_g]) * np.exp(0.5j * p.chi * tau)
    return JointState(np.moveaxis(out, -1, cavity.axis))


def rotation_matrix(theta: float) -> np.ndarray:
    """Real atomic rotation on (e, g); theta = pi/2 is the NOON read-out pulse."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]])


def rotate_atom(s: JointState, theta: float) -> JointState:
    """new_e = cos(theta/2) e - sin(theta/2) g, new_g = sin(theta/2) e + cos(theta/2) g."""
    return JointState(np.tensordot(rotation_matrix(theta), s.amplitudes, axes=1))
