import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noonqed.dynamics import evolve_cavity
from noonqed.fockspace import AtomLevel, CavityLabel, JointState, Params, make_basis_state, superposition_atom
from noonqed.observables import (
    InversionSeries,
    NoonTarget,
    atomic_inversion,
    infer_noon_n,
    inversion_trace,
    noon_fidelity,
    photon_distribution,
)
from noonqed.oracle import random_state

E, G = AtomLevel.EXCITED, AtomLevel.GROUND
A, B = CavityLabel.A, CavityLabel.B


def noon_state(n, sign, cutoff=20, atom=G):
    amps = np.zeros((2, cutoff + 1, cutoff + 1), dtype=complex)
    amps[atom.value] = NoonTarget(n, sign).field(cutoff)
    return JointState(amps)


def test_atomic_inversion():
    assert atomic_inversion(make_basis_state(E, 2, 2)) == 1
    assert atomic_inversion(make_basis_state(G, 4, 0)) == -1
    assert atomic_inversion(superposition_atom(2, 2)) == pytest.approx(0, abs=1e-15)


def test_inversion_closed_form_resonant():
    series = inversion_trace(E, 2, A, Params(), 4.0, 801)
    assert series.w[0] == 1
    assert np.max(np.abs(series.w - np.cos(2 * math.sqrt(12) * series.taus))) < 1e-10


def test_inversion_closed_form_detuned():
    # W = 1 - 2 * 12 sin^2(delta tau) / delta^2 with delta^2 = 0.375^2 + 12
    p = Params(delta=-0.75)
    series = inversion_trace(E, 2, A, p, 4.0, 801)
    d = math.sqrt(0.375**2 + 12)
    assert np.max(np.abs(series.w - (1 - 24 * np.sin(d * series.taus) ** 2 / d**2))) < 1e-10
    assert series.w.min() >= 1 - 24 / 12.140625 - 1e-12


def test_inversion_from_ground_starts_at_minus_one():
    series = inversion_trace(G, 2, B, Params(chi=0.5), 3.0, 50)
    assert series.w[0] == -1
    assert np.all(np.abs(series.w) <= 1)


def test_inversion_series_validation():
    with pytest.raises(ValueError):
        InversionSeries(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        inversion_trace(E, 2, A, Params(), 4.0, 1)


def test_photon_distribution():
    d = photon_distribution(make_basis_state(E, 2, 2), A)
    assert d[2] == 1 and d.sum() == 1
    d = photon_distribution(noon_state(4, 1), A)
    assert d[0] == pytest.approx(0.5) and d[4] == pytest.approx(0.5)
    out = evolve_cavity(make_basis_state(E, 0, 0), A, math.pi / (2 * math.sqrt(2)), Params())
    assert photon_distribution(out, A)[2] == pytest.approx(1, abs=1e-12)


def test_noon_fidelity_basic():
    assert noon_fidelity(noon_state(4, 1), NoonTarget(4, 1)) == pytest.approx(1)
    assert noon_fidelity(noon_state(4, -1), NoonTarget(4, 1)) == pytest.approx(0, abs=1e-15)
    shifted = JointState(np.exp(0.8j) * noon_state(4, 1).amplitudes)
    assert noon_fidelity(shifted, NoonTarget(4, 1)) == pytest.approx(1)


def test_noon_target_validation():
    with pytest.raises(ValueError):
        NoonTarget(0)
    with pytest.raises(ValueError):
        NoonTarget(4, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_opposite_sign_fidelities_bounded(seed, n):
    s = random_state(np.random.default_rng(seed), 6, 6)
    t = NoonTarget(n, 1)
    assert noon_fidelity(s, t) + noon_fidelity(s, t.flipped()) <= 1 + 1e-10


def test_infer_noon_n():
    assert infer_noon_n(noon_state(4, -1)) == 4
    assert infer_noon_n(make_basis_state(G, 2, 2)) is None
    assert infer_noon_n(make_basis_state(G, 0, 0)) is None
