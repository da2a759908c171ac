import math

import numpy as np
import pytest

from conftest import assert_states_close
from noonqed.dynamics import LeakageError, evolve_cavity
from noonqed.fockspace import AtomLevel, CavityLabel, JointState, Params, make_basis_state
from noonqed.oracle import build_hamiltonian, energy, expm_evolve, random_state, validate

E, G = AtomLevel.EXCITED, AtomLevel.GROUND
A, B = CavityLabel.A, CavityLabel.B


def test_hamiltonian_matrix_elements():
    h = build_hamiltonian(10, Params(chi=0.0, delta=0.6))
    m = h.matrix
    assert m[h.index(0, 2), h.index(1, 4)] == pytest.approx(math.sqrt(12), abs=1e-14)
    assert m[h.index(0, 0), h.index(1, 1)] == 0
    # sigma_z carries a factor 1/2 so that the dense form matches the closed form
    assert m[h.index(1, 0), h.index(1, 0)] == pytest.approx(-0.3)


def test_hamiltonian_is_hermitian():
    h = build_hamiltonian(24, Params(chi=0.81, delta=-0.33))
    assert h.hermiticity_error() < 1e-14


def test_stark_term_diagonal():
    p = Params(chi=0.5, delta=0.2)
    h = build_hamiltonian(8, p)
    for n in range(9):
        assert h.matrix[h.index(0, n), h.index(0, n)].real == pytest.approx((p.delta + p.chi * n) / 2)
        assert h.matrix[h.index(1, n), h.index(1, n)].real == pytest.approx(-(p.delta + p.chi * n) / 2)


def test_zero_time_is_identity(rng):
    s = random_state(rng, 12, 8)
    assert_states_close(expm_evolve(s, A, 0.0, Params(chi=0.3, delta=0.1)), s, 1e-13)


def test_vacuum_emission_matches_closed_form():
    out = expm_evolve(make_basis_state(E, 0, 0), A, math.pi / (2 * math.sqrt(2)), Params())
    assert_states_close(out, JointState(-1j * make_basis_state(G, 2, 0).amplitudes), 1e-9)


def test_equivalence_200_random_cases(rng):
    worst = 0.0
    for _ in range(200):
        s = random_state(rng, 24, 20)
        cav = A if rng.random() < 0.5 else B
        tau = rng.uniform(0, 10)
        p = Params(chi=rng.uniform(-1, 1), delta=rng.uniform(-1, 1), cutoff=24)
        diff = np.max(np.abs(expm_evolve(s, cav, tau, p).amplitudes - evolve_cavity(s, cav, tau, p).amplitudes))
        worst = max(worst, diff)
    assert worst < 1e-9


def test_energy_conservation(rng):
    for _ in range(20):
        s = random_state(rng, 16, 10)
        p = Params(chi=rng.uniform(-1, 1), delta=rng.uniform(-1, 1), cutoff=16)
        out = expm_evolve(s, B, rng.uniform(0, 10), p)
        assert abs(energy(out, B, p) - energy(s, B, p)) < 1e-10


def test_boundary_support_is_rejected_not_compared():
    s = make_basis_state(E, 23, 0, 24)
    for propagate in (evolve_cavity, expm_evolve):
        with pytest.raises(LeakageError):
            propagate(s, A, 1.0, Params(cutoff=24))


def test_validate_harness():
    assert validate(24, 200, seed=7).passed
    rep = validate(6, 50, seed=1, support=2)
    assert rep.passed and rep.compared == 50
    boundary = validate(24, 1, seed=0, support=23)
    assert boundary.rejected == 1 and boundary.compared == 0
