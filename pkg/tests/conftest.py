import numpy as np
import pytest

from noonqed.fockspace import JointState

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def check(name: str, ok: bool, detail: str):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def assert_states_close(s1: JointState, s2: JointState, atol: float):
    diff = np.max(np.abs(s1.amplitudes - s2.amplitudes))
    assert diff < atol, f"max amplitude difference {diff:.3e} >= {atol:g}"


def phase_aligned_distance(s1: JointState, s2: JointState) -> float:
    """Max-norm distance after removing the relative global phase."""
    ov = np.vdot(s1.amplitudes, s2.amplitudes)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.max(np.abs(s1.amplitudes * phase - s2.amplitudes)))
