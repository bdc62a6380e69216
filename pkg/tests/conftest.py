from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from evident.belief import Frame, MassFunction, validate

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance: list[tuple[str, str, str]] = []


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def frame_of(n: int) -> Frame:
    return Frame(tuple(f"H{i + 1}" for i in range(n)))


def random_mass(rng: np.random.Generator, n: int, max_focal: int = 5) -> MassFunction:
    """Random bba on an n-hypothesis frame; Θ is focal about half the time."""
    frame = frame_of(n)
    k = int(rng.integers(1, min(max_focal, frame.theta) + 1))
    subsets = rng.choice(np.arange(1, frame.theta + 1), size=k, replace=False)
    if rng.random() < 0.5 and frame.theta not in subsets:
        subsets[0] = frame.theta
    weights = rng.random(k) + 1e-3
    weights /= weights.sum()
    return validate({int(s): float(w) for s, w in zip(subsets, weights)}, frame)


@st.composite
def masses(draw, n: int | None = None, max_focal: int = 5) -> MassFunction:
    n = draw(st.integers(1, 4)) if n is None else n
    frame = frame_of(n)
    subsets = draw(
        st.lists(st.integers(1, frame.theta), min_size=1, max_size=min(max_focal, frame.theta), unique=True)
    )
    weights = draw(st.lists(st.floats(1e-3, 1.0), min_size=len(subsets), max_size=len(subsets)))
    total = sum(weights)
    return validate({s: w / total for s, w in zip(subsets, weights)}, frame)


def assert_mass_close(a: MassFunction, b: MassFunction, tol: float) -> None:
    assert a.frame == b.frame
    for subset in set(a.focal_elements()) | set(b.focal_elements()):
        assert abs(a.mass(subset) - b.mass(subset)) <= tol, (subset, a.render(), b.render())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and (rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed")):
        _acceptance.append((marker.args[0], marker.args[1], "PASS" if rep.passed else "FAIL"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(_acceptance):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
