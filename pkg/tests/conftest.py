import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from qharness.recurrences.params import QHParams, below_lower_branch


def _rational(rng, low, high, denominator=8):
    return Fraction(rng.randint(low * denominator, high * denominator), denominator)


@pytest.fixture
def rng():
    """Seeded generator so every run sees the same points."""
    return random.Random(20240611)


def _admissible(rng, count):
    points = []
    while len(points) < count:
        sigma, tau, q = _rational(rng, 0, 1), _rational(rng, 0, 1), _rational(rng, -1, 1)
        if not below_lower_branch(q, sigma * tau):
            continue
        points.append(
            QHParams(sigma=sigma, tau=tau, theta=_rational(rng, -2, 2), eta=_rational(rng, -2, 2), q=q)
        )
    return points


@pytest.fixture
def admissible_points(rng):
    """Strictly admissible rational points with drift: sigma, tau in [0,1], q < 1 - 2 sqrt(sigma tau)."""
    return _admissible(rng, 12)


@pytest.fixture
def admissible_sample():
    """Factory for larger seeded samples drawn like ``admissible_points``."""

    def make(count, seed=20240611):
        return _admissible(random.Random(seed), count)

    return make


@pytest.fixture
def q_wiener():
    return QHParams(q=Fraction(1, 2))


@pytest.fixture
def poisson():
    return QHParams(theta=1, q=1)


@pytest.fixture
def oscillatory():
    """q = 0.9 with sigma tau = 0.04."""
    return QHParams(sigma=Fraction(1, 5), tau=Fraction(1, 5), q=Fraction(9, 10))


@pytest.fixture
def temp_config_file(tmp_path):
    """Create a temporary .qharness.json file for testing."""
    config_content = {
        "sigma": "1/4",
        "tau": "1/4",
        "q": "-1/2",
        "n": 12,
        "t": "4",
    }
    config_file = tmp_path / ".qharness.json"
    with open(config_file, "w") as f:
        json.dump(config_content, f)
    return config_file


@pytest.fixture
def config_cwd(monkeypatch, temp_config_file):
    """Run from a directory below the one holding the config file."""
    nested = Path(temp_config_file).parent / "nested" / "deeper"
    nested.mkdir(parents=True)
    monkeypatch.chdir(nested)
    return nested


@pytest.fixture
def empty_cwd(monkeypatch, tmp_path):
    """A working directory with no .qharness.json above it."""
    monkeypatch.setattr(Path, "cwd", lambda: tmp_path)
    monkeypatch.chdir(tmp_path)
    return tmp_path
