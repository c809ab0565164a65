"""
Pytest fixtures for tests
"""
import pytest
import os
import sys

import numpy as np

# Add the parent directory to the path so we can import the package
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

DATA_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'data'))


@pytest.fixture
def mock_env_vars(monkeypatch):
    """Fixture to set up environment variables for tests"""
    monkeypatch.setenv("BICRATES_LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("BICRATES_GRID", "41")

    return {
        "BICRATES_LOG_LEVEL": "DEBUG",
        "BICRATES_GRID": "41"
    }


@pytest.fixture
def data_dir():
    """Directory holding the sample channel and input files."""
    return DATA_DIR


@pytest.fixture
def bsc_channel():
    """Binary channel: BSC(0.1) to receiver 1, X1 xor X2 through BSC(0.2) to receiver 2, BSC(0.05) to receiver 3."""
    from bicrates.dmbic.channel import DmBicChannel

    p2 = np.zeros((2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            s = x1 ^ x2
            p2[s, x1, x2] = 0.8
            p2[1 - s, x1, x2] = 0.2
    return DmBicChannel(p1=np.array([[0.9, 0.1], [0.1, 0.9]]), p2=p2,
                        p3=np.array([[0.95, 0.05], [0.05, 0.95]]))


@pytest.fixture
def simple_input():
    """Binary simple law with X1 and X2 noisy copies of uniform U1 and U2."""
    from bicrates.dmbic.channel import SimpleInput

    return SimpleInput(pU1=np.array([0.5, 0.5]), pX1=np.array([[0.9, 0.1], [0.1, 0.9]]),
                       pU2=np.array([0.5, 0.5]), pX2=np.array([[0.8, 0.2], [0.2, 0.8]]))


@pytest.fixture
def gauss_fig3():
    """Regime-A parameter set P1=6, P2=3, a=4, b=1."""
    from bicrates.gaussian.bounds import GbicParams

    return GbicParams(P1=6, P2=3, a=4, b=1)


@pytest.fixture
def gauss_fig5():
    """Regime-C parameter set P1=10, P2=8, a=0.4, b=0.6."""
    from bicrates.gaussian.bounds import GbicParams

    return GbicParams(P1=10, P2=8, a=0.4, b=0.6)


@pytest.fixture
def random_polytope():
    """Seeded bounded systems over (R1, R2, R3) with integer rows; the origin is always feasible."""
    from bicrates.polyhedra import LE, LinSystem

    names = ('R1', 'R2', 'R3')

    def build(seed, rows=4):
        rng = np.random.default_rng(seed)
        spec = [({v: 1 for v in names}, LE, 10, 'cap')]
        while len(spec) < rows + 1:
            coeffs = [int(c) for c in rng.integers(-3, 4, size=3)]
            if not any(coeffs):
                continue
            spec.append((dict(zip(names, coeffs)), LE, int(rng.integers(1, 8)), f"row{len(spec)}"))
        return LinSystem.build(names, spec, nonneg=names, name=f"random-{seed}")

    return build
