import pathlib
import sys

import numpy as np
import pytest

SRC = pathlib.Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from equilag import SurfaceParams, derive_constants  # noqa: E402


@pytest.fixture(scope="session")
def bench_nonreal():
    """a1 = 2, psi = e^{i pi/4}: non-real cubic form at lambda = 1."""
    return derive_constants(SurfaceParams(2.0, complex(np.exp(1j * np.pi / 4))))


@pytest.fixture(scope="session")
def bench_real():
    """a1 = 1, psi = 1/sqrt(3): the torus benchmark (real cubic form)."""
    return derive_constants(SurfaceParams(1.0, 1.0 / np.sqrt(3.0)))


@pytest.fixture(scope="session")
def bench_sweep():
    """a1 = 2, psi = 1: real cubic form with irrational eigenvalue ratio."""
    return derive_constants(SurfaceParams(2.0, 1.0))
