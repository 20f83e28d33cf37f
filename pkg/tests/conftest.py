"""Shared fixtures: landmark parameter sets and the expensive solver runs."""

import numpy as np
import pytest

from hypersorb import Params, solve_spectral, step_ic, run_fdm
from hypersorb.fdm import Grid, default_lambda


@pytest.fixture(scope="session")
def secular_landmark_params():
    """Root-structure landmark set: large A, small B (two real-branch modes)."""
    return Params(A=0.5, B=1e-3, L=0.1, N0=3.0)


@pytest.fixture(scope="session")
def oscillatory_params():
    """Strongly oscillatory set: every mode above the critical point."""
    return Params(A=1e-3, B=0.1, L=1.0, N0=3.0)


@pytest.fixture(scope="session")
def wavefront_params():
    """Wave-timing landmark set used for the probe and first-maximum checks."""
    return Params(A=0.01, B=0.1, L=1.0, N0=3.0)


@pytest.fixture(scope="session")
def fdm_wavefront(wavefront_params):
    grid = Grid.from_lambda(200, 2.0, default_lambda(wavefront_params.B))
    return run_fdm(wavefront_params, step_ic(), grid, probes=[0.0, 0.25])


@pytest.fixture(scope="session")
def fdm_oscillatory(oscillatory_params):
    grid = Grid.from_lambda(200, 2.0, default_lambda(oscillatory_params.B))
    return run_fdm(oscillatory_params, step_ic(), grid, probes=[0.0, 0.25])


@pytest.fixture(scope="session")
def fdm_small_relaxation():
    p = Params(A=0.01, B=1e-3, L=1.0, N0=3.0)
    grid = Grid.from_lambda(200, 2.0, default_lambda(p.B))
    return run_fdm(p, step_ic(), grid, probes=[0.0])


@pytest.fixture(scope="session")
def spectral_oscillatory_50(oscillatory_params):
    return solve_spectral(oscillatory_params, step_ic(), 50)


@pytest.fixture(scope="session")
def spectral_oscillatory_100(oscillatory_params):
    return solve_spectral(oscillatory_params, step_ic(), 100)


@pytest.fixture(scope="session")
def spectral_wavefront_50(wavefront_params):
    return solve_spectral(wavefront_params, step_ic(), 50)


def first_local_max(t, values, floor):
    """Time of the first interior local maximum above floor, or None."""
    v = np.asarray(values)
    for i in range(1, v.size - 1):
        if v[i] > v[i - 1] and v[i] >= v[i + 1] and v[i] > floor:
            return float(t[i])
    return None


def interior_maxima(t, values, prominence):
    """Interior maxima that later drop by more than prominence."""
    v = np.asarray(values)
    hits = []
    for i in range(1, v.size - 1):
        if v[i] > v[i - 1] and v[i] >= v[i + 1] and v[i] - v[i:].min() > prominence:
            hits.append(float(t[i]))
    return hits
