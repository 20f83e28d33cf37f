"""Common time-series container produced by every engine."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import Params


@dataclass(eq=False)
class TimeSeries:
    """Surface and bulk densities sampled over a run.

    t, sigma and surface cover every time level; probes maps a z* position
    to the bulk density history there.  Full spatial rows are stored only at
    row_times (thinned to keep memory bounded) on the half-domain grid
    row_z in [0, 1/2].  conservation holds the per-level residual
    |integral(N) + 2 sigma - N0| when the engine computes one.
    """

    t: np.ndarray
    sigma: np.ndarray
    surface: np.ndarray
    probes: dict[float, np.ndarray] = field(default_factory=dict)
    rows: np.ndarray | None = None
    row_times: np.ndarray | None = None
    row_z: np.ndarray | None = None
    conservation: np.ndarray | None = None
    params: Params | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("time levels must be strictly increasing")

    @property
    def engine(self) -> str:
        return self.meta.get("engine", "unknown")


def thin_indices(n_levels: int, max_rows: int) -> np.ndarray:
    """Evenly spaced level indices including both endpoints."""
    if max_rows >= n_levels:
        return np.arange(n_levels)
    idx = np.linspace(0, n_levels - 1, max_rows).round().astype(int)
    return np.unique(idx)
