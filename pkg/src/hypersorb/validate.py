"""Independent cross-checks: parabolic reference solver and series audits.

The parabolic solver integrates the classical diffusion limit (B = 0) with
the same wall kinetics.  In that limit global conservation collapses to a
local flux condition at the wall, so the solver supports both closures and
their agreement is itself a testable property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidInput
from .fdm import Grid, _probe_weights, apply_surface, trapezoid_interior
from .params import InitialCondition, Params, equilibrium, sample_initial
from .series import TimeSeries, thin_indices


def run_parabolic(
    p: Params,
    ic: InitialCondition,
    grid: Grid,
    boundary: str = "local",
    probes=(),
    max_rows: int = 401,
) -> TimeSeries:
    """Explicit diffusive reference solution (B treated as zero).

    boundary="local" closes the wall with the flux condition
    -dN/dz = dsigma/dt plus backward-Euler kinetics; boundary="nonlocal"
    reuses the conservation-based closure of the hyperbolic engine.  For
    step initial data sigma(t) is monotonic non-decreasing.
    """
    if boundary not in ("local", "nonlocal"):
        raise InvalidInput(f"unknown boundary closure {boundary!r}")
    h, k = grid.h, grid.k
    r = k / (h * h)
    if r > 0.5 + 1e-12:
        raise ConfigError(f"parabolic stability needs k <= h^2/2; got r = {r:.4g}")
    zgrid = grid.zgrid()
    row = sample_initial(ic, p, zgrid)
    n_levels = grid.n_t + 1
    stored = thin_indices(n_levels, max_rows)
    stored_set = set(stored.tolist())
    sigma = np.empty(n_levels)
    wall = np.empty(n_levels)
    cons = np.empty(n_levels)
    stencils = _probe_weights(probes, zgrid)
    probe_data = {z: np.empty(n_levels) for z, _, _ in stencils}
    rows = np.empty((stored.size, zgrid.size))

    def record(j, row, s):
        sigma[j] = s
        wall[j] = row[-1]
        mass = trapezoid_interior(row, h) + 0.5 * h * row[-1]
        cons[j] = abs(2.0 * mass + 2.0 * s - p.N0)
        for z, i, frac in stencils:
            probe_data[z][j] = (1.0 - frac) * row[i] + frac * row[i + 1]
        if j in stored_set:
            rows[np.searchsorted(stored, j)] = row

    if boundary == "local":
        s = 0.0
    else:
        s = 0.5 * p.N0 - (trapezoid_interior(row, h) + 0.5 * h * row[-1])
    record(0, row, s)
    for j in range(1, n_levels):
        new = row.copy()
        new[1:-1] = row[1:-1] + r * (row[2:] - 2.0 * row[1:-1] + row[:-2])
        new[0] = new[1]
        if boundary == "local":
            # flux condition dsigma/dt = -dN/dz at the wall with a second-order
            # one-sided gradient, combined with backward-Euler kinetics and
            # solved for the wall value
            wall_val = ((p.A + k) * (4.0 * new[-2] - new[-3]) + 2.0 * h * s) / (
                2.0 * h * p.L + 3.0 * (p.A + k)
            )
            new[-1] = wall_val
            s = (p.A * s + k * p.L * wall_val) / (p.A + k)
        else:
            _, s = apply_surface(new, s, grid, p)
        record(j, new, s)
        row = new
    t = grid.tgrid()
    return TimeSeries(
        t=t,
        sigma=sigma,
        surface=wall,
        probes=probe_data,
        rows=rows,
        row_times=t[stored],
        row_z=zgrid,
        conservation=cons,
        params=p,
        meta={"engine": "parabolic", "boundary": boundary, "grid": grid.__dict__.copy()},
    )


@dataclass(eq=False)
class ComparisonReport:
    """Deviations between two engines' series on a common time grid."""

    engine_a: str
    engine_b: str
    t_min: float
    t_max: float
    n_points: int
    max_sigma_dev: float
    rms_sigma_dev: float
    probe_devs: dict[float, float]
    max_probe_dev: float
    conservation_a: float
    conservation_b: float
    sigma_tol: float
    passed: bool
    params: Params | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "engine_a": self.engine_a,
            "engine_b": self.engine_b,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_points": self.n_points,
            "max_sigma_dev": self.max_sigma_dev,
            "rms_sigma_dev": self.rms_sigma_dev,
            "probe_devs": {f"{z:g}": v for z, v in sorted(self.probe_devs.items())},
            "max_probe_dev": self.max_probe_dev,
            "conservation_a": self.conservation_a,
            "conservation_b": self.conservation_b,
            "sigma_tol": self.sigma_tol,
            "passed": self.passed,
            "params": None
            if self.params is None
            else {"A": self.params.A, "B": self.params.B, "L": self.params.L, "N0": self.params.N0},
            "meta": self.meta,
        }

    def summary(self) -> str:
        lines = [
            f"engines: {self.engine_a} vs {self.engine_b}",
            f"time window: [{self.t_min:g}, {self.t_max:g}] ({self.n_points} points)",
            f"max |d sigma| = {self.max_sigma_dev:.6g}  (tolerance {self.sigma_tol:.6g})",
            f"rms |d sigma| = {self.rms_sigma_dev:.6g}",
        ]
        for z, v in sorted(self.probe_devs.items()):
            lines.append(f"max |d N| at z*={z:g}: {v:.6g}")
        lines.append(f"conservation residual: {self.conservation_a:.3g} / {self.conservation_b:.3g}")
        lines.append("RESULT: PASS" if self.passed else "RESULT: FAIL")
        return "\n".join(lines)


def compare_engines(
    series_a: TimeSeries,
    series_b: TimeSeries,
    tgrid,
    sigma_tol: float | None = None,
) -> ComparisonReport:
    """Interpolate both series onto tgrid and report their deviations.

    sigma_tol defaults to 5% of the equilibrium surface density of the
    first series' parameter set.  The report is symmetric in its inputs.
    """
    tgrid = np.asarray(tgrid, dtype=float)
    lo = max(series_a.t[0], series_b.t[0])
    hi = min(series_a.t[-1], series_b.t[-1])
    if lo > hi or np.any(tgrid < lo - 1e-12) or np.any(tgrid > hi + 1e-12):
        raise InvalidInput(
            f"comparison grid [{tgrid[0]:g}, {tgrid[-1]:g}] not covered by both series"
            f" (overlap [{lo:g}, {hi:g}])"
        )
    p = series_a.params or series_b.params
    if sigma_tol is None:
        if p is None:
            raise InvalidInput("sigma_tol required when the series carry no parameters")
        _, sigma_eq = equilibrium(p)
        sigma_tol = 0.05 * sigma_eq
    sa = np.interp(tgrid, series_a.t, series_a.sigma)
    sb = np.interp(tgrid, series_b.t, series_b.sigma)
    dev = np.abs(sa - sb)
    probe_devs = {}
    for z in sorted(set(series_a.probes) & set(series_b.probes)):
        pa = np.interp(tgrid, series_a.t, series_a.probes[z])
        pb = np.interp(tgrid, series_b.t, series_b.probes[z])
        probe_devs[z] = float(np.max(np.abs(pa - pb)))
    max_sigma = float(np.max(dev))
    return ComparisonReport(
        engine_a=series_a.engine,
        engine_b=series_b.engine,
        t_min=float(tgrid[0]),
        t_max=float(tgrid[-1]),
        n_points=int(tgrid.size),
        max_sigma_dev=max_sigma,
        rms_sigma_dev=float(math.sqrt(np.mean(dev**2))),
        probe_devs=probe_devs,
        max_probe_dev=float(max(probe_devs.values())) if probe_devs else 0.0,
        conservation_a=_max_conservation(series_a),
        conservation_b=_max_conservation(series_b),
        sigma_tol=float(sigma_tol),
        passed=max_sigma <= sigma_tol,
        params=p,
        meta={"engine_a_meta": _jsonable(series_a.meta), "engine_b_meta": _jsonable(series_b.meta)},
    )


def _max_conservation(series: TimeSeries) -> float:
    if series.conservation is None or len(series.conservation) == 0:
        return float("nan")
    return float(np.max(series.conservation))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def audit_kinetics(series: TimeSeries, p: Params) -> np.ndarray:
    """Residual of the wall kinetics A dsigma/dt = L N_wall - sigma per level.

    Uses the same backward difference as the engines' wall closure, so the
    finite-difference series return machine-level residuals; truncated
    modal series return small residuals that shrink with the mode count.
    """
    dt = np.diff(series.t)
    dsigma = np.diff(series.sigma)
    rhs = p.L * series.surface[1:] - series.sigma[1:]
    return p.A * dsigma / dt - rhs


def audit_conservation(series: TimeSeries, p: Params) -> np.ndarray:
    """Residual |integral(N) + 2 sigma - N0| recomputed from the stored rows."""
    if series.rows is None or series.row_z is None:
        raise InvalidInput("series carries no spatial rows to audit")
    mass = 2.0 * np.trapezoid(series.rows, series.row_z, axis=1)
    sigma = np.interp(series.row_times, series.t, series.sigma)
    return np.abs(mass + 2.0 * sigma - p.N0)
