"""Closed-form modal solution built on the non-orthogonal cosine modes.

The admissible spatial modes cos(alpha z*) are not mutually orthogonal on
[-1/2, 1/2], so the initial condition is projected through an explicitly
orthogonalized companion basis.  Each mode then evolves with its two
temporal exponents and amplitudes fixed by the zero-initial-velocity
condition, giving bulk and surface densities evaluable at any (z*, t*).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigen import DEFAULT_MODE_COUNT, Mode, find_eigenvalues
from .errors import DegenerateBasisError, DegenerateModeError, InvalidInput
from .params import InitialCondition, Params, cosine_moment, equilibrium, sample_initial
from .series import TimeSeries, thin_indices

# Gram matrices with a condition estimate beyond this are rejected
MAX_GRAM_CONDITION = 1e12


def gram_entry(alpha_a: float, alpha_b: float) -> float:
    """Inner product of cos(alpha_a z*) and cos(alpha_b z*) over [-1/2, 1/2]."""
    if not (alpha_a > 0 and alpha_b > 0):
        raise InvalidInput("mode frequencies must be strictly positive")
    if alpha_a == alpha_b:
        return 0.5 + np.sin(alpha_a) / (2.0 * alpha_a)
    diff = alpha_a - alpha_b
    total = alpha_a + alpha_b
    return float(np.sin(0.5 * diff) / diff + np.sin(0.5 * total) / total)


def gram_matrix(alphas) -> np.ndarray:
    """Pairwise inner products of the cosine modes (symmetric, nonzero off-diagonal)."""
    a = np.asarray(alphas, dtype=float)
    diff = a[:, None] - a[None, :]
    total = a[:, None] + a[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.sin(0.5 * diff) / diff + np.sin(0.5 * total) / total
    diag = 0.5 + np.sin(a) / (2.0 * a)
    np.fill_diagonal(off, diag)
    return off


def phi_integral(alphas) -> np.ndarray:
    """Integral of cos(alpha z*) over the full slab: 2 sin(alpha/2) / alpha."""
    a = np.asarray(alphas, dtype=float)
    return 2.0 * np.sin(0.5 * a) / a


@dataclass(frozen=True, eq=False)
class OrthoBasis:
    """Triangular coefficient table expressing the orthogonal companions.

    Column q of coeffs holds the expansion of the q-th orthogonal function
    in the original cosine modes (entries beyond row q vanish); norms holds
    its squared norm under the Gram inner product.
    """

    alphas: np.ndarray
    coeffs: np.ndarray
    norms: np.ndarray
    gram: np.ndarray


def _mode_alphas(modes) -> np.ndarray:
    if len(modes) and isinstance(modes[0], Mode):
        return np.array([m.alpha for m in modes], dtype=float)
    return np.asarray(modes, dtype=float)


def orthogonalize(modes) -> OrthoBasis:
    """Sequential projection (modified Gram-Schmidt) in coefficient space.

    Works entirely through exact Gram entries, so no quadrature enters.  The
    result spans the same flags as the classical cofactor-of-Gram
    construction (see minor_formula_coefficients) but stays numerically
    stable for large mode counts.
    """
    alphas = _mode_alphas(modes)
    n = alphas.size
    gram = gram_matrix(alphas)
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > MAX_GRAM_CONDITION:
        raise DegenerateBasisError(
            f"Gram matrix condition {cond:.3g} exceeds {MAX_GRAM_CONDITION:.0e};"
            " reduce the mode count"
        )
    coeffs = np.zeros((n, n))
    norms = np.zeros(n)
    gram_cols = np.zeros((n, n))  # gram @ coeffs[:, j], cached per finalized column
    for q in range(n):
        v = np.zeros(n)
        v[q] = 1.0
        for j in range(q):
            v -= (v @ gram_cols[:, j]) / norms[j] * coeffs[:, j]
        gv = gram @ v
        norms[q] = v @ gv
        if norms[q] <= 0.0:
            raise DegenerateBasisError(f"non-positive norm for orthogonal function {q}")
        coeffs[:, q] = v
        gram_cols[:, q] = gv
    return OrthoBasis(alphas=alphas, coeffs=coeffs, norms=norms, gram=gram)


def orthogonality_residual(basis: OrthoBasis) -> float:
    """Largest normalized off-diagonal inner product of the companion basis."""
    cross = basis.coeffs.T @ basis.gram @ basis.coeffs
    scale = np.sqrt(np.outer(basis.norms, basis.norms))
    off = np.abs(cross) / scale
    np.fill_diagonal(off, 0.0)
    return float(np.max(off))


def minor_formula_coefficients(gram: np.ndarray, q: int) -> np.ndarray:
    """Cofactor-of-Gram construction of the q-th orthogonal function.

    Classical small-n reference: coefficient a of the q-th function is the
    signed cofactor of Gram entry (a, q) in the leading (q+1) x (q+1)
    determinant, normalized by the diagonal cofactor.  Only used as a
    cross-check; factorially expensive beyond a handful of modes.
    """
    sub = gram[: q + 1, : q + 1]
    cof = np.zeros(q + 1)
    for a in range(q + 1):
        minor = np.delete(np.delete(sub, a, axis=0), q, axis=1)
        det = np.linalg.det(minor) if minor.size else 1.0
        cof[a] = (-1.0) ** (a + q) * det
    return cof / cof[q]


def project_initial(ic: InitialCondition, basis: OrthoBasis, p: Params) -> np.ndarray:
    """Expansion coefficients of N(z*, 0) - N_eq in the cosine modes.

    The departure from equilibrium is first resolved along the orthogonal
    companions (closed-form integrals, no quadrature), then mapped back to
    the cosine modes through the triangular coefficient table.
    """
    n_eq, _ = equilibrium(p)
    moments = np.array([cosine_moment(ic, p, a) for a in basis.alphas])
    b = moments - n_eq * phi_integral(basis.alphas)
    r = (basis.coeffs.T @ b) / basis.norms
    return basis.coeffs @ r


def amplitudes(C: np.ndarray, modes) -> tuple[np.ndarray, np.ndarray]:
    """Split each expansion coefficient over the two temporal exponents.

    Zero initial velocity forces mu1 S1 + mu2 S2 = 0 per mode, hence
    S1 = C / (1 - mu1/mu2) and S2 = C - S1.  Modes sitting exactly at the
    critical point (mu1 = mu2) have no such splitting and are refused.
    """
    mu1 = np.array([m.exponents.mu1 for m in modes], dtype=complex)
    mu2 = np.array([m.exponents.mu2 for m in modes], dtype=complex)
    degenerate = np.abs(mu1 - mu2) <= 1e-14 * np.abs(mu1)
    if np.any(degenerate):
        raise DegenerateModeError(
            f"modes {np.nonzero(degenerate)[0].tolist()} sit at the critical point;"
            " both exponents coincide"
        )
    ratio = mu1 / mu2
    s1 = np.asarray(C, dtype=complex) / (1.0 - ratio)
    s2 = -ratio * s1
    return s1, s2


@dataclass(eq=False)
class SpectralSolution:
    """Assembled modal solution, evaluable at any (z*, t*)."""

    params: Params
    n_eq: float
    sigma_eq: float
    modes: list[Mode]
    basis: OrthoBasis
    C: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def alphas(self) -> np.ndarray:
        return self.basis.alphas

    def _mu(self) -> tuple[np.ndarray, np.ndarray]:
        mu1 = np.array([m.exponents.mu1 for m in self.modes], dtype=complex)
        mu2 = np.array([m.exponents.mu2 for m in self.modes], dtype=complex)
        return mu1, mu2


def _time_weights(sol: SpectralSolution, t, rate: bool = False) -> np.ndarray:
    """Complex modal weights S1 e^{mu1 t} + S2 e^{mu2 t} (or their t-derivative).

    Shape (n_t, n_modes) for array t, (n_modes,) for scalar t.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidInput("t* must be non-negative")
    mu1, mu2 = sol._mu()
    tt = t[..., None]
    w1 = sol.S1 * np.exp(mu1 * tt)
    w2 = sol.S2 * np.exp(mu2 * tt)
    if rate:
        return mu1 * w1 + mu2 * w2
    return w1 + w2


def eval_density(sol: SpectralSolution, zstar, tstar):
    """Bulk density N(z*, t*); broadcasts over array z* and t*."""
    z = np.asarray(zstar, dtype=float)
    if np.any(np.abs(z) > 0.5 + 1e-12):
        raise InvalidInput("z* must lie within [-1/2, 1/2]")
    weights = _time_weights(sol, tstar)
    cosines = np.cos(np.multiply.outer(z, sol.alphas))
    if weights.ndim > 1:
        value = sol.n_eq + np.real(weights @ cosines.T)
    else:
        value = sol.n_eq + np.real(cosines @ weights)
    if np.isscalar(zstar) and np.isscalar(tstar):
        return float(value)
    return value


def density_rate(sol: SpectralSolution, zstar, tstar):
    """Time derivative of the bulk density; zero at t* = 0 by construction."""
    z = np.asarray(zstar, dtype=float)
    weights = _time_weights(sol, tstar, rate=True)
    cosines = np.cos(np.multiply.outer(z, sol.alphas))
    if weights.ndim > 1:
        return np.real(weights @ cosines.T)
    return np.real(cosines @ weights)


def eval_sigma(sol: SpectralSolution, tstar):
    """Surface density sigma(t*) from the modewise conservation balance."""
    weights = _time_weights(sol, tstar)
    factors = np.sin(0.5 * sol.alphas) / sol.alphas
    value = sol.sigma_eq - np.real(weights @ factors)
    if np.isscalar(tstar):
        return float(value)
    return value


def sigma_rate(sol: SpectralSolution, tstar):
    """Time derivative of sigma(t*); vanishes identically at t* = 0."""
    weights = _time_weights(sol, tstar, rate=True)
    factors = np.sin(0.5 * sol.alphas) / sol.alphas
    value = -np.real(weights @ factors)
    if np.isscalar(tstar):
        return float(value)
    return value


def imag_residue(sol: SpectralSolution, zgrid, tgrid) -> float:
    """Largest imaginary leak of the complex evaluation over a probe grid."""
    z = np.asarray(zgrid, dtype=float)
    weights = _time_weights(sol, np.asarray(tgrid, dtype=float))
    cosines = np.cos(np.multiply.outer(z, sol.alphas))
    bulk = np.max(np.abs(np.imag(weights @ cosines.T)))
    factors = np.sin(0.5 * sol.alphas) / sol.alphas
    surf = np.max(np.abs(np.imag(weights @ factors)))
    return float(max(bulk, surf))


def solve_spectral(
    p: Params, ic: InitialCondition, mode_count: int = DEFAULT_MODE_COUNT
) -> SpectralSolution:
    """Assemble the modal solution: eigenvalues, projection, amplitudes.

    Truncation diagnostics (reconstruction error of the initial profile and
    the conservation residual of the evaluated fields at t* = 0) are stored
    on the returned solution.
    """
    if not p.B > 0:
        raise InvalidInput("the modal engine requires B > 0; use the parabolic solver")
    modes = find_eigenvalues(p, mode_count)
    basis = orthogonalize(modes)
    C = project_initial(ic, basis, p)
    s1, s2 = amplitudes(C, modes)
    n_eq, sigma_eq = equilibrium(p)
    sol = SpectralSolution(
        params=p,
        n_eq=n_eq,
        sigma_eq=sigma_eq,
        modes=modes,
        basis=basis,
        C=C,
        S1=s1,
        S2=s2,
    )
    zprobe = np.linspace(-0.45, 0.45, 37)
    recon = eval_density(sol, zprobe, 0.0)
    target = sample_initial(ic, p, zprobe)
    quad_z = np.linspace(0.0, 0.5, 2001)
    mass0 = 2.0 * np.trapezoid(eval_density(sol, quad_z, 0.0), quad_z)
    sol.diagnostics = {
        "mode_count": mode_count,
        "reconstruction_max_error": float(np.max(np.abs(recon - target))),
        "reconstruction_error_at_center": float(abs(recon[18] - target[18])),
        "sigma_at_zero": float(eval_sigma(sol, 0.0)),
        "conservation_residual_t0": float(abs(mass0 + 2.0 * eval_sigma(sol, 0.0) - p.N0)),
        "orthogonality_residual": orthogonality_residual(basis),
    }
    return sol


def to_series(
    sol: SpectralSolution,
    tgrid,
    probes=(),
    row_zcount: int = 201,
    max_rows: int = 201,
) -> TimeSeries:
    """Sample the modal solution onto the common TimeSeries layout."""
    t = np.asarray(tgrid, dtype=float)
    sigma = eval_sigma(sol, t)
    surface = eval_density(sol, 0.5, t)
    probe_map = {float(z): eval_density(sol, float(z), t) for z in probes}
    row_z = np.linspace(0.0, 0.5, row_zcount)
    idx = thin_indices(t.size, max_rows)
    rows = eval_density(sol, row_z, t[idx])
    cons = np.abs(2.0 * np.trapezoid(rows, row_z, axis=1) + 2.0 * sigma[idx] - sol.params.N0)
    return TimeSeries(
        t=t,
        sigma=np.asarray(sigma),
        surface=np.asarray(surface),
        probes=probe_map,
        rows=rows,
        row_times=t[idx],
        row_z=row_z,
        conservation=cons,
        params=sol.params,
        meta={
            "engine": "spectral",
            "mode_count": len(sol.modes),
            "diagnostics": dict(sol.diagnostics),
        },
    )
