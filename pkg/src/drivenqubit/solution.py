"""Closed-form Gaussian evolution of the qubit Q-distribution.

The distribution stays Gaussian at all times: a moving mean spirals onto a
limit cycle of radius |mu_ss| while the variance expands from the coherent
value 1/2 to sigma2_ss.

Frames. Means returned here live in the quadrature frame used for plotting,
where the limit cycle is an explicit circle traversed at the detuning
frequency. The master equation (module `oracle`) operates in a displaced
frame offset by alpha_d and co-rotating at the detuning; the two frames are
related by

    alpha_quadrature = (alpha_displaced - alpha_d) * exp(1j * delta_d * t).

`displaced_mean_at` gives the mean directly in that frame.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .errors import StepTooLarge
from .params import DerivedParams

__all__ = [
    "EvolutionSpec",
    "GaussianState",
    "SuperPoissonState",
    "mean_at",
    "displaced_mean_at",
    "variance_at",
    "q_value",
    "energy_at",
    "steady_state",
    "gibbs_q",
    "super_poisson",
    "fp_residual",
    "default_horizon",
]


@dataclass(frozen=True)
class EvolutionSpec:
    """Derived parameters plus the initial mean coordinate alpha0."""

    derived: DerivedParams
    alpha0: complex


@dataclass(frozen=True)
class GaussianState:
    """Snapshot of the Q-distribution: complex mean, per-quadrature variance."""

    mean: complex
    variance: float

    def __post_init__(self) -> None:
        if self.variance < 0.5 - 1e-12:
            raise ValueError(f"variance {self.variance} below the vacuum level 1/2")


@dataclass(frozen=True)
class SuperPoissonState:
    """Geometric mixture over displaced Fock states.

    weights[n] = (2 s2 - 1)^n / (2 s2)^(n+1) with s2 the steady variance;
    deficit is the tail weight lost to truncation at n_max.
    """

    mu_ss: complex
    weights: np.ndarray
    deficit: float

    def __post_init__(self) -> None:
        self.weights.setflags(write=False)


def mean_at(spec: EvolutionSpec, t):
    """Mean coordinate mu(t), quadrature frame. Vectorized over t."""
    d = spec.derived
    t = np.asarray(t, dtype=float)
    rot = np.exp(1j * d.delta_d * t)
    dec = np.exp(-d.nu_bar * d.gamma * t)
    out = d.mu_ss * rot + (spec.alpha0 - d.mu_ss) * dec
    return out if out.ndim else complex(out)


def displaced_mean_at(spec: EvolutionSpec, t):
    """Mean coordinate in the displaced frame of the master equation.

    Solves d<a>/dt = -(nu_bar gamma + i delta_d)<a> + eta from the initial
    value alpha0 + alpha_d. Equals mean_at mapped through the frame relation.
    """
    d = spec.derived
    t = np.asarray(t, dtype=float)
    m_ss = d.mu_ss + d.alpha_d
    a0 = spec.alpha0 + d.alpha_d
    out = m_ss + (a0 - m_ss) * np.exp(-(d.nu_bar * d.gamma + 1j * d.delta_d) * t)
    return out if out.ndim else complex(out)


def variance_at(spec: EvolutionSpec, t):
    """Per-quadrature variance sigma^2(t), monotone from 1/2 to sigma2_ss."""
    d = spec.derived
    t = np.asarray(t, dtype=float)
    out = (1.0 - np.exp(-2.0 * d.nu_bar * d.gamma * t)) * d.nu / (4.0 * d.nu_bar) + 0.5
    return out if out.ndim else float(out)


def q_value(spec: EvolutionSpec, alpha, t):
    """Gaussian Q density at alpha and time t. Vectorized over alpha."""
    alpha = np.asarray(alpha, dtype=complex)
    mu = mean_at(spec, t)
    s2 = variance_at(spec, t)
    out = np.exp(-np.abs(alpha - mu) ** 2 / (2.0 * s2)) / (2.0 * np.pi * s2)
    return out if out.ndim else float(out)


def energy_at(spec: EvolutionSpec, t):
    """Qubit energy hbar omega_q' (|mu|^2 + 2 sigma^2 - 1), in joules."""
    d = spec.derived
    mu = mean_at(spec, t)
    s2 = variance_at(spec, t)
    out = HBAR * d.omega_q_lin * (np.abs(mu) ** 2 + 2.0 * s2 - 1.0)
    return out if np.ndim(out) else float(out)


def steady_state(derived: DerivedParams) -> GaussianState:
    """Asymptotic Gaussian; independent of the initial coordinate."""
    return GaussianState(mean=derived.mu_ss, variance=derived.sigma2_ss)


def gibbs_q(derived: DerivedParams, alpha):
    """Thermal Q density exp(-|alpha|^2/(n_bar+1)) / (pi (n_bar+1)).

    Coincides with the steady-state Gaussian whenever the driving vanishes,
    since sigma2_ss = (n_bar + 1)/2.
    """
    alpha = np.asarray(alpha, dtype=complex)
    n1 = derived.n_bar + 1.0
    out = np.exp(-np.abs(alpha) ** 2 / n1) / (np.pi * n1)
    return out if out.ndim else float(out)


def super_poisson(derived: DerivedParams, n_max: int | None = None,
                  tail_tol: float = 1e-10) -> SuperPoissonState:
    """Steady-state mixture weights over displaced Fock levels.

    With n_max omitted, truncates at the smallest level count whose
    cumulative weight reaches 1 - tail_tol.
    """
    s2 = derived.sigma2_ss
    ratio = (2.0 * s2 - 1.0) / (2.0 * s2)  # = n_bar / (n_bar + 1), in [0, 1)
    if n_max is None:
        if ratio == 0.0:
            n_max = 0
        else:
            n_max = max(0, int(np.ceil(np.log(tail_tol) / np.log(ratio))) - 1)
    n = np.arange(n_max + 1)
    weights = ratio**n / (2.0 * s2)
    deficit = 1.0 - float(weights.sum())
    return SuperPoissonState(mu_ss=derived.mu_ss, weights=weights, deficit=deficit)


def default_horizon(derived: DerivedParams) -> float:
    """Operational "t -> infinity": ten decay times and ten cycle periods."""
    return max(10.0 / (derived.nu_bar * derived.gamma),
               10.0 * 2.0 * np.pi / abs(derived.delta_d))


def _drift_diffusion_rhs(spec: EvolutionSpec, x: float, y: float, t: float,
                         h: float) -> float:
    """Spatial side of the drift-diffusion equation, central differences.

    Works on the displaced-frame Gaussian (the frame the equation is written
    in), where the drift velocity is -(nu_bar gamma + i delta_d) alpha + eta.
    """
    d = spec.derived
    nbg = d.nu_bar * d.gamma

    def q(xx, yy, tt):
        m = displaced_mean_at(spec, tt)
        s2 = variance_at(spec, tt)
        r2 = (xx - m.real) ** 2 + (yy - m.imag) ** 2
        return np.exp(-r2 / (2.0 * s2)) / (2.0 * np.pi * s2)

    def ddx(f):
        return (f(x + h, y, t) - f(x - h, y, t)) / (2.0 * h)

    def ddy(f):
        return (f(x, y + h, t) - f(x, y - h, t)) / (2.0 * h)

    lap = ((q(x + h, y, t) - 2.0 * q(x, y, t) + q(x - h, y, t))
           + (q(x, y + h, t) - 2.0 * q(x, y, t) + q(x, y - h, t))) / h**2
    xq = lambda xx, yy, tt: xx * q(xx, yy, tt)
    yq = lambda xx, yy, tt: yy * q(xx, yy, tt)
    return (nbg * (ddx(xq) + ddy(yq))
            - d.delta_d * (ddx(yq) - ddy(xq))
            - d.eta * ddx(q)
            + 0.25 * (1.0 - d.nu) * d.gamma * lap)


def fp_residual(spec: EvolutionSpec, alpha: complex, t: float, h: float = 1e-3,
                budget_tol: float = 1e-4) -> float:
    """|d/dt Q - drift-diffusion RHS| on the analytic solution.

    Both sides are evaluated with central finite differences (step h in the
    coordinate plane, h scaled by the dominant rate in time), so the exact
    residual is zero and the returned value is pure discretization error,
    shrinking as h^2. alpha is a displaced-frame coordinate.

    Raises StepTooLarge when the residual exceeds budget_tol scaled by the
    local peak height and the dominant rate.
    """
    if t <= 0:
        raise ValueError("fp_residual needs t > 0 (central difference in time)")
    d = spec.derived
    rate = abs(d.delta_d) + d.nu_bar * d.gamma + d.gamma
    h_t = min(h / rate, 0.5 * t)
    x, y = alpha.real, alpha.imag

    def q_at(tt):
        m = displaced_mean_at(spec, tt)
        s2 = variance_at(spec, tt)
        r2 = (x - m.real) ** 2 + (y - m.imag) ** 2
        return np.exp(-r2 / (2.0 * s2)) / (2.0 * np.pi * s2)

    lhs = (q_at(t + h_t) - q_at(t - h_t)) / (2.0 * h_t)
    rhs = _drift_diffusion_rhs(spec, x, y, t, h)
    residual = abs(lhs - rhs)
    peak = 1.0 / (2.0 * np.pi * variance_at(spec, t))
    budget = budget_tol * peak * rate
    if residual > budget:
        raise StepTooLarge(
            f"residual {residual:.3e} exceeds budget {budget:.3e}; reduce h")
    return residual
