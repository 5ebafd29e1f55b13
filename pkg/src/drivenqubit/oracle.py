"""Brute-force master-equation integration in a truncated Fock space.

This module is the package's independent check on every closed-form result:
it integrates the master equation directly with fixed-step fourth-order
Runge-Kutta, then reads moments and Husimi-Q fields off the density matrix.
Nothing here reuses the Gaussian solution.

The equation lives in the displaced frame (offset alpha_d from the
quadrature frame, co-rotating at the detuning):

    drho/dt = -i delta_d [n, rho] + eta [a^dag - a, rho]
              + (gamma/2)(1 - nu) (2 a rho a^dag - {n, rho})
              + (gamma/2) nu      (2 a^dag rho a - {a a^dag, rho})

Quadrature-frame initial conditions must therefore be displaced by +alpha_d
before constructing the initial state (`displaced_amplitude`), and means read
from the evolution map back through `quadrature_mean`. Variances and weights
are frame-invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.stats import poisson

from .errors import (DimensionTooSmall, HermiticityLoss, TraceDrift,
                     TruncationOverflow)
from .params import DerivedParams
from .solution import super_poisson

__all__ = [
    "FockSpace",
    "OracleRun",
    "build_space",
    "coherent_state",
    "excited_state",
    "displacement_operator",
    "displaced_fock_mixture",
    "steady_state_density",
    "rhs",
    "evolve",
    "husimi_q",
    "moments",
    "displaced_amplitude",
    "quadrature_mean",
    "min_dim_for",
]

TRACE_TOL = 1e-6
HERM_TOL = 1e-8


@dataclass(frozen=True)
class FockSpace:
    """Truncated Fock basis with dense ladder operators.

    The commutator [a, a^dag] equals the identity except in the top-level
    entry (dim-1, dim-1) -- the unavoidable truncation artifact.
    """

    dim: int
    a: np.ndarray
    adag: np.ndarray
    number: np.ndarray

    def __post_init__(self) -> None:
        for m in (self.a, self.adag, self.number):
            m.setflags(write=False)


@dataclass(frozen=True)
class OracleRun:
    """Sampled direct integration: density matrices plus integrity metrics."""

    params: DerivedParams
    t_grid: np.ndarray
    states: list[np.ndarray]
    trace_errors: np.ndarray = field(repr=False)
    herm_errors: np.ndarray = field(repr=False)


def build_space(dim: int) -> FockSpace:
    """Dense ladder operators with a|n> = sqrt(n)|n-1>."""
    if dim < 2:
        raise DimensionTooSmall(f"need dim >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    a[np.arange(dim - 1), np.arange(1, dim)] = np.sqrt(np.arange(1, dim))
    adag = a.conj().T.copy()
    return FockSpace(dim=dim, a=a, adag=adag, number=adag @ a)


def _coherent_vector(dim: int, alpha: complex) -> np.ndarray:
    """First dim Fock amplitudes of |alpha>, exact and unnormalized on tail."""
    v = np.zeros(dim, dtype=complex)
    v[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        v[n] = v[n - 1] * alpha / np.sqrt(n)
    return v


def coherent_state(space: FockSpace, alpha: complex) -> np.ndarray:
    """Projector onto the coherent state of amplitude alpha.

    Raises TruncationOverflow when more than 1e-8 of the state's weight
    lies beyond the truncated basis.
    """
    v = _coherent_vector(space.dim, alpha)
    tail = 1.0 - float(np.sum(np.abs(v) ** 2))
    if tail > 1e-8:
        raise TruncationOverflow(
            f"coherent amplitude {alpha} leaves tail {tail:.2e} outside dim={space.dim}")
    return np.outer(v, v.conj())


def excited_state(space: FockSpace) -> np.ndarray:
    """Projector onto the first Fock level (the inverted initial state)."""
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[1, 1] = 1.0
    return rho


def displacement_operator(space: FockSpace, mu: complex) -> np.ndarray:
    """exp(mu a^dag - mu* a), dense scaling-and-squaring matrix exponential."""
    return expm(mu * space.adag - np.conj(mu) * space.a)


def displaced_fock_mixture(space: FockSpace, mu: complex,
                           weights: np.ndarray) -> np.ndarray:
    """sum_n w_n D(mu)|n><n|D(mu)^dag assembled in the truncated basis."""
    d_op = displacement_operator(space, mu)
    cols = d_op[:, : len(weights)]
    return (cols * np.asarray(weights)) @ cols.conj().T


def steady_state_density(space: FockSpace, params: DerivedParams,
                         n_max: int | None = None,
                         tail_tol: float = 1e-16) -> np.ndarray:
    """Stationary density matrix of the master equation in its own frame.

    Geometric weights over Fock levels displaced by mu_ss + alpha_d (the
    displaced-frame fixed point). Its Husimi-Q, read at displaced-frame
    coordinates, is the steady-state Gaussian.

    The weight series is exhausted to machine precision by default: any
    truncated weight w couples to the next level at rate ~ gamma n w, so a
    loose tail would dominate the stationarity residual.
    """
    sp = super_poisson(params, n_max=n_max, tail_tol=tail_tol)
    return displaced_fock_mixture(space, params.mu_ss + params.alpha_d, sp.weights)


def rhs(space: FockSpace, params: DerivedParams, rho: np.ndarray) -> np.ndarray:
    """Time derivative drho/dt of the master equation.

    Ladder products are applied as shifted row/column scalings (a is a
    single off-diagonal), which keeps the evaluation O(dim^2); tests pin
    this against the literal operator algebra.
    """
    dim = space.dim
    sq = np.sqrt(np.arange(1.0, dim))          # sq[k] = sqrt(k+1)
    n_diag = np.arange(dim, dtype=float)
    # truncated product a a^dag: n+1 except 0 at the top level, which keeps
    # the generator trace-free on the truncated space
    aad_diag = n_diag + 1.0
    aad_diag[-1] = 0.0
    d = params
    g_down = d.gamma * (1.0 - d.nu)
    g_up = d.gamma * d.nu

    a_rho = np.zeros_like(rho)
    a_rho[:-1, :] = sq[:, None] * rho[1:, :]       # a rho
    ad_rho = np.zeros_like(rho)
    ad_rho[1:, :] = sq[:, None] * rho[:-1, :]      # a^dag rho
    rho_a = np.zeros_like(rho)
    rho_a[:, 1:] = rho[:, :-1] * sq[None, :]       # rho a
    rho_ad = np.zeros_like(rho)
    rho_ad[:, :-1] = rho[:, 1:] * sq[None, :]      # rho a^dag

    a_rho_ad = np.zeros_like(rho)
    a_rho_ad[:, :-1] = a_rho[:, 1:] * sq[None, :]  # a rho a^dag
    ad_rho_a = np.zeros_like(rho)
    ad_rho_a[:, 1:] = ad_rho[:, :-1] * sq[None, :]  # a^dag rho a

    n_rho = n_diag[:, None] * rho
    rho_n = rho * n_diag[None, :]
    out = -1j * d.delta_d * (n_rho - rho_n)
    out += d.eta * ((ad_rho - a_rho) - (rho_ad - rho_a))
    out += g_down * (a_rho_ad - 0.5 * (n_rho + rho_n))
    out += g_up * (ad_rho_a - 0.5 * (aad_diag[:, None] * rho + rho * aad_diag[None, :]))
    return out


def default_step(params: DerivedParams) -> float:
    """Fixed integration step: 1% of the fastest timescale in the equation."""
    return 0.01 / max(abs(params.delta_d), params.nu_bar * params.gamma,
                      abs(params.eta))


def evolve(space: FockSpace, params: DerivedParams, rho0: np.ndarray,
           t_grid, dt_max: float | None = None) -> OracleRun:
    """Classic RK4 integration sampled at t_grid (strictly increasing).

    The trace is never renormalized: its drift is a quality diagnostic.
    Raises TraceDrift or HermiticityLoss when a sampled state violates the
    corresponding tolerance (1e-6 and 1e-8).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    # dt_max overrides the default step; keeping it below the stability
    # bound is the caller's responsibility
    dt = default_step(params) if dt_max is None else dt_max

    rho = np.array(rho0, dtype=complex)
    states = []
    traces = np.empty(len(t_grid))
    herms = np.empty(len(t_grid))
    t_prev = float(t_grid[0])
    if t_prev != 0.0:
        raise ValueError("t_grid must start at 0")

    def check(k: int, r: np.ndarray) -> None:
        traces[k] = abs(np.trace(r).real - 1.0)
        herms[k] = np.linalg.norm(r - r.conj().T)
        if traces[k] > TRACE_TOL:
            raise TraceDrift(f"|trace - 1| = {traces[k]:.2e} at t={t_grid[k]:.3e}")
        if herms[k] > HERM_TOL:
            raise HermiticityLoss(f"|rho - rho^dag| = {herms[k]:.2e} at t={t_grid[k]:.3e}")

    states.append(rho.copy())
    check(0, rho)
    for k, t in enumerate(t_grid[1:], start=1):
        span = t - t_prev
        n_steps = max(1, int(np.ceil(span / dt)))
        h = span / n_steps
        for _ in range(n_steps):
            k1 = rhs(space, params, rho)
            k2 = rhs(space, params, rho + 0.5 * h * k1)
            k3 = rhs(space, params, rho + 0.5 * h * k2)
            k4 = rhs(space, params, rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states.append(rho.copy())
        check(k, rho)
        t_prev = t
    return OracleRun(params=params, t_grid=t_grid, states=states,
                     trace_errors=traces, herm_errors=herms)


def husimi_q(space: FockSpace, rho: np.ndarray, alphas) -> np.ndarray:
    """<alpha|rho|alpha>/pi over a set of coherent-state probes.

    Probes carry the exact Fock amplitudes of |alpha> up to the truncation
    (no renormalization), so states fully inside the basis give exact values.
    """
    alphas = np.asarray(alphas, dtype=complex)
    flat = alphas.ravel()
    probes = np.empty((space.dim, flat.size), dtype=complex)
    probes[0] = np.exp(-0.5 * np.abs(flat) ** 2)
    for n in range(1, space.dim):
        probes[n] = probes[n - 1] * flat / np.sqrt(n)
    vals = np.real(np.einsum("ip,ip->p", probes.conj(), rho @ probes)) / np.pi
    return vals.reshape(alphas.shape)


def moments(space: FockSpace, rho: np.ndarray) -> tuple[complex, float]:
    """Mean coordinate and per-quadrature Husimi variance of rho.

    The variance constant is pinned so that a coherent state reads 1/2 and a
    thermal state of occupation n reads n/2 + 1/2, matching the Gaussian
    solution's convention: sigma^2 = (<n> - |<a>|^2 + 1) / 2.
    """
    mean = complex(np.trace(rho @ space.a))
    n_mean = float(np.trace(rho @ space.number).real)
    return mean, (n_mean - abs(mean) ** 2 + 1.0) / 2.0


def displaced_amplitude(params: DerivedParams, alpha0: complex) -> complex:
    """Displaced-frame amplitude of a quadrature-frame coordinate at t = 0."""
    return alpha0 + params.alpha_d


def quadrature_mean(params: DerivedParams, mean_displaced, t):
    """Map displaced-frame mean(s) back to the quadrature frame."""
    return (np.asarray(mean_displaced) - params.alpha_d) * np.exp(
        1j * params.delta_d * np.asarray(t, dtype=float))


def min_dim_for(amplitude: float, tail: float = 1e-12, floor: int = 30) -> int:
    """Truncation size keeping a coherent state of given amplitude's
    occupation tail below `tail` (Poisson upper quantile plus margin)."""
    lam = float(amplitude) ** 2
    if lam == 0.0:
        return floor
    return max(floor, int(poisson.isf(tail, lam)) + 5)
