"""Green-function propagation of arbitrary initial Q-distributions.

The time evolution acts on any initial density as a Gaussian point-source
kernel: a point at alpha0 is carried to the moving mean with a variance that
grows from zero to the steady value. Convolving the kernel across an initial
lattice gives the full relaxation picture -- e.g. the inverted-state ring
contracting into a displaced disk on the limit cycle.

All fields live on the static quadrature plane; the rotation at the detuning
frequency is already inside the moving mean, so no extra frame factor is
applied anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, ZeroTime
from .params import DerivedParams
from .solution import EvolutionSpec, mean_at

__all__ = [
    "QField",
    "TrajectoryOverlay",
    "square_grid",
    "default_grid",
    "gaussian_field",
    "excited_field",
    "green_function",
    "kernel_mean",
    "kernel_variance",
    "evolve_field",
    "trajectory_overlay",
]


@dataclass(frozen=True)
class QField:
    """Q density sampled on a rectangular lattice.

    values[j, i] = Q(x[i] + 1j*y[j]); cell areas are uniform.
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.y), len(self.x)):
            raise ValueError("values shape must be (len(y), len(x))")
        self.x.setflags(write=False)
        self.y.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def cell_area(self) -> float:
        return float((self.x[1] - self.x[0]) * (self.y[1] - self.y[0]))

    def integral(self) -> float:
        """Lattice mass (midpoint rule)."""
        return float(self.values.sum() * self.cell_area)

    def mean(self) -> complex:
        xx, yy = np.meshgrid(self.x, self.y)
        return complex(np.sum((xx + 1j * yy) * self.values) * self.cell_area)

    def second_central(self) -> float:
        """Per-quadrature central second moment (average of both axes)."""
        xx, yy = np.meshgrid(self.x, self.y)
        m = self.mean()
        r2 = (xx - m.real) ** 2 + (yy - m.imag) ** 2
        return float(np.sum(r2 * self.values) * self.cell_area / 2.0)


@dataclass(frozen=True)
class TrajectoryOverlay:
    """Mean-trajectory samples plus the limit-cycle radius, for plotting."""

    t_grid: np.ndarray
    means: np.ndarray
    radius: float


def square_grid(half_width: float, n: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric square lattice axes of n points per side."""
    ax = np.linspace(-half_width, half_width, n)
    return ax, ax.copy()


def default_grid(derived: DerivedParams, n: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Window wide enough for the limit cycle plus five steady widths."""
    half = max(4.0, abs(derived.mu_ss) + 5.0 * np.sqrt(derived.sigma2_ss))
    return square_grid(half, n)


def gaussian_field(x: np.ndarray, y: np.ndarray, mean: complex,
                   variance: float) -> QField:
    """Normalized Gaussian sampled on the lattice."""
    xx, yy = np.meshgrid(x, y)
    r2 = (xx - mean.real) ** 2 + (yy - mean.imag) ** 2
    return QField(x=x, y=y, values=np.exp(-r2 / (2.0 * variance)) / (2.0 * np.pi * variance))


def excited_field(x: np.ndarray, y: np.ndarray) -> QField:
    """Ring-shaped Q of the inverted initial state, exp(-r^2) r^2 / pi."""
    xx, yy = np.meshgrid(x, y)
    r2 = xx**2 + yy**2
    return QField(x=x, y=y, values=np.exp(-r2) * r2 / np.pi)


def _kernel_coefficients(derived: DerivedParams, t: float,
                         t_start: float) -> tuple[float, complex, float]:
    """Contraction, drift shift and variance of the two-time kernel.

    A point source at beta placed at t_start arrives at time t with mean
    c*beta + s and variance v:
        c = exp(-nu_bar gamma (t - t_start))
        s = mu_ss (exp(i delta_d t) - c exp(i delta_d t_start))
        v = (1 - c^2) sigma2_ss
    The composition of two steps reproduces the single longer step exactly
    (the drift is linear, so kernels compose through these coefficients).
    """
    span = t - t_start
    if span <= 0:
        raise ZeroTime("kernel needs t > t_start (delta function at zero span)")
    nbg = derived.nu_bar * derived.gamma
    c = float(np.exp(-nbg * span))
    s = derived.mu_ss * (np.exp(1j * derived.delta_d * t)
                         - c * np.exp(1j * derived.delta_d * t_start))
    v = (1.0 - c * c) * derived.sigma2_ss
    return c, s, v


def kernel_mean(derived: DerivedParams, alpha0: complex, t: float,
                t_start: float = 0.0) -> complex:
    c, s, _ = _kernel_coefficients(derived, t, t_start)
    return c * alpha0 + s


def kernel_variance(derived: DerivedParams, t: float, t_start: float = 0.0) -> float:
    return _kernel_coefficients(derived, t, t_start)[2]


def green_function(derived: DerivedParams, alpha, alpha0: complex, t: float,
                   t_start: float = 0.0):
    """Point-source density at alpha for a source at alpha0.

    Gaussian with the moving mean of the closed-form solution and the
    point-source variance (zero at t_start, steady value at late times).
    Raises ZeroTime at zero elapsed time; callers must special-case the
    delta kernel there.
    """
    alpha = np.asarray(alpha, dtype=complex)
    c, s, v = _kernel_coefficients(derived, t, t_start)
    mean = c * alpha0 + s
    out = np.exp(-np.abs(alpha - mean) ** 2 / (2.0 * v)) / (2.0 * np.pi * v)
    return out if out.ndim else float(out)


def evolve_field(derived: DerivedParams, initial: QField, t: float,
                 t_start: float = 0.0) -> QField:
    """Propagate an initial lattice density to time t.

    The kernel factorizes over the two axes, so the lattice sum is applied
    as one row product and one column product; the result is identical to
    summing the 2D kernel over every source cell. Output mass stays within
    quadrature error of the input mass (no renormalization).

    Raises GridTooCoarse when the kernel width is under three cells, and
    ZeroTime at zero elapsed time (copy the field instead).
    """
    c, s, v = _kernel_coefficients(derived, t, t_start)
    sigma = float(np.sqrt(v))
    dx = float(initial.x[1] - initial.x[0])
    dy = float(initial.y[1] - initial.y[0])
    if sigma < 3.0 * max(dx, dy):
        raise GridTooCoarse(
            f"kernel width {sigma:.3e} under 3 cells ({max(dx, dy):.3e}) at t={t:.3e}")
    norm = 1.0 / np.sqrt(2.0 * np.pi * v)
    kx = norm * np.exp(-(initial.x[:, None] - c * initial.x[None, :] - s.real) ** 2
                       / (2.0 * v)) * dx
    ky = norm * np.exp(-(initial.y[:, None] - c * initial.y[None, :] - s.imag) ** 2
                       / (2.0 * v)) * dy
    return QField(x=initial.x, y=initial.y, values=ky @ initial.values @ kx.T)


def trajectory_overlay(derived: DerivedParams, alpha0: complex,
                       t_grid) -> TrajectoryOverlay:
    """Mean trajectory from alpha0 plus the limit-cycle radius |mu_ss|."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    means = mean_at(EvolutionSpec(derived=derived, alpha0=alpha0), t_grid)
    return TrajectoryOverlay(t_grid=t_grid, means=means, radius=abs(derived.mu_ss))
