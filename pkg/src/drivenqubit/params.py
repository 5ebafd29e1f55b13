"""Physical inputs and the closed-form symbols derived from them.

All frequencies and rates are angular (rad/s). Quantities quoted "per 2 pi"
in experimental captions must be multiplied by 2*pi before they enter this
module; the command-line layer does that on ingestion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import HBAR, K_B
from .errors import NonPositiveInput, ResonantDrive

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "derive",
    "thermal_inversion",
    "effective_temperature",
    "gamma_rate",
    "eta_rate",
    "linearized_frequency",
]


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise NonPositiveInput(f"{name} must be finite, got {v!r}")
        if v <= 0:
            raise NonPositiveInput(f"{name} must be > 0, got {v!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Experiment-level inputs.

    omega_q_lin : linearized qubit angular frequency (rad/s)
    omega_c     : defect (cTLS) angular frequency (rad/s)
    omega_d     : drive angular frequency (rad/s)
    g           : qubit-defect coupling (rad/s)
    gamma_c     : defect relaxation rate (rad/s)
    Omega       : driving strength (rad/s), may be zero
    temperature : bath temperature (K)
    """

    omega_q_lin: float
    omega_c: float
    omega_d: float
    g: float
    gamma_c: float
    Omega: float
    temperature: float

    def __post_init__(self) -> None:
        _require_positive(
            omega_q_lin=self.omega_q_lin,
            omega_c=self.omega_c,
            omega_d=self.omega_d,
            g=self.g,
            gamma_c=self.gamma_c,
            temperature=self.temperature,
        )
        if not math.isfinite(self.Omega) or self.Omega < 0:
            raise NonPositiveInput(f"Omega must be >= 0, got {self.Omega!r}")


@dataclass(frozen=True)
class DerivedParams:
    """Every closed-form symbol of the model, all angular rates in rad/s.

    delta_d   : drive detuning omega_q_lin - omega_d
    delta_c   : defect detuning omega_q_lin - omega_c
    alpha_d   : displacement amplitude Omega / delta_d (dimensionless)
    nu        : thermal inversion of the defect, in [0, 1/2)
    nu_bar    : 1/2 - nu
    n_bar     : equivalent thermal occupation nu / (2 nu_bar)
    gamma     : qubit decay rate through the defect channel
    eta       : drive strength as dressed by the defect decay
    mu_ss     : steady-state mean coordinate (quadrature frame)
    sigma2_ss : steady-state per-quadrature variance nu/(4 nu_bar) + 1/2
    omega_q_lin is carried along for energy bookkeeping.
    """

    delta_d: float
    delta_c: float
    alpha_d: float
    nu: float
    nu_bar: float
    n_bar: float
    gamma: float
    eta: float
    mu_ss: complex
    sigma2_ss: float
    omega_q_lin: float


def thermal_inversion(omega_c: float, temperature: float) -> float:
    """Occupation of the defect's upper level, (exp(hbar w / kT) + 1)^-1.

    Lies in (0, 1/2) for any positive frequency and temperature.
    """
    _require_positive(omega_c=omega_c, temperature=temperature)
    x = HBAR * omega_c / (K_B * temperature)
    # exp overflows beyond ~709; the occupation is then indistinguishable from 0
    if x > 700.0:
        return 0.0
    return 1.0 / (math.exp(x) + 1.0)


def effective_temperature(p: PhysicalParams) -> float:
    """Temperature at which the qubit thermalizes through the defect channel.

    The defect relays the bath to the qubit, so level populations follow the
    defect spacing rather than the qubit's own: T_q = T * omega_q' / omega_c.
    """
    return p.temperature * p.omega_q_lin / p.omega_c


def gamma_rate(g: float, gamma_c: float, delta_c: float) -> float:
    """Qubit decay rate: Lorentzian in the qubit-defect detuning."""
    return 2.0 * g * g * gamma_c / (gamma_c * gamma_c + delta_c * delta_c)


def eta_rate(alpha_d: float, g: float, gamma_c: float, delta_d: float,
             delta_c: float, nu: float) -> float:
    """Drive term in the master equation, two Lorentzian contributions.

    The first term (two-photon process, weight 1 - nu) peaks where the drive
    and defect detunings cancel; the second (one-photon process, weight nu)
    enters with opposite sign and blocks the decay channel on its resonance.
    """
    two_photon = (1.0 - nu) * gamma_c / (gamma_c**2 + (delta_d + delta_c) ** 2)
    one_photon = nu * gamma_c / (gamma_c**2 + (delta_d - delta_c) ** 2)
    return alpha_d * g * g * (two_photon - one_photon)


def linearized_frequency(omega_q: float, chi: float, n_bar_q: float) -> float:
    """Linearized oscillator frequency omega_q - chi (n_bar_q - 1).

    For a coherent initial state of amplitude alpha0, use n_bar_q = |alpha0|^2.
    """
    return omega_q - chi * (n_bar_q - 1.0)


def derive(p: PhysicalParams) -> DerivedParams:
    """Compute every derived symbol from the physical inputs.

    Pure and deterministic: identical inputs give bit-identical outputs.
    Raises ResonantDrive when the drive sits exactly on the linearized qubit
    frequency (the displacement amplitude Omega/delta_d is then singular).
    """
    delta_d = p.omega_q_lin - p.omega_d
    if delta_d == 0.0:
        raise ResonantDrive("omega_d equals omega_q_lin; delta_d must be nonzero")
    delta_c = p.omega_q_lin - p.omega_c
    nu = thermal_inversion(p.omega_c, p.temperature)
    nu_bar = 0.5 - nu
    n_bar = nu / (2.0 * nu_bar)
    gamma = gamma_rate(p.g, p.gamma_c, delta_c)
    alpha_d = p.Omega / delta_d
    eta = eta_rate(alpha_d, p.g, p.gamma_c, delta_d, delta_c, nu)
    mu_ss = eta / (nu_bar * gamma + 1j * delta_d) - alpha_d
    sigma2_ss = nu / (4.0 * nu_bar) + 0.5
    return DerivedParams(
        delta_d=delta_d,
        delta_c=delta_c,
        alpha_d=alpha_d,
        nu=nu,
        nu_bar=nu_bar,
        n_bar=n_bar,
        gamma=gamma,
        eta=eta,
        mu_ss=mu_ss,
        sigma2_ss=sigma2_ss,
        omega_q_lin=p.omega_q_lin,
    )
