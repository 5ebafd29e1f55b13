"""Shared parameter presets for the reference scenarios used across tests."""
import numpy as np
import pytest

from drivenqubit import PhysicalParams, derive

TWO_PI = 2.0 * np.pi

# Common hardware numbers for every reference scenario: 4.5 GHz qubit,
# defect detuned 110 kHz below it, 400 kHz coupling, 1 MHz defect decay,
# 10 mK bath (all per-2pi quantities in Hz).
COMMON = dict(
    f_q=4.5e9,
    f_delta_c=110e3,
    f_g=400e3,
    f_gamma_c=1e6,
    temperature=0.010,
)

# (drive detuning / 2pi, drive strength / 2pi) for the four labelled
# transient behaviors, the ring-relaxation scenario, and the recurrence map.
DRIVE_PRESETS = {
    "I": (-2e6, 100e3),
    "II": (-570e3, 100e3),
    "III": (50e3, 100e3),
    "IV": (100e3, 500e3),
    "ring": (-300e3, 500e3),
    "recurrence": (-2.5e6, 1e6),
}


def physical(f_delta_d: float, f_Omega: float, temperature: float | None = None,
             ) -> PhysicalParams:
    c = COMMON
    return PhysicalParams(
        omega_q_lin=TWO_PI * c["f_q"],
        omega_c=TWO_PI * (c["f_q"] - c["f_delta_c"]),
        omega_d=TWO_PI * (c["f_q"] - f_delta_d),
        g=TWO_PI * c["f_g"],
        gamma_c=TWO_PI * c["f_gamma_c"],
        Omega=TWO_PI * f_Omega,
        temperature=c["temperature"] if temperature is None else temperature,
    )


def preset(name: str, temperature: float | None = None):
    f_dd, f_om = DRIVE_PRESETS[name]
    return physical(f_dd, f_om, temperature)


@pytest.fixture(scope="session")
def derived_presets():
    return {name: derive(preset(name)) for name in DRIVE_PRESETS}
