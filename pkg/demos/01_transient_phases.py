"""Four transient behaviors of the driven qubit's mean coordinate.

The same 4.5 GHz qubit, coupled to a junction defect 110 kHz below it, is
driven at four different (detuning, strength) combinations. Starting from
the coherent point alpha0 = 1, the mean |mu(t)| either rings down onto a
small limit cycle (I), collapses almost to the origin before reviving (II),
relaxes monotonically (III), or gets pumped outward to a cycle larger than
its starting radius (IV).
"""
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from drivenqubit import EvolutionSpec, PhysicalParams, classify, derive, mean_at

TWO_PI = 2 * np.pi
OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def params(f_delta_d, f_Omega):
    f_q = 4.5e9
    return PhysicalParams(
        omega_q_lin=TWO_PI * f_q,
        omega_c=TWO_PI * (f_q - 110e3),
        omega_d=TWO_PI * (f_q - f_delta_d),
        g=TWO_PI * 400e3,
        gamma_c=TWO_PI * 1e6,
        Omega=TWO_PI * f_Omega,
        temperature=0.010,
    )


cases = {
    "I": (-2e6, 100e3),
    "II": (-570e3, 100e3),
    "III": (50e3, 100e3),
    "IV": (100e3, 500e3),
}

fig, axes = plt.subplots(2, 4, figsize=(14, 6))
for col, (label, (f_dd, f_om)) in enumerate(cases.items()):
    d = derive(params(f_dd, f_om))
    spec = EvolutionSpec(derived=d, alpha0=1.0 + 0j)
    tau = 1.0 / (d.nu_bar * d.gamma)
    t = np.linspace(0.0, 10 * tau, 6000)
    mu = mean_at(spec, t)

    got = classify(d, 1.0 + 0j).label
    print(f"detuning {f_dd/1e6:+.2f} MHz, strength {f_om/1e3:.0f} kHz -> "
          f"phase {got}, cycle radius {abs(d.mu_ss):.3f}")

    ax = axes[0, col]
    ax.plot(mu.real, mu.imag, lw=0.7)
    circle = abs(d.mu_ss) * np.exp(1j * np.linspace(0, TWO_PI, 200))
    ax.plot(circle.real, circle.imag, "w--", lw=1.0)
    ax.set_title(f"phase {got}:  $\\Delta_d/2\\pi$ = {f_dd/1e6:g} MHz, "
                 f"$\\Omega/2\\pi$ = {f_om/1e3:g} kHz", fontsize=9)
    ax.set_facecolor("#202030")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    if col == 0:
        ax.set_ylabel("y")

    ax = axes[1, col]
    ax.plot(t / tau, np.abs(mu), lw=0.8)
    ax.axhline(abs(d.mu_ss), color="gray", ls="--", lw=0.8)
    ax.set_xlabel("t in decay times")
    if col == 0:
        ax.set_ylabel("|mu(t)|")

fig.tight_layout()
fig.savefig(OUT / "transient_phases.png", dpi=150)
print(f"wrote {OUT / 'transient_phases.png'}")
