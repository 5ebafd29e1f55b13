"""Partition of the drive plane into the four transient phases.

Sweeps drive detuning and strength over a 160x160 grid, classifying each
cell from the radial history of the mean. The amplifying region (IV) forms
a wedge around weak positive detunings where the dressed drive term is most
effective at pushing the steady mean beyond the starting radius; collapse-
revive bands (II) flank the oscillating bulk (I); slow near-resonant drives
relax monotonically (III).
"""
import pathlib
import time

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from drivenqubit import PhysicalParams, phase_diagram

TWO_PI = 2 * np.pi
OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

f_q = 4.5e9
base = PhysicalParams(
    omega_q_lin=TWO_PI * f_q,
    omega_c=TWO_PI * (f_q - 110e3),
    omega_d=TWO_PI * (f_q - 1e6),   # replaced per cell by the sweep
    g=TWO_PI * 400e3,
    gamma_c=TWO_PI * 1e6,
    Omega=TWO_PI * 100e3,
    temperature=0.010,
)

n = 160
dd = TWO_PI * np.linspace(-3e6, 3e6, n)
om = TWO_PI * np.linspace(1e4, 1e6, n)

start = time.perf_counter()
diag = phase_diagram(base, dd, om, alpha0=1.0 + 0j)
print(f"{n}x{n} cells classified in {time.perf_counter() - start:.1f} s")

codes = {"I": 0, "II": 1, "III": 2, "IV": 3, None: np.nan}
img = np.array([[codes[v] for v in row] for row in diag.labels], dtype=float)

fig, ax = plt.subplots(figsize=(7, 5))
cmap = matplotlib.colors.ListedColormap(["#3faa5c", "#27327f", "#b79fd4", "#e667a3"])
mesh = ax.pcolormesh(dd / TWO_PI / 1e6, om / TWO_PI / 1e3, img,
                     cmap=cmap, vmin=-0.5, vmax=3.5)
cbar = fig.colorbar(mesh, ticks=[0, 1, 2, 3])
cbar.ax.set_yticklabels(["I oscillating", "II collapse-revive",
                         "III monotonic", "IV amplifying"])
ax.set_xlabel("drive detuning / MHz")
ax.set_ylabel("drive strength / kHz")
ax.set_title("transient phase of the mean from $\\alpha_0 = 1$")
fig.tight_layout()
fig.savefig(OUT / "phase_diagram.png", dpi=150)
print(f"wrote {OUT / 'phase_diagram.png'}")
