"""Look at the first few basis modes and how they move with p.

Run with ``python3 demos/mode_shapes.py``; writes PNGs next to this file
when matplotlib is available, otherwise prints a short table.
"""

from pathlib import Path

import numpy as np

from resbasis import FunctionalParams, ShellGeometry, compute_basis, solve_mode

here = Path(__file__).parent
geom = ShellGeometry()
r = np.linspace(geom.r_inner, geom.r_outer, 400)

# At p = 0 the frequencies sit a little above 2 N pi, the count of half waves
# that fit across a shell of width 1/2.
modes = compute_basis(FunctionalParams(0), 4)
for m in modes:
    print(f"N={m.index_n}  omega={m.omega:10.6f}  omega/(2 N pi)={m.omega / (2 * np.pi * m.index_n):.4f}")

# Continuation in p: the higher modes barely move, the first one drops by
# about a fifth between p = 0 and p = 5.
ps = np.linspace(0, 5, 21)
table = np.array([[solve_mode(n, p).omega / n for n in range(1, 5)] for p in ps])
print("\n  p    " + "  ".join(f"w{n}/{n}" for n in range(1, 5)))
for p, row in zip(ps[::4], table[::4]):
    print(f"{p:4.1f}  " + "  ".join(f"{v:6.3f}" for v in row))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for m in modes:
    s_par, s_perp = m.evaluate(r)
    axes[0].plot(r, s_par, label=f"N={m.index_n}")
    axes[1].plot(r, s_perp)
axes[0].set_title("radial component")
axes[1].set_title("transverse component")
axes[0].legend()
fig.savefig(here / "mode_shapes.png", dpi=120)

fig, ax = plt.subplots(figsize=(5, 4))
for n in range(4):
    ax.plot(ps, table[:, n], label=f"N={n + 1}")
ax.set_xlabel("p")
ax.set_ylabel("omega_N / N")
ax.legend()
fig.savefig(here / "omega_vs_p.png", dpi=120)
