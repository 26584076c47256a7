"""Expand the two benchmark fields in the basis and watch the errors decay.

The thermoelastic field is smooth, so the L2 error falls like n^-1.5.  The
shrink-fit field jumps at the interface; its error falls like n^-0.5 and the
partial sums overshoot near the jump no matter how many terms are kept.
"""

from pathlib import Path

import numpy as np

from resbasis import FunctionalParams, compute_basis, fit, shrinkfit_field, thermoelastic_field
from resbasis.fitting import gibbs_overshoot, reconstruct

here = Path(__file__).parent
params = FunctionalParams(1, 2)  # beta = 1, gamma = 0
modes = compute_basis(params, 100)

smooth = fit(thermoelastic_field(), params, 100, modes=modes)
jump = fit(shrinkfit_field(), params, 100, modes=modes)

for name, rep in (("thermoelastic", smooth), ("shrink fit", jump)):
    s = rep.slopes
    h1 = "n/a" if s["e_h1"] is None else f"{s['e_h1']:.3f}"
    print(f"{name:14s} e_l2 slope {s['e_l2']:.3f}   e_h1 slope {h1}   odd |b| slope {s['b_odd']:.3f}")

target = shrinkfit_field()
for n in (25, 50, 100):
    print(f"overshoot near r_m with {n:3d} terms: {gibbs_overshoot(target, modes, jump.coefficients, n, 0.75):.5f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

n = np.arange(1, 101)
fig, ax = plt.subplots(figsize=(5, 4))
ax.loglog(n, smooth.e_l2, label="thermoelastic L2")
ax.loglog(n, smooth.e_h1, label="thermoelastic H1")
ax.loglog(n, jump.e_l2, label="shrink fit L2")
ax.set_xlabel("terms")
ax.legend()
fig.savefig(here / "error_decay.png", dpi=120)

r = np.linspace(0.5, 1.0, 1500)
r = r[np.abs(r - 0.75) > 1e-9]
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(r, target.s_perp(r), "k", lw=2, label="target")
for k in (10, 100):
    ax.plot(r, reconstruct(modes, jump.coefficients, k, r)[1], label=f"{k} terms")
ax.set_title("transverse stress across the interface")
ax.legend()
fig.savefig(here / "shrinkfit_reconstruction.png", dpi=120)
