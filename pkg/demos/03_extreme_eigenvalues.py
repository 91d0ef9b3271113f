"""
Largest and smallest eigenvalues under a heavy-tailed potential
===============================================================

With symmetric Pareto site variables of index delta and slow decay
(alpha * delta < d), the top of the spectrum is dominated by the single
largest potential value.  Because |E_max - max V| <= 2d, rescaling by
Gamma_L sends both to the same Frechet law exp(-b x^(-delta) / 2).

We sample many potentials on L = 500 in d = 1. The diagonal maximum is
compared with its exact finite-L law, and the top and bottom eigenvalues
with the Frechet limit and its mirror image.
"""

# %%
import numpy as np

from specdecay import EmpiricalCDF, ParetoSymmetric, ks_distance
from specdecay.extremes import (
    ScalingRegime,
    b_estimate,
    b_partial,
    limit_max_cdf,
    limit_min_cdf,
    run_extreme_experiment,
)
from _plotting import plt, save

regime = ScalingRegime(d=1, alpha=0.25, delta=1.0)
L = 500
print(f"regime {regime.regime}, Gamma_L = {regime.gamma_L(L):.2f}")

# %% The constant b
# b is the limit of a normalized sum over the cube; the partial sum at L is
# what the finite experiment actually sees.
b_L = b_partial(regime, L)
b_inf, increment = b_estimate(regime)
print(f"b_partial({L}) = {b_L:.4f}, b_estimate = {b_inf:.4f} (last doubling moved it {increment:.1e})")

# %% Monte Carlo
exp = run_extreme_experiment(regime, L, ParetoSymmetric(1.0), trials=2000, master_seed=11)
print(f"largest |E - diag| over all trials: {exp.max_bracket_gap:.3f} (<= 2)")
for key, value in sorted(exp.ks.items()):
    print(f"  KS {key:32s} {value:.4f}")

# Using the partial sum b_L for the limit law fits slightly better at finite
# L than the limiting constant.

# %% Picture
if plt is not None:
    x = np.geomspace(0.02, 200, 400)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    axes[0].step(x, EmpiricalCDF.from_values(exp.normalized("E_max"))(x), where="post", label="E_max / Gamma_L")
    axes[0].plot(x, limit_max_cdf(b_L, 1.0, x), "k", lw=1, label="Frechet limit")
    axes[1].step(-x, EmpiricalCDF.from_values(exp.normalized("E_min"))(-x), where="post", label="E_min / Gamma_L")
    axes[1].plot(-x, limit_min_cdf(b_L, 1.0, -x), "k", lw=1, label="mirror limit")
    axes[0].set_xscale("log")
    axes[1].set_xscale("symlog")
    for ax in axes:
        ax.legend()
    save(fig, "extreme_eigenvalues")
