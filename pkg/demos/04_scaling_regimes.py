"""
Three scalings of the maximum
=============================

How fast the extreme potential value grows depends on alpha * delta vs d:

* below d, Gamma_L = (2L+1)^((d - alpha delta)/delta)
* at d, Gamma_L = log(2L+1)^(1/delta)
* at alpha = 0 (no decay), Gamma_L = (2L+1)^(d/delta) and b = 1

The critical case converges slowly: its constant b approaches 2 only at
rate 1/log L, which this script makes visible.
"""

# %%
import numpy as np
from scipy.special import digamma

from specdecay import EmpiricalCDF, ParetoSymmetric, ks_distance
from specdecay.extremes import ScalingRegime, b_partial, limit_max_cdf, run_extreme_experiment

law = ParetoSymmetric(1.0)

# %% Diagonal-only runs are cheap, so use many trials
for regime, L in [
    (ScalingRegime(1, 0.25, 1.0), 500),
    (ScalingRegime(1, 1.0, 1.0), 2000),
    (ScalingRegime(1, 0.0, 1.0), 200),
]:
    exp = run_extreme_experiment(regime, L, law, trials=5000, master_seed=3, diagonal_only=True)
    b = b_partial(regime, L)
    ks_limit = ks_distance(EmpiricalCDF.from_values(exp.normalized("diag_max")), lambda x: limit_max_cdf(b, 1.0, x))
    print(f"{regime.regime:>13}  L={L:5d}  Gamma_L={regime.gamma_L(L):9.2f}  b_L={b:.4f}  "
          f"KS exact={exp.ks['diag_max_vs_exact']:.4f}  KS limit={ks_limit:.4f}")

# %% Slow approach of the critical constant
# In d = 1 with alpha = delta = 1 the partial sum has a closed form in the
# digamma function, which lets us go far beyond any enumerable cube.
crit = ScalingRegime(1, 1.0, 1.0)
print(f"{'L':>12} {'b_partial':>10} {'2 - b':>8}")
for L in (10**2, 10**4, 10**6):
    print(f"{L:12d} {b_partial(crit, L):10.5f} {2 - b_partial(crit, L):8.5f}")
for L in (10**9, 10**12, 10**15):
    b = (2 * digamma(L + 2) + 2 * np.euler_gamma - 1) / np.log(2 * L + 1)
    print(f"{L:12.0e} {b:10.5f} {2 - b:8.5f}")
