"""
The free lattice Laplacian on a finite cube
===========================================

The discrete Laplacian on the cube {-L..L}^d with Dirichlet boundary has a
closed-form spectrum. Here we check the in-house tridiagonal/QL solver
against it and compare the finite-L counting function with the infinite
volume integrated density of states N_0.
"""

# %%
import numpy as np

from specdecay import (
    LatticeCube,
    build_laplacian,
    counting_function,
    eigenvalues_symmetric,
    free_ids,
    laplacian_spectrum_exact,
)
from _plotting import plt, save

# %% Solver vs closed form
for d, L in [(1, 200), (2, 4), (3, 2)]:
    cube = LatticeCube(L, d)
    ev = eigenvalues_symmetric(build_laplacian(cube))
    err = np.max(np.abs(ev - laplacian_spectrum_exact(cube)))
    print(f"d={d} L={L:3d} N={cube.n_sites:5d}  max |QL - exact| = {err:.1e}")

# %% Finite cube vs N_0
# In d=1 N_0 is the arcsine law; in d=2 it is a convolution of two of them.
for d, L in [(1, 5000), (2, 60)]:
    E = np.linspace(-2 * d, 2 * d, 1001)
    ev = laplacian_spectrum_exact(LatticeCube(L, d))
    gap = np.abs(counting_function(ev, E) / ev.size - free_ids(d, E))
    print(f"d={d} L={L}: sup |N_L - N_0| = {gap.max():.2e}")

# %% Picture
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, d in zip(axes, (1, 2)):
        E = np.linspace(-2 * d, 2 * d, 801)
        ev = laplacian_spectrum_exact(LatticeCube(10, d))
        ax.step(E, counting_function(ev, E) / ev.size, where="post", label="L = 10")
        ax.plot(E, free_ids(d, E), "k", lw=1, label="N_0")
        ax.set_title(f"d = {d}")
        ax.set_xlabel("E")
        ax.legend()
    save(fig, "free_laplacian")
