"""Random Schrodinger operators with decaying heavy-tailed potentials on Z^d."""

__version__ = "0.1.0"

from specdecay.lattice import LatticeCube, NormKind, enumerate_sites, shell_counts, site_norm
from specdecay.sampling import (
    DecayProfile,
    Gaussian,
    ParetoSymmetric,
    SiteDistribution,
    StreamSpec,
    Uniform,
    sample_potential,
)
from specdecay.operators import (
    SymmetricOperator,
    build_hamiltonian,
    build_laplacian,
    laplacian_spectrum_exact,
    trace_square,
)
from specdecay.eigensolve import (
    ConvergenceError,
    SpectralSample,
    count_at_or_below,
    eigenvalues_symmetric,
    extreme_eigenvalues,
)
from specdecay.spectra import (
    EmpiricalCDF,
    FreeIDS,
    counting_function,
    free_ids,
    hoffman_wielandt_certificate,
    ks_distance,
    wasserstein_bound_certificate,
    wasserstein_p,
)
from specdecay.extremes import (
    ScalingRegime,
    b_estimate,
    b_partial,
    exact_diagonal_max_cdf,
    exact_diagonal_min_cdf,
    gamma_L,
    limit_max_cdf,
    limit_min_cdf,
    run_extreme_experiment,
)
