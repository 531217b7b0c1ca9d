"""Empirical statistics of the maps k -> k + f(k) for arithmetic f.

Submodules:
    sieve            segmented tabulation of omega/tau/phi/sigma/lpf/squarefree
    representability image coverage, multiplicity histograms, mean-value bound
    mod3             residue bias of k + tau(k) and its exact identities
    constants        closed-form constants and Euler-product cross-checks
    totient_dist     CDF of phi(k)/k, integral bracket, partition count
    energy           structured sets, collision energy, image lower bound
    cli              batch front end (also `python -m kfk`)

Hot kernels are numba-jitted with a pure-numpy fallback; select with
KFK_BACKEND=numba|numpy before import.
"""

from .kernels import BACKEND
from .sieve import (
    FunctionTable,
    Interval,
    SieveConfig,
    smooth_part,
    smoothness_diagnostics,
    stream_factors,
    table_from_values,
    tabulate,
)
from .representability import (
    BoundCheck,
    RepReport,
    count_image,
    density_sweep,
    nonrepresentable_lower_bound,
    totient_mean_check,
)
from .mod3 import (
    ResidueReport,
    exp1_count,
    residue_counts,
    tau_mod3_check,
    tau_nonzero_mod3_count,
    twisted_sum,
    twisted_sum_probe,
)
from .constants import ConstantCatalog, catalog, mersenne_sigma_moment
from .totient_dist import (
    EmpiricalCDF,
    IntegralBound,
    PartitionBound,
    empirical_cdf,
    integral_bound,
    partition_lower_bound,
)
from .energy import (
    EnergyReport,
    ImageReport,
    ProofSet,
    ProofSetSpec,
    additive_energy,
    build_proof_set,
    image_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "FunctionTable",
    "Interval",
    "SieveConfig",
    "smooth_part",
    "smoothness_diagnostics",
    "stream_factors",
    "table_from_values",
    "tabulate",
    "BoundCheck",
    "RepReport",
    "count_image",
    "density_sweep",
    "nonrepresentable_lower_bound",
    "totient_mean_check",
    "ResidueReport",
    "exp1_count",
    "residue_counts",
    "tau_mod3_check",
    "tau_nonzero_mod3_count",
    "twisted_sum",
    "twisted_sum_probe",
    "ConstantCatalog",
    "catalog",
    "mersenne_sigma_moment",
    "EmpiricalCDF",
    "IntegralBound",
    "PartitionBound",
    "empirical_cdf",
    "integral_bound",
    "partition_lower_bound",
    "EnergyReport",
    "ImageReport",
    "ProofSet",
    "ProofSetSpec",
    "additive_energy",
    "build_proof_set",
    "image_lower_bound",
]
