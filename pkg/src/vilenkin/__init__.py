"""Vilenkin-Fourier analysis on bounded Vilenkin groups.

Grid functions, the fast Vilenkin-Fourier transform, Cesaro means of
negative order, kernel estimates and the approximation experiment.
"""

from .approximation import (
    ConvergenceRow,
    ModulusProfile,
    approximation_error,
    convergence_table,
    gen_indicator,
    gen_lacunary,
    gen_random,
    lp_norm,
    modulus,
    modulus_profile,
    modulus_profiles,
    theorem_bound,
)
from .cesaro import (
    CesaroTable,
    asymptotic_ratio,
    cesaro_mean,
    cesaro_numbers,
    check_identity_diff,
    check_identity_sum,
    fejer_mean,
    partial_sum,
)
from .errors import VilenkinError
from .group import (
    GroupPoint,
    MixedRadixIndex,
    RadixStructure,
    add,
    build_structure,
    coset_index,
    index_digits,
    neg,
    parse_radices,
    point,
)
from .kernels import (
    KernelProfile,
    dirichlet_kernel,
    fejer_kernel,
    lemma1_ratio,
    profile_for18,
    tail_kernel,
    zero_identity_I12,
    zero_identity_II2,
)
from .transform import (
    Spectrum,
    StepFunction,
    forward,
    forward_naive,
    inverse,
    rademacher,
    vilenkin_char,
)

__version__ = "0.1.0"
