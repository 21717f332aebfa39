"""Two-grid optimal-interpolation AMG for nonsymmetric matrices.

A nonsymmetric ``A`` is recast as the symmetric indefinite block operator
``[[0, A], [A^T, 0]]``; Kaczmarz relaxation supplies the smoother, the
generalized eigenvectors of (block operator, symmetrized smoother) give the
optimal interpolation, and the two-grid spectral radius is compared with
``1 - lambda_{n_c+1}``.
"""

__version__ = "0.1.0"

from .analysis import RateRecord, power_rates, spectral_radius, sweep, theory_rate
from .blocksys import BlockSystem, build_block, verify_block_spectrum
from .eigsolve import Spectrum, generalized_eig, orthonormality_residual
from .matgen import ProblemSpec, advdiff_2d, generate, poisson_2d, random_nonsym
from .smoother import Smoother, kaczmarz_matrix, kaczmarz_smoother, symmetrize
from .twogrid import (
    CfSplit,
    Interpolation,
    anorm_of_operator,
    cf_split_every_other,
    coarse_operator,
    ideal_interpolation,
    optimal_interpolation,
    two_grid_error,
)

__all__ = [
    "RateRecord",
    "power_rates",
    "spectral_radius",
    "sweep",
    "theory_rate",
    "BlockSystem",
    "build_block",
    "verify_block_spectrum",
    "Spectrum",
    "generalized_eig",
    "orthonormality_residual",
    "ProblemSpec",
    "advdiff_2d",
    "generate",
    "poisson_2d",
    "random_nonsym",
    "Smoother",
    "kaczmarz_matrix",
    "kaczmarz_smoother",
    "symmetrize",
    "CfSplit",
    "Interpolation",
    "anorm_of_operator",
    "cf_split_every_other",
    "coarse_operator",
    "ideal_interpolation",
    "optimal_interpolation",
    "two_grid_error",
]
