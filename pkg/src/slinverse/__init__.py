"""Forward and inverse spectral problems for Sturm-Liouville operators on (0, pi)."""

from ._kernels import BACKEND
from .errors import CharacterizationError, NonSymmetricError, SolverError
from .inverse import GLWorkspace, gelfand_levitan, solve_ip1, solve_ip2, solve_ip3, solve_ip4
from .odecore import EndpointData, SolutionSample, eval_solution, integrate_fundamental, wronskian_residual
from .oracle import matrix_spectrum
from .potential import Potential
from .products import ProductEvaluator, asymptotic_fit, check_condition6, check_condition28
from .spectra import (
    BandSpectrum,
    BvpBSpectrum,
    DirichletSpectralData,
    Gap,
    beta_sequence,
    bvpb_spectrum,
    dirichlet_data,
    dirichlet_spectrum,
    e_sequence,
    gaps,
    omega_sequence,
    periodic_spectrum,
    weight_numbers,
)
from .tolerances import DEFAULT, Tolerances
from .witnesses import witness

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BandSpectrum",
    "BvpBSpectrum",
    "CharacterizationError",
    "DEFAULT",
    "DirichletSpectralData",
    "EndpointData",
    "GLWorkspace",
    "Gap",
    "NonSymmetricError",
    "Potential",
    "ProductEvaluator",
    "SolutionSample",
    "SolverError",
    "Tolerances",
    "asymptotic_fit",
    "beta_sequence",
    "bvpb_spectrum",
    "check_condition28",
    "check_condition6",
    "dirichlet_data",
    "dirichlet_spectrum",
    "e_sequence",
    "eval_solution",
    "gaps",
    "gelfand_levitan",
    "integrate_fundamental",
    "matrix_spectrum",
    "omega_sequence",
    "periodic_spectrum",
    "solve_ip1",
    "solve_ip2",
    "solve_ip3",
    "solve_ip4",
    "weight_numbers",
    "witness",
    "wronskian_residual",
]
