"""fracstab: Caputo fractional-order solvers with Lyapunov certification.

Integrates Caputo fractional dynamical systems (Adams-Bashforth-Moulton
predictor-corrector, Grunwald-Letnikov cross-check), builds Volterra-type
Lyapunov functionals, and numerically certifies stability inequalities
along computed trajectories.  Ships two four-compartment HIV models
(population-level SICA, cellular-level TEIV) and a CLI for reproducing
the associated convergence experiments.
"""

from .caputo import (
    FractionalOrder,
    SampledSignal,
    UniformGrid,
    abm_weights,
    gamma_fn,
    gl_weights,
    l1_caputo,
)
from .errors import (
    ConfigError,
    ContractError,
    DivergenceError,
    DomainError,
    FracstabError,
    GridError,
    NewtonError,
    NoEndemicEquilibriumError,
)
from .lyapunov import (
    Certificate,
    CrossQuadComponent,
    GFunction,
    LyapunovFunctional,
    PsiComponent,
    QuadComponent,
    build_log_volterra,
    caputo_of_functional,
    decrescence_certificate,
    default_tolerance,
    eval_functional,
    field_derivative,
    identity_g,
    lemma_certificate,
    psi,
    psi_profile,
)
from .newton import damped_newton
from .solver import (
    ModelDefinition,
    Trajectory,
    solve_fde_abm,
    solve_fde_gl,
    solve_ode_rk4,
    undershoot_report,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConfigError",
    "ContractError",
    "CrossQuadComponent",
    "DivergenceError",
    "DomainError",
    "FracstabError",
    "FractionalOrder",
    "GFunction",
    "GridError",
    "LyapunovFunctional",
    "ModelDefinition",
    "NewtonError",
    "NoEndemicEquilibriumError",
    "PsiComponent",
    "QuadComponent",
    "SampledSignal",
    "Trajectory",
    "UniformGrid",
    "abm_weights",
    "build_log_volterra",
    "caputo_of_functional",
    "damped_newton",
    "decrescence_certificate",
    "default_tolerance",
    "eval_functional",
    "field_derivative",
    "gamma_fn",
    "gl_weights",
    "identity_g",
    "l1_caputo",
    "lemma_certificate",
    "psi",
    "psi_profile",
    "solve_fde_abm",
    "solve_fde_gl",
    "solve_ode_rk4",
    "undershoot_report",
]
