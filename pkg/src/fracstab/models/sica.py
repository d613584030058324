"""SICA HIV population model: rates, reproduction number, equilibria, functionals.

Compartments: susceptible S, infected I, under-treatment C, AIDS A.
Two incidence variants are supported:

* ``mass_action``: transmission beta*S*I, a literal transcription of the
  model equations;
* ``standard`` (default): transmission beta*S*I/(S+I+C+A), the variant
  consistent with the published reproduction number and the stability of
  the disease-free point at the baseline parameters.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ContractError, DomainError, NoEndemicEquilibriumError
from ..lyapunov import LyapunovFunctional, PsiComponent, build_log_volterra, identity_g
from ..newton import damped_newton
from ..solver import ModelDefinition

INCIDENCE_VARIANTS = ("mass_action", "standard")

STATE_LABELS = ("S", "I", "C", "A")


@dataclass(frozen=True)
class SicaParams:
    """Rate constants of the SICA model (time unit: years)."""

    lambda_: float   # recruitment into S
    mu: float        # natural death rate
    beta: float      # transmission coefficient
    rho: float       # progression I -> A
    phi: float       # treatment uptake I -> C
    alpha_t: float   # reversal A -> I
    omega: float     # treatment failure C -> I
    d: float         # AIDS-induced death rate
    incidence: str = "standard"

    def __post_init__(self):
        for name in ("lambda_", "mu", "beta", "rho", "phi", "alpha_t", "omega", "d"):
            if getattr(self, name) <= 0:
                raise ContractError(f"parameter {name} must be positive")
        if self.incidence not in INCIDENCE_VARIANTS:
            raise ContractError(f"incidence must be one of {INCIDENCE_VARIANTS}")

    @property
    def a_exit_rate(self) -> float:
        """Total exit rate from the AIDS compartment."""
        return self.alpha_t + self.mu + self.d

    @property
    def c_exit_rate(self) -> float:
        """Total exit rate from the treatment compartment."""
        return self.omega + self.mu

    @property
    def clearance_factor(self) -> float:
        """Composite clearance term in the reproduction-number denominator."""
        x1, x2 = self.a_exit_rate, self.c_exit_rate
        return self.mu * (x2 * (self.rho + x1) + x1 * self.phi + self.rho * self.d) + self.rho * self.omega * self.d


def sica_rhs(p: SicaParams, state) -> np.ndarray:
    """Right-hand side of the four-compartment field at a state (S, I, C, A)."""
    S, I, C, A = np.asarray(state, dtype=float)
    if p.incidence == "standard":
        total = S + I + C + A
        if total == 0.0:
            raise DomainError("standard incidence undefined at zero total population")
        inc = p.beta * S * I / total
    else:
        inc = p.beta * S * I
    return np.array([
        p.lambda_ - p.mu * S - inc,
        inc - (p.rho + p.phi + p.mu) * I + p.alpha_t * A + p.omega * C,
        p.phi * I - p.c_exit_rate * C,
        p.rho * I - p.a_exit_rate * A,
    ])


def sica_model(p: SicaParams) -> ModelDefinition:
    return ModelDefinition(
        dimension=4,
        rhs=lambda x: sica_rhs(p, x),
        name=f"sica_{p.incidence}",
        state_labels=STATE_LABELS,
    )


def sica_r0(p: SicaParams) -> float:
    """Basic reproduction number beta * xi1 * xi2 / N (published form)."""
    return p.beta * p.a_exit_rate * p.c_exit_rate / p.clearance_factor


def endemic_threshold(p: SicaParams) -> float:
    """Persistence threshold under the configured incidence.

    Equals sica_r0 for standard incidence; mass action rescales by the
    disease-free susceptible pool S0.
    """
    r0 = sica_r0(p)
    if p.incidence == "mass_action":
        return r0 * p.lambda_ / p.mu
    return r0


def sica_disease_free(p: SicaParams) -> np.ndarray:
    """Disease-free equilibrium (lambda/mu, 0, 0, 0)."""
    return np.array([p.lambda_ / p.mu, 0.0, 0.0, 0.0])


def _endemic_seed(p: SicaParams) -> np.ndarray:
    # Closed-form equilibrium via the stationarity relations C = phi I/xi2,
    # A = rho I/xi1 and the removal balance lambda - mu S = q I with
    # q = clearance/(xi1 xi2).
    q = p.clearance_factor / (p.a_exit_rate * p.c_exit_rate)
    mult = 1.0 + p.phi / p.c_exit_rate + p.rho / p.a_exit_rate
    if p.incidence == "mass_action":
        S = q / p.beta
        I = (p.lambda_ - p.mu * S) / q
    else:
        # beta S = q (S + mult I)  =>  S = q mult I / (beta - q)
        ratio = q * mult / (p.beta - q)
        I = p.lambda_ / (q + p.mu * ratio)
        S = ratio * I
    return np.array([S, I, p.phi * I / p.c_exit_rate, p.rho * I / p.a_exit_rate])


def sica_endemic(p: SicaParams) -> np.ndarray:
    """Endemic equilibrium via damped Newton, residual below 1e-9 relative."""
    if endemic_threshold(p) <= 1.0:
        raise NoEndemicEquilibriumError(
            f"no endemic equilibrium: threshold {endemic_threshold(p):.4g} <= 1"
        )
    eq = damped_newton(lambda x: sica_rhs(p, x), _endemic_seed(p))
    scale = max(np.abs(eq).max(), 1.0)
    residual = np.abs(sica_rhs(p, eq)).max()
    if residual > 1e-9 * scale:
        raise NoEndemicEquilibriumError(f"equilibrium residual {residual:.3g} too large")
    return eq


def sica_v1(p: SicaParams) -> LyapunovFunctional:
    """Log-Volterra functional anchored at the endemic equilibrium.

    Weights (1, 1, omega/xi2, alpha_t/xi1) on (S, I, C, A).
    """
    eq = sica_endemic(p)
    weights = (1.0, 1.0, p.omega / p.c_exit_rate, p.alpha_t / p.a_exit_rate)
    return build_log_volterra(list(zip(weights, eq)))


def sica_v0(p: SicaParams) -> LyapunovFunctional:
    """Functional anchored at the disease-free equilibrium.

    Log component on S anchored at S0 plus linear components on I, C, A
    with weights 1, omega/xi2, alpha_t/xi1.
    """
    s0 = p.lambda_ / p.mu
    g = identity_g()
    parts = (
        PsiComponent(weight=1.0, g=g, xstar=s0, component_index=0),
        PsiComponent(weight=1.0, g=g, xstar=0.0, component_index=1),
        PsiComponent(weight=p.omega / p.c_exit_rate, g=g, xstar=0.0, component_index=2),
        PsiComponent(weight=p.alpha_t / p.a_exit_rate, g=g, xstar=0.0, component_index=3),
    )
    return LyapunovFunctional(psi_parts=parts)


def disease_jacobian_at_dfe(p: SicaParams) -> np.ndarray:
    """Jacobian of the (I, C, A) subsystem at the disease-free equilibrium."""
    if p.incidence == "standard":
        transmission = p.beta  # beta * S0 / N0 with S0 = N0
    else:
        transmission = p.beta * p.lambda_ / p.mu
    return np.array([
        [transmission - (p.rho + p.phi + p.mu), p.omega, p.alpha_t],
        [p.phi, -p.c_exit_rate, 0.0],
        [p.rho, 0.0, -p.a_exit_rate],
    ])


def dfe_spectrally_stable(p: SicaParams) -> bool:
    eigs = np.linalg.eigvals(disease_jacobian_at_dfe(p))
    return bool((eigs.real < 0).all())


def r0_spectral_consistent(p: SicaParams, margin: float = 1e-6) -> bool:
    """Whether the published R0 threshold agrees with linearized stability.

    States within ``margin`` of the threshold are treated as consistent
    (the spectral test is not meaningful there).
    """
    r0 = sica_r0(p)
    if abs(r0 - 1.0) <= margin:
        return True
    return dfe_spectrally_stable(p) == (r0 < 1.0)


def params_to_json(p: SicaParams) -> dict:
    return asdict(p)


def params_from_json(doc: dict) -> SicaParams:
    allowed = {"lambda_", "mu", "beta", "rho", "phi", "alpha_t", "omega", "d", "incidence"}
    unknown = set(doc) - allowed
    if unknown:
        raise ContractError(f"unknown SICA parameter fields: {sorted(unknown)}")
    return SicaParams(**doc)


def baseline_params(beta: float = 0.066, incidence: str = "standard") -> SicaParams:
    """Published baseline parameter set (beta = 0.866 for the endemic case)."""
    return SicaParams(
        lambda_=10724.0, mu=1.0 / 69.54, beta=beta, rho=0.1, phi=1.0,
        alpha_t=0.33, omega=0.09, d=1.0, incidence=incidence,
    )
