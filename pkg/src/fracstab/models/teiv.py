"""TEIV HIV cellular model: saturated incidence, equilibria, Lyapunov functional.

Compartments: uninfected target cells T, eclipse-stage infected cells E,
productive infected cells I, free virus V.  Infection follows the saturated
incidence f(T, V) = beta*T / (1 + alpha1*T + alpha2*V + alpha3*T*V); cells
in the eclipse stage revert to the uninfected pool at rate rho.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import ContractError, NewtonError
from ..lyapunov import (
    CrossQuadComponent,
    GFunction,
    LyapunovFunctional,
    PsiComponent,
    identity_g,
)
from ..newton import damped_newton
from ..solver import ModelDefinition

STATE_LABELS = ("T", "E", "I", "V")


@dataclass(frozen=True)
class TeivParams:
    """Rate constants of the TEIV model."""

    lambda_: float   # recruitment of uninfected cells
    mu_T: float      # death rate of uninfected cells
    mu_E: float      # death rate of eclipse-stage cells
    mu_I: float      # death rate of productive infected cells
    mu_V: float      # virus clearance rate
    rho: float       # eclipse -> uninfected reversion rate
    gamma: float     # eclipse -> productive transition rate
    k: float         # virion production rate per infected cell
    beta: float      # infection rate
    alpha1: float = 0.0   # incidence saturation in T
    alpha2: float = 0.0   # incidence saturation in V
    alpha3: float = 0.0   # joint incidence saturation

    def __post_init__(self):
        for name in ("lambda_", "mu_T", "mu_E", "mu_I", "mu_V", "rho", "gamma", "k", "beta"):
            if getattr(self, name) <= 0:
                raise ContractError(f"parameter {name} must be positive")
        for name in ("alpha1", "alpha2", "alpha3"):
            if getattr(self, name) < 0:
                raise ContractError(f"parameter {name} must be non-negative")

    @property
    def eclipse_exit_rate(self) -> float:
        """Total exit rate from the eclipse compartment."""
        return self.rho + self.mu_E + self.gamma


def teiv_incidence(p: TeivParams, T: float, V: float) -> float:
    """Saturated incidence beta*T / (1 + alpha1*T + alpha2*V + alpha3*T*V)."""
    return p.beta * T / (1.0 + p.alpha1 * T + p.alpha2 * V + p.alpha3 * T * V)


def teiv_rhs(p: TeivParams, state) -> np.ndarray:
    """Right-hand side of the four-compartment field at a state (T, E, I, V)."""
    T, E, I, V = np.asarray(state, dtype=float)
    fv = teiv_incidence(p, T, V) * V
    return np.array([
        p.lambda_ - p.mu_T * T - fv + p.rho * E,
        fv - p.eclipse_exit_rate * E,
        p.gamma * E - p.mu_I * I,
        p.k * I - p.mu_V * V,
    ])


def teiv_model(p: TeivParams) -> ModelDefinition:
    return ModelDefinition(
        dimension=4,
        rhs=lambda x: teiv_rhs(p, x),
        name="teiv",
        state_labels=STATE_LABELS,
    )


def teiv_r0(p: TeivParams) -> float:
    """Basic reproduction number lambda*beta*k*gamma /
    (mu_I*mu_V*(lambda*alpha1 + mu_T)*(rho + mu_E + gamma))."""
    return (p.lambda_ * p.beta * p.k * p.gamma) / (
        p.mu_I * p.mu_V * (p.lambda_ * p.alpha1 + p.mu_T) * p.eclipse_exit_rate
    )


def teiv_infection_free(p: TeivParams) -> np.ndarray:
    """Infection-free equilibrium (lambda/mu_T, 0, 0, 0)."""
    return np.array([p.lambda_ / p.mu_T, 0.0, 0.0, 0.0])


def _chronic_seed(p: TeivParams) -> np.ndarray:
    # Reduce the stationarity system to one equation in T.  Adding the T and
    # E equations gives E = (lambda - mu_T T)/(mu_E + gamma); the I and V
    # equations give I = gamma E/mu_I and V = k I/mu_V; the E equation then
    # requires f(T, V(T)) * k gamma/(mu_I mu_V) = rho + mu_E + gamma.
    t0 = p.lambda_ / p.mu_T
    amp = p.k * p.gamma / (p.mu_I * p.mu_V)

    def resid(T):
        E = (p.lambda_ - p.mu_T * T) / (p.mu_E + p.gamma)
        V = amp * E
        return teiv_incidence(p, T, V) * amp - p.eclipse_exit_rate

    lo = 1e-12 * t0
    if resid(lo) >= 0 or resid(t0) <= 0:
        raise NewtonError("chronic-equilibrium bracket failed")
    T = brentq(resid, lo, t0, xtol=1e-12 * t0)
    E = (p.lambda_ - p.mu_T * T) / (p.mu_E + p.gamma)
    I = p.gamma * E / p.mu_I
    return np.array([T, E, I, p.k * I / p.mu_V])


def teiv_equilibria(p: TeivParams) -> list:
    """All equilibria: always the infection-free point, plus the chronic
    equilibrium (positive E, I, V) when the reproduction number exceeds 1.

    Every returned equilibrium has residual at most 1e-9 relative to its
    state scale.
    """
    out = [teiv_infection_free(p)]
    if teiv_r0(p) > 1.0:
        eq = damped_newton(lambda x: teiv_rhs(p, x), _chronic_seed(p))
        scale = max(np.abs(eq).max(), 1.0)
        if np.abs(teiv_rhs(p, eq)).max() > 1e-9 * scale:
            raise NewtonError("chronic equilibrium residual too large")
        out.append(eq)
    return out


def _incidence_in_t(p: TeivParams, vbar: float) -> GFunction:
    return GFunction(lambda theta: teiv_incidence(p, theta, vbar), label=f"incidence_V={vbar:g}")


def teiv_lyapunov(p: TeivParams, anchor) -> LyapunovFunctional:
    """Volterra-type functional anchored at an equilibrium.

    Components: an anchored part on T whose shape function is the incidence
    in T at the anchor's virus level; log parts on E, I, V with weights
    1, (rho+mu_E+gamma)/gamma, mu_I(rho+mu_E+gamma)/(k gamma); and a
    quadratic form on (T - Tbar + E - Ebar) weighted by
    rho(1 + alpha2 Vbar)/(1 + alpha1 Tbar + alpha2 Vbar + alpha3 Tbar Vbar).
    Components whose anchor coordinate is zero degenerate to linear terms.
    """
    anchor = np.asarray(anchor, dtype=float)
    if anchor.shape != (4,):
        raise ContractError("anchor must be a 4-component state")
    scale = max(np.abs(anchor).max(), 1.0)
    if np.abs(teiv_rhs(p, anchor)).max() > 1e-6 * scale:
        raise ContractError("anchor is not an equilibrium of the model")

    tbar, ebar, ibar, vbar = anchor
    xi = p.eclipse_exit_rate
    weights = (1.0, 1.0, xi / p.gamma, p.mu_I * xi / (p.k * p.gamma))
    log_g = identity_g()
    psi_parts = []
    for idx, (w, xstar) in enumerate(zip(weights, anchor)):
        if idx == 0 and xstar > 0:
            g = _incidence_in_t(p, vbar)
        else:
            g = log_g
        psi_parts.append(PsiComponent(weight=w, g=g, xstar=float(xstar), component_index=idx))

    cross_w = p.rho * (1.0 + p.alpha2 * vbar) / (
        1.0 + p.alpha1 * tbar + p.alpha2 * vbar + p.alpha3 * tbar * vbar
    )
    cross = (CrossQuadComponent(weight=cross_w, indices=(0, 1), anchors=(float(tbar), float(ebar))),)
    return LyapunovFunctional(psi_parts=tuple(psi_parts), cross_quad_parts=cross)


def infected_jacobian_at_ife(p: TeivParams) -> np.ndarray:
    """Jacobian of the (E, I, V) subsystem at the infection-free equilibrium."""
    t0 = p.lambda_ / p.mu_T
    return np.array([
        [-p.eclipse_exit_rate, 0.0, teiv_incidence(p, t0, 0.0)],
        [p.gamma, -p.mu_I, 0.0],
        [0.0, p.k, -p.mu_V],
    ])


def ife_spectrally_stable(p: TeivParams) -> bool:
    eigs = np.linalg.eigvals(infected_jacobian_at_ife(p))
    return bool((eigs.real < 0).all())


def r0_spectral_consistent(p: TeivParams, margin: float = 1e-6) -> bool:
    """Whether the reproduction-number threshold agrees with linearized
    stability of the infection-free equilibrium (margin band excluded)."""
    r0 = teiv_r0(p)
    if abs(r0 - 1.0) <= margin:
        return True
    return ife_spectrally_stable(p) == (r0 < 1.0)


def params_to_json(p: TeivParams) -> dict:
    return asdict(p)


def params_from_json(doc: dict) -> TeivParams:
    allowed = {
        "lambda_", "mu_T", "mu_E", "mu_I", "mu_V",
        "rho", "gamma", "k", "beta", "alpha1", "alpha2", "alpha3",
    }
    unknown = set(doc) - allowed
    if unknown:
        raise ContractError(f"unknown TEIV parameter fields: {sorted(unknown)}")
    return TeivParams(**doc)
