"""Concrete epidemic/virological model definitions."""

from .sica import (
    SicaParams,
    baseline_params,
    dfe_spectrally_stable,
    disease_jacobian_at_dfe,
    endemic_threshold,
    sica_disease_free,
    sica_endemic,
    sica_model,
    sica_r0,
    sica_rhs,
    sica_v0,
    sica_v1,
)
from .teiv import (
    TeivParams,
    ife_spectrally_stable,
    infected_jacobian_at_ife,
    teiv_equilibria,
    teiv_incidence,
    teiv_infection_free,
    teiv_lyapunov,
    teiv_model,
    teiv_r0,
    teiv_rhs,
)

__all__ = [
    "SicaParams",
    "TeivParams",
    "baseline_params",
    "dfe_spectrally_stable",
    "disease_jacobian_at_dfe",
    "endemic_threshold",
    "ife_spectrally_stable",
    "infected_jacobian_at_ife",
    "sica_disease_free",
    "sica_endemic",
    "sica_model",
    "sica_r0",
    "sica_rhs",
    "sica_v0",
    "sica_v1",
    "teiv_equilibria",
    "teiv_incidence",
    "teiv_infection_free",
    "teiv_lyapunov",
    "teiv_model",
    "teiv_r0",
    "teiv_rhs",
]
