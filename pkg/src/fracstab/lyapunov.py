"""Construction, evaluation, and certification of Lyapunov functionals.

The functionals are weighted sums of anchored components

    psi(x) = x - xstar - integral_{xstar}^{x} g(xstar)/g(s) ds

with g non-negative and strictly increasing, optionally combined with
per-coordinate quadratic parts b/2 (x - xstar)^2 and quadratic forms over
sums of coordinates.  Certificates check, along sampled signals, the
fractional comparison inequality

    D^alpha psi(x(t))  <=  (1 - g(xbar)/g(x(t))) D^alpha x(t)

and the decrescence of a discrete Caputo-derivative signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .caputo import FractionalOrder, SampledSignal, UniformGrid, l1_caputo
from .errors import ContractError, DomainError
from .solver import ModelDefinition, Trajectory

_X_FLOOR = 1e-30  # below this, psi with a positive anchor is treated as singular
_GAUSS_NODES, _GAUSS_WEIGHTS = leggauss(12)


@dataclass(frozen=True)
class GFunction:
    """Scalar shape function g used inside psi components.

    Admissibility (non-negative and strictly increasing on the positive
    reals) is checked probabilistically at construction over 64 log-spaced
    sample points in [1e-6, 1e6].
    """

    eval: Callable[[float], float]
    label: str

    def __post_init__(self):
        s = np.logspace(-6.0, 6.0, 64)
        v = np.array([self.eval(x) for x in s], dtype=float)
        if not np.isfinite(v).all() or (v < 0).any():
            raise DomainError(f"g function {self.label!r} is not non-negative on R+")
        if not (np.diff(v) > 0).all():
            raise DomainError(f"g function {self.label!r} is not strictly increasing")

    def __call__(self, x):
        return self.eval(x)

    @property
    def is_identity(self) -> bool:
        return self.label == "identity"


def identity_g() -> GFunction:
    return GFunction(lambda s: s, "identity")


@dataclass(frozen=True)
class PsiComponent:
    """Weighted anchored component a * psi(x[component_index])."""

    weight: float
    g: GFunction
    xstar: float
    component_index: int

    def __post_init__(self):
        if self.weight <= 0:
            raise ContractError("psi component weight must be positive")
        if self.xstar < 0:
            raise ContractError("psi anchor must be non-negative")


@dataclass(frozen=True)
class QuadComponent:
    """Per-coordinate quadratic part b/2 (x - xstar)^2."""

    weight: float
    xstar: float
    component_index: int

    def __post_init__(self):
        if self.weight < 0:
            raise ContractError("quadratic weight must be non-negative")


@dataclass(frozen=True)
class CrossQuadComponent:
    """Quadratic form w/2 (sum_i (x_i - anchor_i))^2 over an index set."""

    weight: float
    indices: tuple
    anchors: tuple

    def __post_init__(self):
        if self.weight < 0:
            raise ContractError("cross-quadratic weight must be non-negative")
        if len(self.indices) != len(self.anchors):
            raise ContractError("indices and anchors must have equal length")


@dataclass(frozen=True)
class LyapunovFunctional:
    """Immutable weighted sum of psi, quadratic, and cross-quadratic parts."""

    psi_parts: tuple
    quad_parts: tuple = ()
    cross_quad_parts: tuple = ()

    def value(self, state) -> float:
        state = np.asarray(state, dtype=float)
        total = 0.0
        for part in self.psi_parts:
            total += part.weight * psi(part.g, part.xstar, state[part.component_index])
        for part in self.quad_parts:
            total += 0.5 * part.weight * (state[part.component_index] - part.xstar) ** 2
        for part in self.cross_quad_parts:
            dev = sum(state[i] - a for i, a in zip(part.indices, part.anchors))
            total += 0.5 * part.weight * dev ** 2
        return total

    def values_along(self, states: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over a (n_nodes, dim) state array."""
        states = np.asarray(states, dtype=float)
        total = np.zeros(states.shape[0])
        for part in self.psi_parts:
            total += part.weight * psi_profile(part.g, part.xstar, states[:, part.component_index])
        for part in self.quad_parts:
            total += 0.5 * part.weight * (states[:, part.component_index] - part.xstar) ** 2
        for part in self.cross_quad_parts:
            dev = np.zeros(states.shape[0])
            for i, a in zip(part.indices, part.anchors):
                dev += states[:, i] - a
            total += 0.5 * part.weight * dev ** 2
        return total


@dataclass(frozen=True)
class Certificate:
    """Outcome of a pointwise inequality check along a sampled signal."""

    kind: str
    max_violation: float
    tolerance: float
    passed: bool
    violating_node: Optional[int] = None
    grid: Optional[UniformGrid] = None
    order: Optional[FractionalOrder] = None

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "violating_node": self.violating_node,
        }
        if self.grid is not None:
            out["grid"] = {"t0": self.grid.t0, "h": self.grid.h, "n": self.grid.n_steps}
        if self.order is not None:
            out["order"] = self.order.alpha
        return out


def _check_positive_x(x: float, xstar: float) -> None:
    if x <= 0:
        raise DomainError(f"psi with positive anchor needs x > 0, got {x}")
    if xstar > 0 and x < _X_FLOOR:
        raise DomainError(f"psi evaluation at x = {x} is inside the singular guard band")


def psi(g: GFunction, xstar: float, x: float) -> float:
    """Anchored component x - xstar - integral_{xstar}^{x} g(xstar)/g(s) ds.

    Reduces to ``x`` exactly when xstar = 0; uses the closed log form for
    the identity g and adaptive quadrature (1e-10 absolute) otherwise.
    """
    if xstar == 0.0:
        return float(x)
    _check_positive_x(x, xstar)
    if g.is_identity:
        return x - xstar - xstar * math.log(x / xstar)
    gbar = g(xstar)
    integral, _ = quad(lambda s: gbar / g(s), xstar, x, epsabs=1e-10, epsrel=1e-10, limit=200)
    return x - xstar - integral


def psi_profile(g: GFunction, xstar: float, xs: np.ndarray) -> np.ndarray:
    """psi evaluated at every entry of ``xs`` (vectorized).

    For a general g the integral is accumulated once over the sorted
    sample points with a fixed 12-point Gauss-Legendre rule per segment,
    which is exact to rounding for the smooth integrands used here.
    """
    xs = np.asarray(xs, dtype=float)
    if xstar == 0.0:
        return xs.copy()
    if (xs <= 0).any() or (xs < _X_FLOOR).any():
        raise DomainError("psi profile requires strictly positive samples")
    if g.is_identity:
        return xs - xstar - xstar * np.log(xs / xstar)

    knots = np.unique(np.concatenate([xs, [xstar]]))
    gbar = g(xstar)
    # Per-segment Gauss-Legendre integral of gbar/g over [knots[i], knots[i+1]].
    left, right = knots[:-1], knots[1:]
    mid = 0.5 * (left + right)
    half = 0.5 * (right - left)
    pts = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    vals = np.vectorize(g.eval, otypes=[float])(pts)
    seg = half * ((gbar / vals) @ _GAUSS_WEIGHTS)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    anchor_pos = np.searchsorted(knots, xstar)
    integral_at_knot = cum - cum[anchor_pos]
    idx = np.searchsorted(knots, xs)
    return xs - xstar - integral_at_knot[idx]


def eval_functional(functional: LyapunovFunctional, state) -> float:
    """Value of the functional at a single state vector."""
    return functional.value(state)


def field_derivative(functional: LyapunovFunctional, model: ModelDefinition, state) -> float:
    """Classical orbital derivative of the functional under the model field.

    Sums multiplier_i * rhs_i(state) where the multiplier of a psi part is
    1 - g(xstar)/g(x_i) (or 1 for a zero anchor), of a quadratic part is
    b (x_i - xstar), and cross-quadratic parts contribute their chain rule.
    """
    state = np.asarray(state, dtype=float)
    fx = model.rhs(state)
    if fx.shape != state.shape:
        raise ContractError("model rhs dimension mismatch")
    total = 0.0
    for part in functional.psi_parts:
        x = state[part.component_index]
        if part.xstar == 0.0:
            mult = 1.0
        else:
            gx = part.g(x)
            if gx == 0.0:
                raise DomainError("g vanished at the evaluation state")
            mult = 1.0 - part.g(part.xstar) / gx
        total += part.weight * mult * fx[part.component_index]
    for part in functional.quad_parts:
        total += part.weight * (state[part.component_index] - part.xstar) * fx[part.component_index]
    for part in functional.cross_quad_parts:
        dev = sum(state[i] - a for i, a in zip(part.indices, part.anchors))
        total += part.weight * dev * sum(fx[i] for i in part.indices)
    return total


def caputo_of_functional(functional: LyapunovFunctional, traj: Trajectory) -> SampledSignal:
    """Discrete Caputo derivative (L1 scheme) of the functional along a trajectory."""
    vals = functional.values_along(traj.states)
    return l1_caputo(SampledSignal(traj.grid, vals), traj.order)


def default_tolerance(grid: UniformGrid, order: FractionalOrder, scale: float) -> float:
    """Default certificate tolerance 10 h^(2-alpha) * scale.

    The L1 scheme carries O(h^(2-alpha)) truncation error, so violations
    below this level are attributable to discretization alone.
    """
    return 10.0 * grid.h ** (2.0 - order.alpha) * scale


def lemma_certificate(
    x: SampledSignal,
    g: GFunction,
    xbar: float,
    order: FractionalOrder,
    tolerance: float | None = None,
) -> Certificate:
    """Certify D^alpha psi(x) <= (1 - g(xbar)/g(x)) D^alpha x along a signal.

    Both sides are discretized with the same L1 operator; the reported
    max_violation is the largest signed gap LHS - RHS over nodes k >= 1.
    """
    if xbar <= 0:
        raise DomainError("xbar must be strictly positive")
    if (x.values <= 0).any():
        raise DomainError("lemma certificate requires strictly positive samples")
    if tolerance is None:
        tolerance = default_tolerance(x.grid, order, float(np.abs(x.values).max()))

    psi_vals = psi_profile(g, xbar, x.values)
    lhs = l1_caputo(SampledSignal(x.grid, psi_vals), order).values
    gx = np.vectorize(g.eval, otypes=[float])(x.values)
    if (gx == 0).any():
        raise DomainError("g vanished along the signal")
    rhs = (1.0 - g(xbar) / gx) * l1_caputo(x, order).values

    gap = lhs[1:] - rhs[1:]
    max_violation = float(gap.max())
    passed = max_violation <= tolerance
    violating = None if passed else int(np.argmax(gap > tolerance)) + 1
    return Certificate("lemma_inequality", max_violation, tolerance, passed, violating, x.grid, order)


def decrescence_certificate(signal: SampledSignal, tolerance: float) -> Certificate:
    """Certify that every node of the signal lies at or below the tolerance."""
    values = signal.values
    max_violation = float(values.max())
    passed = max_violation <= tolerance
    violating = None if passed else int(np.argmax(values > tolerance))
    return Certificate("decrescence", max_violation, tolerance, passed, violating, signal.grid)


def build_log_volterra(parts: Sequence[tuple]) -> LyapunovFunctional:
    """Functional sum_i a_i * (x_i - xstar_i - xstar_i log(x_i/xstar_i)).

    ``parts`` is a sequence of (weight, anchor) pairs, one per coordinate
    in order; a zero anchor degenerates that component to x_i.
    """
    g = identity_g()
    psi_parts = tuple(
        PsiComponent(weight=a, g=g, xstar=xstar, component_index=i)
        for i, (a, xstar) in enumerate(parts)
    )
    return LyapunovFunctional(psi_parts=psi_parts)
