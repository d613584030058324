"""Damped Newton iteration for small nonlinear systems."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .errors import NewtonError


def _fd_jacobian(f: Callable, x: np.ndarray) -> np.ndarray:
    n = x.size
    J = np.empty((n, n))
    fx_scale = np.maximum(np.abs(x), 1.0)
    for i in range(n):
        step = 1e-7 * fx_scale[i]
        e = np.zeros(n)
        e[i] = step
        J[:, i] = (f(x + e) - f(x - e)) / (2.0 * step)
    return J


def damped_newton(
    f: Callable[[np.ndarray], np.ndarray],
    x0,
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    max_iter: int = 200,
    step_tol: float = 1e-12,
) -> np.ndarray:
    """Newton iteration with step halving on residual increase.

    Converges when the relative step norm drops below ``step_tol``; raises
    ``NewtonError`` after ``max_iter`` iterations without convergence.
    """
    x = np.asarray(x0, dtype=float).copy()
    fx = f(x)
    for _ in range(max_iter):
        J = jac(x) if jac is not None else _fd_jacobian(f, x)
        try:
            delta = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError as exc:
            raise NewtonError(f"singular Jacobian at {x}") from exc

        lam = 1.0
        base_res = np.linalg.norm(fx)
        for _ in range(60):
            x_new = x + lam * delta
            fx_new = f(x_new)
            if np.isfinite(fx_new).all() and np.linalg.norm(fx_new) <= base_res:
                break
            lam *= 0.5
        else:
            raise NewtonError("line search failed to reduce the residual")

        step = np.linalg.norm(lam * delta) / max(np.linalg.norm(x_new), 1.0)
        x, fx = x_new, fx_new
        if step < step_tol:
            return x
    raise NewtonError(f"no convergence after {max_iter} iterations")
