"""
Local nearest-point solver for sets written as {q : g(q) >= 0}.

Each start runs SLSQP on 1/2 |q - x|^2; if SLSQP fails, a penalty descent
(L-BFGS-B with an increasing penalty weight) takes over. The result is then
polished by Gauss-Newton iterations on the KKT system of the active
constraints, with a min-norm restoration step as the last resort.
"""

import logging
from collections.abc import Callable
from typing import Final, NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize, nnls

from ..errors import InvalidInputError

ACTIVE_BAND: Final[float] = 1e-7
PENALTY_WEIGHTS: Final[tuple[float, ...]] = (1e2, 1e4, 1e6, 1e8)
POLISH_MAX_ITER: Final[int] = 50

Array = NDArray[np.float64]
ConstraintFn = Callable[[Array], Array]

logger = logging.getLogger(__name__)


class Candidate(NamedTuple):
    point: Array
    cost: float
    iterations: int
    feasible: bool


def _cost(x: Array, q: Array) -> float:
    return 0.5 * float(np.dot(q - x, q - x))


def _slsqp(
    x: Array, start: Array, values: ConstraintFn, jacobian: ConstraintFn, max_iter: int
) -> tuple[Array, int, bool]:
    result = minimize(
        lambda q: _cost(x, q),
        start,
        jac=lambda q: q - x,
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": values, "jac": jacobian}],
        options={"ftol": 1e-15, "maxiter": max_iter},
    )
    return np.asarray(result.x, dtype=np.float64), int(result.nit), bool(result.success)


def _penalty_descent(
    x: Array, start: Array, values: ConstraintFn, jacobian: ConstraintFn, max_iter: int
) -> tuple[Array, int]:
    q = start.copy()
    iterations = 0
    for weight in PENALTY_WEIGHTS:

        def objective(z: Array, w: float = weight) -> tuple[float, Array]:
            violation = np.minimum(values(z), 0.0)
            value = _cost(x, z) + 0.5 * w * float(np.dot(violation, violation))
            grad = (z - x) + w * (jacobian(z).T @ violation)
            return value, grad

        result = minimize(
            objective, q, jac=True, method="L-BFGS-B", options={"maxiter": max_iter}
        )
        q = np.asarray(result.x, dtype=np.float64)
        iterations += int(result.nit)
    return q, iterations


def _polish(
    x: Array, q: Array, values: ConstraintFn, jacobian: ConstraintFn
) -> Array:
    """Gauss-Newton on [q - x - J_A^T lam = 0, g_A(q) = 0] for the active set A."""
    active = values(q) < ACTIVE_BAND
    if not np.any(active):
        return x.copy() if np.all(values(x) >= 0.0) else q
    d = q.size
    for _ in range(POLISH_MAX_ITER):
        g = values(q)[active]
        jac = jacobian(q)[active]
        m = jac.shape[0]
        kkt = np.block([[np.eye(d), -jac.T], [jac, np.zeros((m, m))]])
        rhs = np.concatenate([x - q, -g])
        solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
        step = solution[:d]
        q = q + step
        if np.linalg.norm(step) <= 1e-15 * (1.0 + np.linalg.norm(q)):
            break
    return q


def _restore(q: Array, values: ConstraintFn, jacobian: ConstraintFn) -> Array:
    """Min-norm Newton correction driving violated or nearly active constraints to zero."""
    for _ in range(POLISH_MAX_ITER):
        g = values(q)
        band = g < ACTIVE_BAND
        if not np.any(band) or np.max(np.abs(g[band])) <= 1e-15:
            break
        step = np.linalg.lstsq(jacobian(q)[band], -g[band], rcond=None)[0]
        q = q + step
    return q


def solve_from_start(
    x: Array,
    start: Array,
    values: ConstraintFn,
    jacobian: ConstraintFn,
    tol_feas: float,
    max_iter: int,
) -> Candidate:
    """Run one local solve of min 1/2 |q - x|^2 s.t. g(q) >= 0 from ``start``."""
    try:
        q, iterations, success = _slsqp(x, start, values, jacobian, max_iter)
        if not success:
            logger.debug("SLSQP failed, switching to penalty descent")
            q, extra = _penalty_descent(x, q, values, jacobian, max_iter)
            iterations += extra

        polished = _polish(x, q, values, jacobian)
        if np.min(values(polished)) >= -tol_feas and _cost(x, polished) <= _cost(
            x, q
        ) + 1e-12 * (1.0 + _cost(x, q)):
            q = polished
        else:
            q = _restore(q, values, jacobian)
    except (InvalidInputError, np.linalg.LinAlgError, ValueError) as e:
        logger.debug(f"local solve aborted: {e}")
        return Candidate(start, np.inf, 0, False)

    feasible = bool(np.all(np.isfinite(q)) and np.min(values(q)) >= -tol_feas)
    return Candidate(q, _cost(x, q), iterations, feasible)


def kkt_multipliers(
    x: Array, q: Array, values: ConstraintFn, jacobian: ConstraintFn
) -> Array:
    """Nonnegative multipliers with q - x = J_A^T lam on the active set, zero elsewhere."""
    g = values(q)
    lambdas = np.zeros(g.size)
    active = np.flatnonzero(g < ACTIVE_BAND)
    if active.size:
        lambdas[active], _ = nnls(jacobian(q)[active].T, q - x)
    return lambdas
