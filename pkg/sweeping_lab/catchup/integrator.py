"""
Catching-up integrator u^{i+1} = P_{C(t^{i+1})}(u^i + h f(u^i)).
"""

import logging
import math
from collections.abc import Sequence
from typing import Final

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidInputError, StepFailedError, StepRuleError
from ..geometry.models import ConstraintSet
from ..geometry.sets import motion_speed, set_at
from ..projection.oracles import project
from ..settings import tolerance_settings
from ..types import as_vector
from .models import ConvergenceRow, ConvergenceTable, Problem, StepResult, Trajectory
from .references import Reference, closed_form_reference

EXACT_GAP: Final[float] = 1e-12
FINEST_GRID_FACTOR: Final[int] = 4

Array = NDArray[np.float64]

logger = logging.getLogger(__name__)


def step(
    set_: ConstraintSet,
    u: Sequence[float] | Array,
    h: float,
    fval: Sequence[float] | Array,
    seed: int = 0,
) -> StepResult:
    """
    One catching-up step: a nearest point of u + h fval in ``set_``.

    When the projection is multivalued the lexicographically smallest minimizer
    is returned and the step is flagged as ambiguous.

    Raises:
        StepFailedError: If the projection does not converge
    """
    u = as_vector(u, set_.dim)
    fval = as_vector(fval, set_.dim)
    if h <= 0:
        raise InvalidInputError("time step must be positive")

    result = project(
        set_, u + h * fval, seed=seed, starts=tolerance_settings.step_multistart
    )
    if not result.converged:
        raise StepFailedError(
            f"projection onto {set_.kind} did not converge after {result.iterations} iterations"
        )
    if result.ambiguous:
        logger.warning(
            f"projection of {(u + h * fval).tolist()} has {len(result.nearest)} "
            "minimizers, keeping the lexicographically smallest"
        )
    return StepResult(
        state=result.nearest[0],
        ambiguous=result.ambiguous,
        multipliers=result.multipliers,
    )


def sup_bound(problem: Problem) -> float:
    """
    A-priori bound on |f| along every discrete trajectory of ``problem``.

    For linear growth L the states satisfy 1 + |u^i| <= (1 + |u0| + k t) e^{2 L t},
    hence |f(u^i)| <= L (1 + |u0| + k T) e^{2 L T}.
    """
    f_inf = problem.field.f_inf
    if f_inf is not None:
        return f_inf
    growth = float(problem.field.growth or 0.0)
    k = motion_speed(problem.moving_set)
    t = problem.horizon
    return growth * (1.0 + float(np.linalg.norm(problem.u0)) + k * t) * math.exp(2.0 * growth * t)


def minimal_steps(problem: Problem) -> int:
    """Smallest n with (T/n)(F + k) <= r/2."""
    speed = sup_bound(problem) + motion_speed(problem.moving_set)
    return max(1, math.ceil(2.0 * problem.horizon * speed / problem.r - 1e-12))


def check_step_rule(problem: Problem, n: int) -> None:
    """
    Raises:
        StepRuleError: If h = T/n violates h (F + k) <= r/2
    """
    if n < 1:
        raise InvalidInputError("the number of steps must be positive")
    minimal = minimal_steps(problem)
    if n < minimal:
        h = problem.horizon / n
        raise StepRuleError(
            f"step h={h:g} violates h*(f_inf + k) <= r/2 for r={problem.r:g}", minimal
        )


def _chunk_bounds(problem: Problem, times: Array, states: Array) -> Array:
    """
    Per-step bound of |f| from the sub-interval construction.

    The horizon is split into chunks of length tau <= 1/(4L); on a chunk starting
    from u_c the bound is L (1 + |u_c| + k tau) e^{2 L tau}.
    """
    n = times.size - 1
    f_inf = problem.field.f_inf
    if f_inf is not None:
        return np.full(n, f_inf)
    growth = float(problem.field.growth or 0.0)
    k = motion_speed(problem.moving_set)
    chunks = max(1, math.ceil(4.0 * growth * problem.horizon))
    tau = problem.horizon / chunks
    bounds = np.empty(n)
    start_norm = float(np.linalg.norm(states[0]))
    current = -1
    for i in range(n):
        chunk = min(int(times[i] / tau), chunks - 1)
        if chunk != current:
            current = chunk
            start_norm = float(np.linalg.norm(states[i]))
        bounds[i] = growth * (1.0 + start_norm + k * tau) * math.exp(2.0 * growth * tau)
    return bounds


def integrate(problem: Problem, n: int, seed: int = 0) -> Trajectory:
    """
    Run the catching-up scheme with n uniform steps on [0, T].

    Moving sets are projected onto C(t^{i+1}); the perturbation is frozen at
    f(u^i) on each step.

    Raises:
        StepRuleError: If n is below the admissible threshold
        StepFailedError: If a projection fails; ``partial`` holds the states so far
    """
    check_step_rule(problem, n)
    h = problem.horizon / n
    times = np.linspace(0.0, problem.horizon, n + 1)
    states = np.empty((n + 1, problem.dim))
    states[0] = problem.u0
    perturbations = np.empty((n, problem.dim))
    deltas = np.empty((n, problem.dim))
    ambiguous: list[int] = []
    multipliers: list[Array] = []

    for i in range(n):
        u = states[i]
        fval = problem.field(u)
        perturbations[i] = fval
        target = set_at(problem.moving_set, float(times[i + 1]))
        try:
            result = step(target, u, h, fval, seed=seed)
        except StepFailedError as e:
            logger.error(f"catching-up step {i} failed at t={times[i]:g}: {e.message}")
            raise StepFailedError(
                f"step {i} failed: {e.message}", partial=states[: i + 1].copy()
            ) from e
        states[i + 1] = result.state
        deltas[i] = (result.state - u - h * fval) / h
        if result.ambiguous:
            ambiguous.append(i)
        if result.multipliers is not None:
            multipliers.append(result.multipliers)

    logger.debug(f"integrated {n} steps, {len(ambiguous)} ambiguous")
    return Trajectory(
        times=times,
        states=states,
        deltas=deltas,
        perturbations=perturbations,
        bounds=_chunk_bounds(problem, times, states),
        motion_speed=motion_speed(problem.moving_set),
        ambiguous_steps=ambiguous,
        multipliers=multipliers if len(multipliers) == n else None,
    )


def _sup_gap(trajectory: Trajectory, reference: Reference | Trajectory) -> float:
    if isinstance(reference, Trajectory):
        expected = reference.at(trajectory.times)
    else:
        expected = np.stack([reference(float(t)) for t in trajectory.times])
    return float(np.max(np.linalg.norm(trajectory.states - expected, axis=1)))


def fitted_order(ns: Sequence[int], gaps: Sequence[float]) -> float | None:
    """Least-squares slope of -log(gap) against log(n) over the nonzero gaps."""
    points = [(math.log(n), math.log(g)) for n, g in zip(ns, gaps, strict=True) if g > EXACT_GAP]
    if len(points) < 2:
        return None
    x, y = np.array(points).T
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)


def convergence_table(
    problem: Problem,
    trajectories: Sequence[Trajectory],
    finest: Trajectory | None = None,
) -> ConvergenceTable:
    """
    Tabulate sup-norm gaps of ``trajectories`` (increasing n) to a reference.

    The closed form is used when known, otherwise ``finest`` must be given.
    """
    closed_form = closed_form_reference(problem)
    if closed_form is None and finest is None:
        raise InvalidInputError("no closed form is known: a finest-grid solution is required")
    reference: Reference | Trajectory = closed_form if closed_form is not None else finest  # type: ignore[assignment]

    by_n = {t.n: t for t in trajectories}
    rows: list[ConvergenceRow] = []
    for trajectory in trajectories:
        doubled = by_n.get(2 * trajectory.n)
        rows.append(
            ConvergenceRow(
                n=trajectory.n,
                gap=_sup_gap(trajectory, reference),
                doubling_gap=_sup_gap(trajectory, doubled) if doubled is not None else None,
            )
        )

    exact = all(row.gap <= EXACT_GAP for row in rows)
    doubling = [row.n * row.doubling_gap for row in rows if row.doubling_gap is not None]
    table = ConvergenceTable(
        reference="closed-form" if closed_form is not None else "finest-grid",
        rows=rows,
        fitted_order=None if exact else fitted_order([r.n for r in rows], [r.gap for r in rows]),
        exact=exact,
        kappa=doubling[0] if doubling else None,
    )
    logger.info(
        f"convergence study over n={[r.n for r in rows]}: order={table.fitted_order}, "
        f"exact={table.exact}"
    )
    return table


def finest_steps(n_list: Sequence[int]) -> int:
    return FINEST_GRID_FACTOR * max(n_list)


def convergence_study(problem: Problem, n_list: Sequence[int], seed: int = 0) -> ConvergenceTable:
    """
    Integrate ``problem`` for every n in ``n_list`` and compare to a reference.

    Raises:
        InvalidInputError: If ``n_list`` is empty or not strictly increasing
        StepRuleError: If some n is not admissible
    """
    ns = list(n_list)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:], strict=False)):
        raise InvalidInputError("n_list must be a nonempty increasing sequence")
    trajectories = [integrate(problem, n, seed=seed) for n in ns]
    finest = None
    if closed_form_reference(problem) is None:
        finest = integrate(problem, finest_steps(ns), seed=seed)
    return convergence_table(problem, trajectories, finest)
