"""
Projection oracles, good-direction sets and directional prox-regularity.
"""

import logging
from collections.abc import Callable, Sequence
from typing import Final

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidInputError
from ..geometry.disks import constraint_jacobian, constraint_values
from ..geometry.models import (
    AxisBox,
    BallExterior,
    ConstraintSet,
    CrossSet,
    DiskConfigurationSet,
    HalfSpace,
    HalfSpaceIntersection,
)
from ..geometry.sets import feasible, member
from ..settings import tolerance_settings
from ..types import as_vector
from .cone import project_cone
from .models import DirectionalProxReport, ProjectionResult, ProxViolation
from .solver import Candidate, kkt_multipliers, solve_from_start

START_SPREAD: Final[float] = 0.5

Array = NDArray[np.float64]
Perturbation = Callable[[Array], Array]

logger = logging.getLogger(__name__)


def project(
    set_: ConstraintSet,
    x: Sequence[float] | Array,
    seed: int = 0,
    starts: int | None = None,
) -> ProjectionResult:
    """
    Nearest points of ``set_`` to ``x``.

    Analytic kinds return every minimizer in closed form (the cross-set may
    return two). Polyhedra are solved as convex programs; disk configurations
    use the multistart oracle.

    Args:
        set_: Constraint set
        x: Query point
        seed: Seed of the multistart generator (disk configurations)
        starts: Number of multistart seeds, defaults to the tolerance settings

    Returns:
        ProjectionResult: minimizers, distance and solver diagnostics
    """
    x = as_vector(x, set_.dim)

    match set_:
        case HalfSpace(normal=n, offset=b):
            excess = max(0.0, (float(np.dot(n, x)) - b) / float(np.dot(n, n)))
            return _closed_form(x, [x - excess * n])
        case AxisBox(lower=lo, upper=hi):
            return _closed_form(x, [np.clip(x, lo, hi)])
        case BallExterior():
            return _closed_form(x, _ball_exterior_points(set_, x))
        case CrossSet(corner=c):
            return _closed_form(x, _cross_points(c, x))
        case HalfSpaceIntersection():
            return _project_polyhedron(set_, x)
        case DiskConfigurationSet():
            return project_disk_config(set_, x, seed=seed, starts=starts)
    raise InvalidInputError(f"unsupported set kind {set_!r}")


def _closed_form(x: Array, points: list[Array]) -> ProjectionResult:
    dist = float(np.linalg.norm(x - points[0]))
    return ProjectionResult(nearest=points, dist=dist, converged=True, iterations=0)


def _ball_exterior_points(set_: BallExterior, x: Array) -> list[Array]:
    offset = x - set_.center
    norm = float(np.linalg.norm(offset))
    if norm >= set_.radius:
        return [x.copy()]
    if norm > 0.0:
        return [set_.center + set_.radius * offset / norm]
    # The whole sphere is nearest; report its axis points as representatives.
    eye = np.eye(set_.dim)
    points = [set_.center + set_.radius * sign * eye[k] for k in range(set_.dim) for sign in (1.0, -1.0)]
    return sorted(points, key=tuple)


def _cross_points(corner: Array, x: Array) -> list[Array]:
    a, b = x - corner
    if a <= 0.0 or b <= 0.0:
        return [x.copy()]
    to_vertical = np.array([corner[0], x[1]])
    to_horizontal = np.array([x[0], corner[1]])
    if a < b:
        return [to_vertical]
    if b < a:
        return [to_horizontal]
    return sorted([to_vertical, to_horizontal], key=tuple)


def _project_polyhedron(set_: HalfSpaceIntersection, x: Array) -> ProjectionResult:
    a, b = set_.matrix()
    if np.all(a @ x <= b):
        return _closed_form(x, [x.copy()])

    def values(q: Array) -> Array:
        return b - a @ q

    def jacobian(_: Array) -> Array:
        return -a

    candidate = solve_from_start(
        x,
        x,
        values,
        jacobian,
        tolerance_settings.tol_feas,
        tolerance_settings.solver_max_iter,
    )
    if not candidate.feasible:
        logger.error("projection onto the polyhedron did not converge")
        return ProjectionResult(
            nearest=[candidate.point],
            dist=float(np.linalg.norm(x - candidate.point)),
            converged=False,
            iterations=candidate.iterations,
        )
    return ProjectionResult(
        nearest=[candidate.point],
        dist=float(np.linalg.norm(x - candidate.point)),
        converged=True,
        iterations=candidate.iterations,
        multipliers=kkt_multipliers(x, candidate.point, values, jacobian),
    )


def multistart_points(x: Array, spread: float, seed: int, count: int) -> list[Array]:
    """``x`` itself followed by ``count - 1`` Gaussian perturbations with spawned seeds."""
    points = [x.copy()]
    for child in np.random.SeedSequence(seed).spawn(max(count - 1, 0)):
        rng = np.random.default_rng(child)
        points.append(x + spread * rng.standard_normal(x.size))
    return points


def project_disk_config(
    set_: DiskConfigurationSet,
    x: Sequence[float] | Array,
    seed: int = 0,
    starts: int | None = None,
) -> ProjectionResult:
    """
    Project a configuration onto the feasible set Q by multistart local solves.

    Every converged start is kept; the minimizers whose cost is within
    ``cost_rel_tol`` of the best one are merged at ``dedup_radius`` and all of
    them are reported, which is how non-uniqueness shows up.
    """
    x = as_vector(x, set_.dim)
    settings = tolerance_settings
    if member(set_, x):
        return ProjectionResult(
            nearest=[x.copy()],
            dist=0.0,
            converged=True,
            iterations=0,
            multipliers=np.zeros(len(constraint_values(set_, x))),
        )

    def values(q: Array) -> Array:
        return constraint_values(set_, q)

    def jacobian(q: Array) -> Array:
        return constraint_jacobian(set_, q)

    count = settings.multistart if starts is None else starts
    candidates: list[Candidate] = [
        solve_from_start(x, start, values, jacobian, settings.tol_feas, settings.solver_max_iter)
        for start in multistart_points(x, START_SPREAD * set_.radius, seed, count)
    ]
    iterations = sum(c.iterations for c in candidates)
    admissible = [c for c in candidates if c.feasible]
    if not admissible:
        logger.error(f"all {count} projection starts failed")
        best_effort = max(candidates, key=lambda c: float(np.min(values(c.point))))
        return ProjectionResult(
            nearest=[best_effort.point],
            dist=float(np.linalg.norm(x - best_effort.point)),
            converged=False,
            iterations=iterations,
        )

    best = min(c.cost for c in admissible)
    minimizers: list[Array] = []
    for c in admissible:
        if c.cost > best * (1.0 + settings.cost_rel_tol) + 1e-15:
            continue
        if all(np.linalg.norm(c.point - m) > settings.dedup_radius for m in minimizers):
            minimizers.append(c.point)
    minimizers.sort(key=tuple)

    if len(minimizers) > 1:
        logger.info(f"projection has {len(minimizers)} distinct minimizers")
    return ProjectionResult(
        nearest=minimizers,
        dist=float(np.sqrt(2.0 * best)),
        converged=True,
        iterations=iterations,
        multipliers=kkt_multipliers(x, minimizers[0], values, jacobian),
    )


def in_gamma_r(
    set_: ConstraintSet,
    x: Sequence[float] | Array,
    v: Sequence[float] | Array,
    r: float,
    seed: int = 0,
) -> bool | None:
    """
    Whether ``v`` is a good direction at scale ``r``: x is a nearest point of x + r v.

    Returns:
        bool | None: the verdict, or None when the projection did not converge

    Raises:
        InvalidInputError: If ``x`` is not in the set or ``r`` is not positive
    """
    x = as_vector(x, set_.dim)
    v = as_vector(v, set_.dim)
    if r <= 0:
        raise InvalidInputError("scale r must be positive")
    if not feasible(set_, x, tolerance_settings.tol_proj):
        raise InvalidInputError("good directions are only defined at points of the set")
    if not np.any(v):
        return True

    result = project(set_, x + r * v, seed=seed)
    if not result.converged:
        logger.warning("good-direction test is indeterminate: projection failed")
        return None
    return any(np.max(np.abs(p - x)) <= tolerance_settings.tol_proj for p in result.nearest)


def certify_directional_prox(
    set_: ConstraintSet,
    f: Perturbation,
    r: float,
    sample: Sequence[Sequence[float] | Array],
    s_grid: Sequence[float],
    seed: int = 0,
) -> DirectionalProxReport:
    """
    Sample the two conditions of r-prox-regularity in the direction ``f``.

    For each sample point x and scale s: (a) y = x + s f(x)/|f(x)| has a unique
    nearest point z; (b) the unit direction from z to y is a good direction at
    z for the scale r.
    """
    if r <= 0:
        raise InvalidInputError("scale r must be positive")
    if any(not 0.0 < s < r for s in s_grid):
        raise InvalidInputError("every scale s must lie in (0, r)")

    violations: list[ProxViolation] = []
    checked = 0
    for raw in sample:
        x = as_vector(raw, set_.dim)
        if not feasible(set_, x, tolerance_settings.tol_proj):
            raise InvalidInputError(f"sample point {x.tolist()} is not in the set")
        direction = np.asarray(f(x), dtype=np.float64)
        norm = float(np.linalg.norm(direction))
        unit = direction / norm if norm > 0.0 else np.zeros_like(direction)
        for s in s_grid:
            checked += 1
            y = x + s * unit
            result = project(set_, y, seed=seed)
            if not result.converged or result.ambiguous:
                violations.append(
                    ProxViolation(
                        x=x,
                        s=s,
                        stage="a",
                        detail=f"{len(result.nearest)} nearest points, converged={result.converged}",
                    )
                )
                continue
            z = result.nearest[0]
            w = y - z
            w_norm = float(np.linalg.norm(w))
            good = True if w_norm == 0.0 else in_gamma_r(set_, z, w / w_norm, r, seed=seed)
            if good is not True:
                violations.append(
                    ProxViolation(x=x, s=s, stage="b", detail=f"good-direction verdict {good}")
                )

    report = DirectionalProxReport(r=r, samples_checked=checked, violations=violations)
    logger.info(
        f"directional prox-regularity: {checked} samples, {len(violations)} violations"
    )
    return report


def project_normal_cone(
    set_: ConstraintSet, x: Sequence[float] | Array, v: Sequence[float] | Array
) -> Array:
    """
    Projection of ``v`` onto the proximal normal cone N(C, x).

    Zero at interior points; closed form on analytic boundaries; the Moreau
    complement of the tangent-cone projection for polyhedra and disk sets.
    """
    x = as_vector(x, set_.dim)
    v = as_vector(v, set_.dim)
    tol = tolerance_settings.tol_proj

    match set_:
        case HalfSpace(normal=n, offset=b):
            unit = n / float(np.linalg.norm(n))
            if abs(float(np.dot(unit, x)) - b / float(np.linalg.norm(n))) > tol:
                return np.zeros_like(v)
            return max(0.0, float(np.dot(v, unit))) * unit
        case AxisBox(lower=lo, upper=hi):
            at_lower = np.abs(x - lo) <= tol
            at_upper = np.abs(x - hi) <= tol
            out = np.zeros_like(v)
            out[at_lower] = np.minimum(v[at_lower], 0.0)
            out[at_upper] = np.maximum(v[at_upper], 0.0)
            out[at_lower & at_upper] = v[at_lower & at_upper]
            return out
        case BallExterior(center=c, radius=radius):
            offset = x - c
            norm = float(np.linalg.norm(offset))
            if abs(norm - radius) > tol:
                return np.zeros_like(v)
            inward = -offset / norm
            return max(0.0, float(np.dot(v, inward))) * inward
        case CrossSet(corner=c):
            a, b = x - c
            out = np.zeros_like(v)
            if abs(a) <= tol and b > tol:
                out[0] = max(0.0, v[0])
            elif abs(b) <= tol and a > tol:
                out[1] = max(0.0, v[1])
            return out
        case HalfSpaceIntersection():
            a, b = set_.matrix()
            active = np.abs(a @ x - b) <= tol * np.linalg.norm(a, axis=1)
            return v - project_cone(-a[active], v).v
        case DiskConfigurationSet():
            active = constraint_values(set_, x) <= tolerance_settings.tol_active
            gradients = constraint_jacobian(set_, x)[active]
            return v - project_cone(gradients, v).v
    raise InvalidInputError(f"unsupported set kind {set_!r}")
