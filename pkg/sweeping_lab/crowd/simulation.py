"""
Crowd simulation with the sweeping and velocity schemes, the exit field, and
the two-disk corridor configuration.
"""

import logging
import math

import numpy as np
from numpy.typing import NDArray

from ..catchup.integrator import integrate
from ..catchup.models import CallableField, Perturbation, Problem, Trajectory
from ..errors import InvalidInputError, ProjectionFailedError
from ..eikonal.fast_marching import spontaneous_velocity
from ..eikonal.models import GridField
from ..geometry.disks import centers, constraint_values
from ..geometry.models import DiskConfigurationSet, MovingSet, Wall
from ..geometry.sets import member
from ..projection.cone import project_cone
from ..projection.oracles import project_disk_config
from ..settings import tolerance_settings
from .contacts import active_constraints
from .models import CorridorWitness, CrowdRun, DiskConfiguration

CORRIDOR_TOLERANCE = 1e-6

logger = logging.getLogger(__name__)


def exit_field(field: GridField, n_disks: int) -> CallableField:
    """Spontaneous velocity of every disk from a distance-to-exit field; |U| <= sqrt(N)."""

    def rule(q: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.concatenate([spontaneous_velocity(field, c) for c in centers(q)])

    return CallableField(
        rule=rule, dimension=2 * n_disks, bound=math.sqrt(n_disks), name="exit-field"
    )


def _velocity_scheme(
    c0: DiskConfiguration, field: Perturbation, horizon: float, n: int
) -> tuple[Trajectory, list[NDArray[np.float64]]]:
    """q^{i+1} = q^i + h P_{C_{q^i}}(U(q^i)) with contacts activated at tol_active."""
    set_ = c0.feasible_set
    h = horizon / n
    times = np.linspace(0.0, horizon, n + 1)
    states = np.empty((n + 1, c0.q.size))
    states[0] = c0.q
    deltas = np.empty((n, c0.q.size))
    desired = np.empty((n, c0.q.size))
    multipliers: list[NDArray[np.float64]] = []
    for i in range(n):
        u = field(states[i])
        basis = active_constraints(set_, states[i], tolerance_settings.tol_active)
        projection = project_cone(basis.gradients, u)
        desired[i] = u
        deltas[i] = projection.v - u
        states[i + 1] = states[i] + h * projection.v
        multipliers.append(projection.lambdas)
    bound = field.f_inf if field.f_inf is not None else float(np.max(np.linalg.norm(desired, axis=1)))
    trajectory = Trajectory(
        times=times,
        states=states,
        deltas=deltas,
        perturbations=desired,
        bounds=np.full(n, bound),
    )
    return trajectory, multipliers


def largest_overlap(set_: DiskConfigurationSet, trajectory: Trajectory) -> float:
    """Largest violation max(0, -D) of any disk or wall constraint along ``trajectory``."""
    if set_.n_disks < 2 and not set_.walls:
        return 0.0
    worst = min(float(np.min(constraint_values(set_, q))) for q in trajectory.states)
    return max(0.0, -worst)


def simulate_crowd(
    c0: DiskConfiguration,
    field: Perturbation,
    horizon: float,
    n: int,
    r: float | None = None,
    seed: int = 0,
) -> CrowdRun:
    """
    Run dq/dt + N(Q, q) ∋ U(q) with both discretizations.

    The sweeping scheme projects q^i + h U(q^i) onto Q; the velocity scheme moves
    along the projection of U(q^i) onto the feasible cone at q^i.

    Raises:
        InvalidInputError: If ``c0`` is infeasible
        StepRuleError: If n violates the step rule for the scale ``r``
        StepFailedError: If a projection onto Q fails
    """
    if not member(c0.feasible_set, c0.q):
        raise InvalidInputError("the initial configuration overlaps or crosses a wall")
    problem = Problem(
        moving_set=MovingSet(base=c0.feasible_set),
        field=field,
        u0=c0.q,
        horizon=horizon,
        r=c0.prox_constant if r is None else r,
    )
    sweeping = integrate(problem, n, seed=seed)
    velocity, multipliers = _velocity_scheme(c0, field, horizon, n)
    run = CrowdRun(
        sweeping=sweeping,
        velocity=velocity,
        velocity_multipliers=multipliers,
        velocity_overlap=largest_overlap(c0.feasible_set, velocity),
    )
    logger.info(
        f"crowd of {c0.n_disks} disks over {n} steps: scheme gap {run.scheme_gap:.3e}, "
        f"velocity overlap {run.velocity_overlap:.3e}"
    )
    return run


def corridor_set(radius: float, epsilon: float) -> DiskConfigurationSet:
    """
    Two disks between the lines x = 0 and x = 4r - 2 eps: both centers in
    [r, 3r - 2 eps].
    """
    walls = [
        Wall(disk=disk, axis="x", side=side, value=value)
        for disk in (0, 1)
        for side, value in (("lower", radius), ("upper", 3.0 * radius - 2.0 * epsilon))
    ]
    return DiskConfigurationSet(n_disks=2, radius=radius, walls=walls)


def corridor_witness(radius: float, epsilon: float, seed: int = 0) -> CorridorWitness:
    """
    Project q0 = (r - eps, 0, 3r - eps, 0) onto the corridor set.

    The projection has two minimizers (r, -b, 3r - 2 eps, b) and its mirror, with
    b = sqrt(2 r eps - eps^2), at distance 2 sqrt(r eps).

    Raises:
        InvalidInputError: Unless 0 < eps <= r/2
        ProjectionFailedError: If fewer than two minimizers or a wrong distance are found
    """
    if not (radius > 0 and 0 < epsilon <= radius / 2):
        raise InvalidInputError("the corridor needs r > 0 and 0 < eps <= r/2")
    set_ = corridor_set(radius, epsilon)
    q0 = np.array([radius - epsilon, 0.0, 3.0 * radius - epsilon, 0.0])
    projection = project_disk_config(
        set_, q0, seed=seed, starts=max(tolerance_settings.multistart, 16)
    )
    witness = CorridorWitness(
        radius=radius, epsilon=epsilon, q0=q0, feasible_set=set_, projection=projection
    )
    if not projection.converged or len(projection.nearest) < 2:
        raise ProjectionFailedError(
            f"corridor projection found {len(projection.nearest)} minimizer(s), expected 2"
        )
    if abs(projection.dist - witness.expected_distance) > CORRIDOR_TOLERANCE:
        raise ProjectionFailedError(
            f"corridor distance {projection.dist!r} differs from {witness.expected_distance!r}"
        )
    logger.info(f"corridor eps={epsilon:g}: distance {projection.dist:.9f}")
    return witness
