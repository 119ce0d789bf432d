"""
Named verification suites run by ``verify``.
"""

import logging
import math
from collections.abc import Callable
from typing import Final, NamedTuple

import numpy as np

from ..catchup.integrator import convergence_study, integrate
from ..catchup.models import Trajectory
from ..catchup.problems import (
    ball_exterior_slide,
    half_plane_slide,
    interior_drift,
    translating_half_plane,
)
from ..eikonal.fast_marching import rasterize_room
from ..eikonal.models import Rectangle, Room, Segment
from ..errors import UnknownSuiteError
from ..geometry.models import BallExterior, HalfSpace, MovingSet, OscillatingMotion
from .checks import (
    audit_trajectory,
    check_convergence_order,
    check_corridor_scaling,
    check_cone_projection_bruteforce,
    check_duality_identities,
    check_eikonal_oracle,
    check_equation_equivalence,
    check_gamma_scaling,
    check_hypomonotonicity,
    check_lipschitz_motion,
    check_moreau_decomposition,
    check_refinement_ratios,
    check_stability,
    sample_normal_pairs,
)
from .models import CheckReport, SuiteReport

CONVERGENCE_STEPS: Final[tuple[int, ...]] = (40, 80, 160, 320, 640)
EQUIVALENCE_STEPS: Final[tuple[int, ...]] = (50, 100, 200, 400)
HYPOMONOTONE_PAIRS: Final[int] = 10_000
CONTROL_INFLATION: Final[float] = 10.0
CONTROL_DELTA_SCALE: Final[float] = 3.0

logger = logging.getLogger(__name__)


class Suite(NamedTuple):
    run: Callable[[int], list[CheckReport]]
    negative_control: bool = False


def unit_ball_exterior() -> BallExterior:
    return BallExterior(center=[0.0, 0.0], radius=1.0)


def u_obstacle_room(nodes: int = 200) -> Room:
    """
    Square room with its left side as exit and a U-shaped obstacle whose cup opens
    toward the exit; the base leaves a three-node corridor along the right wall.
    """
    side = float(nodes - 1)
    base_x = side - 3.0
    low, high = 0.25 * side, 0.75 * side
    return Room(
        width=side,
        height=side,
        spacing=1.0,
        exits=[Segment(start=[0.0, 0.0], end=[0.0, side])],
        obstacles=[
            Rectangle(x_min=base_x - 2.0, y_min=low, x_max=base_x, y_max=high),
            Rectangle(x_min=0.6 * side, y_min=low, x_max=base_x, y_max=low + 2.0),
            Rectangle(x_min=0.6 * side, y_min=high - 2.0, x_max=base_x, y_max=high),
        ],
    )


def scaled_deltas(trajectory: Trajectory, factor: float) -> Trajectory:
    """Copy of ``trajectory`` with every Delta^i multiplied by ``factor``."""
    return trajectory.model_copy(update={"deltas": trajectory.deltas * factor})


def _hypomonotonicity(seed: int) -> list[CheckReport]:
    ball = unit_ball_exterior()
    half_space = HalfSpace(normal=[0.0, 1.0], offset=0.0)
    return [
        check_hypomonotonicity(ball, sample_normal_pairs(ball, HYPOMONOTONE_PAIRS, seed)),
        check_hypomonotonicity(
            half_space,
            sample_normal_pairs(half_space, HYPOMONOTONE_PAIRS, seed),
            name="monotonicity",
        ),
    ]


def _hypomonotonicity_control(seed: int) -> list[CheckReport]:
    ball = unit_ball_exterior()
    return [
        check_hypomonotonicity(
            ball,
            sample_normal_pairs(ball, HYPOMONOTONE_PAIRS, seed),
            eta=CONTROL_INFLATION * ball.prox_constant,
            name="hypomonotonicity-inflated-eta",
        )
    ]


def _moreau(seed: int) -> list[CheckReport]:
    return [check_moreau_decomposition(seed=seed), check_cone_projection_bruteforce(seed=seed)]


def _gamma_scaling(seed: int) -> list[CheckReport]:
    return [check_gamma_scaling(unit_ball_exterior(), seed=seed)]


def _duality(seed: int) -> list[CheckReport]:
    return [check_duality_identities(p, seed=seed) for p in (2.0, 4.0, 6.0)]


def _corridor(seed: int) -> list[CheckReport]:
    return [check_corridor_scaling(seed=seed)]


def _eikonal(seed: int) -> list[CheckReport]:
    room = u_obstacle_room()
    return [check_eikonal_oracle(rasterize_room(room), room.spacing)]


def _equivalence(seed: int) -> list[CheckReport]:
    slide = ball_exterior_slide()
    reports = [
        check_equation_equivalence(
            integrate(slide, n, seed=seed), slide.moving_set.base, slide.field
        )
        for n in EQUIVALENCE_STEPS
    ]
    residuals = [float(r.details["max_residual"] or 0.0) for r in reports]
    flat = half_plane_slide()
    drift = interior_drift()
    return [
        *reports,
        check_refinement_ratios("equivalence-halving", residuals),
        check_equation_equivalence(integrate(flat, 100, seed=seed), flat.moving_set.base, flat.field),
        check_equation_equivalence(integrate(drift, 100, seed=seed), drift.moving_set.base, drift.field),
    ]


def _stability(seed: int) -> list[CheckReport]:
    slide = ball_exterior_slide()
    theta = 3.0 * math.pi / 4.0
    nearby = [math.cos(theta + 0.01), math.sin(theta + 0.01)]
    return [
        check_stability(half_plane_slide(), [0.0, 0.0], [0.1, 0.0], 100, seed=seed),
        check_stability(
            slide, slide.u0, nearby, 200, a=math.exp(slide.horizon) * (1.0 + 1e-2), seed=seed
        ),
    ]


def _convergence(seed: int) -> list[CheckReport]:
    return [
        check_convergence_order(convergence_study(ball_exterior_slide(), CONVERGENCE_STEPS, seed)),
        check_convergence_order(convergence_study(half_plane_slide(), (10, 20, 40), seed)),
    ]


def _audit(seed: int) -> list[CheckReport]:
    reports = []
    for problem, n in (
        (half_plane_slide(), 100),
        (ball_exterior_slide(), 200),
        (translating_half_plane(), 100),
        (interior_drift(), 100),
    ):
        reports.append(audit_trajectory(integrate(problem, n, seed=seed), problem, seed=seed))
    oscillating = MovingSet(
        base=unit_ball_exterior(),
        motion=OscillatingMotion(direction=[1.0, 0.0], amplitude=0.2, frequency=3.0),
    )
    reports.append(check_lipschitz_motion(oscillating, list(np.linspace(0.0, 2.0, 21))))
    reports.append(
        check_lipschitz_motion(translating_half_plane().moving_set, list(np.linspace(0.0, 1.0, 11)))
    )
    return reports


def _audit_control(seed: int) -> list[CheckReport]:
    slide = ball_exterior_slide()
    trajectory = integrate(slide, 100, seed=seed)
    return [audit_trajectory(scaled_deltas(trajectory, CONTROL_DELTA_SCALE), slide, seed=seed)]


SUITES: Final[dict[str, Suite]] = {
    "hypomonotonicity": Suite(_hypomonotonicity),
    "hypomonotonicity-control": Suite(_hypomonotonicity_control, negative_control=True),
    "moreau": Suite(_moreau),
    "gamma-scaling": Suite(_gamma_scaling),
    "duality": Suite(_duality),
    "corridor": Suite(_corridor),
    "eikonal": Suite(_eikonal),
    "equivalence": Suite(_equivalence),
    "stability": Suite(_stability),
    "convergence": Suite(_convergence),
    "audit": Suite(_audit),
    "audit-control": Suite(_audit_control, negative_control=True),
}

ALL_SUITES: Final[str] = "all"


def suite_names(name: str) -> list[str]:
    """
    Expand ``name`` into concrete suites; ``all`` is every suite but the negative controls.

    Raises:
        UnknownSuiteError: If ``name`` is not a known suite
    """
    if name == ALL_SUITES:
        return [key for key, suite in SUITES.items() if not suite.negative_control]
    if name not in SUITES:
        raise UnknownSuiteError(
            f"unknown suite {name!r}; choose one of {', '.join([*SUITES, ALL_SUITES])}"
        )
    return [name]


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    """
    Run one concrete suite.

    Raises:
        UnknownSuiteError: If ``name`` is not a concrete suite
    """
    if name not in SUITES:
        suite_names(name)
        raise UnknownSuiteError(f"{name!r} expands to several suites, run them one by one")
    suite = SUITES[name]
    report = SuiteReport(suite=name, reports=suite.run(seed), negative_control=suite.negative_control)
    logger.info(
        f"suite {name}: {'passed' if report.passed else 'failed'} "
        f"({sum(not r.passed for r in report.reports)} of {len(report.reports)} checks failed)"
    )
    return report
