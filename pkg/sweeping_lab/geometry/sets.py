"""
Membership, distance, translation and Hausdorff distance for constraint sets.
"""

import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidInputError, ProjectionFailedError
from ..settings import tolerance_settings
from ..types import as_vector
from .disks import constraint_values
from .models import (
    ANALYTIC_KINDS,
    AxisBox,
    BallExterior,
    ConstraintSet,
    CrossSet,
    DiskConfigurationSet,
    FixedMotion,
    HalfSpace,
    HalfSpaceIntersection,
    LipschitzMotion,
    MovingSet,
    OscillatingMotion,
    TranslationMotion,
)

ArrayLike = Sequence[float] | NDArray[np.float64]


def member(set_: ConstraintSet, x: ArrayLike, tol_feas: float | None = None) -> bool:
    """
    Check whether ``x`` belongs to ``set_``.

    Analytic kinds use exact sign tests; polyhedra and disk configurations
    accept violations up to ``tol_feas``.

    Raises:
        DimensionMismatchError: If ``x`` does not live in the set's space
    """
    x = as_vector(x, set_.dim)
    tol = tolerance_settings.tol_feas if tol_feas is None else tol_feas

    match set_:
        case HalfSpace(normal=n, offset=b):
            return bool(np.dot(n, x) <= b)
        case AxisBox(lower=lo, upper=hi):
            return bool(np.all(lo <= x) and np.all(x <= hi))
        case BallExterior(center=c, radius=radius):
            return bool(np.linalg.norm(x - c) >= radius)
        case CrossSet(corner=c):
            return bool(x[0] <= c[0] or x[1] <= c[1])
        case HalfSpaceIntersection():
            a, b = set_.matrix()
            return bool(np.all(a @ x - b <= tol))
        case DiskConfigurationSet():
            return bool(np.all(constraint_values(set_, x) >= -tol))
    raise InvalidInputError(f"unsupported set kind {set_!r}")


def distance(set_: ConstraintSet, x: ArrayLike, seed: int = 0) -> float:
    """
    Distance d(x, C).

    Closed form for analytic kinds; polyhedra and disk configurations use the
    value of the projection oracle.

    Raises:
        DimensionMismatchError: If ``x`` does not live in the set's space
        ProjectionFailedError: If the iterative oracle does not converge
    """
    x = as_vector(x, set_.dim)

    match set_:
        case HalfSpace(normal=n, offset=b):
            return max(0.0, (float(np.dot(n, x)) - b) / float(np.linalg.norm(n)))
        case AxisBox(lower=lo, upper=hi):
            return float(np.linalg.norm(x - np.clip(x, lo, hi)))
        case BallExterior(center=c, radius=radius):
            return max(0.0, radius - float(np.linalg.norm(x - c)))
        case CrossSet(corner=c):
            return max(0.0, min(x[0] - c[0], x[1] - c[1]))
        case HalfSpaceIntersection() | DiskConfigurationSet():
            from ..projection.oracles import project

            result = project(set_, x, seed=seed)
            if not result.converged:
                raise ProjectionFailedError(
                    f"projection onto {set_.kind} did not converge after "
                    f"{result.iterations} iterations"
                )
            return result.dist
    raise InvalidInputError(f"unsupported set kind {set_!r}")


def translate(set_: ConstraintSet, delta: ArrayLike) -> ConstraintSet:
    """Return ``set_ + delta``; analytic kinds translate their parameters."""
    delta = as_vector(delta, set_.dim)

    match set_:
        case HalfSpace(normal=n, offset=b):
            return set_.model_copy(update={"offset": b + float(np.dot(n, delta))})
        case AxisBox(lower=lo, upper=hi):
            return set_.model_copy(update={"lower": _ro(lo + delta), "upper": _ro(hi + delta)})
        case BallExterior(center=c):
            return set_.model_copy(update={"center": _ro(c + delta)})
        case CrossSet(corner=c):
            return set_.model_copy(update={"corner": _ro(c + delta)})
        case HalfSpaceIntersection(half_spaces=hs):
            return set_.model_copy(
                update={"half_spaces": [translate(h, delta) for h in hs]}
            )
        case DiskConfigurationSet(walls=walls):
            blocks = delta.reshape(-1, 2)
            if not np.allclose(blocks, blocks[0], rtol=0.0, atol=0.0):
                raise InvalidInputError(
                    "a disk configuration can only be translated rigidly "
                    "(same shift for every disk)"
                )
            shift = {"x": float(blocks[0, 0]), "y": float(blocks[0, 1])}
            moved = [w.model_copy(update={"value": w.value + shift[w.axis]}) for w in walls]
            return set_.model_copy(update={"walls": moved})
    raise InvalidInputError(f"unsupported set kind {set_!r}")


def _ro(array: NDArray[np.float64]) -> NDArray[np.float64]:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def set_at(moving: MovingSet, t: float) -> ConstraintSet:
    """C(t) for the motion law of ``moving``."""
    match moving.motion:
        case FixedMotion():
            return moving.base
        case TranslationMotion(velocity=a):
            return translate(moving.base, t * a)
        case OscillatingMotion(direction=d, amplitude=amp, frequency=omega):
            return translate(moving.base, amp * math.sin(omega * t) * d)
        case LipschitzMotion(rule=rule):
            return rule(t)  # type: ignore[no-any-return]
    raise InvalidInputError(f"unsupported motion {moving.motion!r}")


def motion_speed(moving: MovingSet) -> float:
    """Lipschitz constant k of t -> C(t) for the Hausdorff distance."""
    match moving.motion:
        case FixedMotion():
            return 0.0
        case TranslationMotion(velocity=a):
            return float(np.linalg.norm(a))
        case OscillatingMotion():
            return moving.motion.lipschitz_constant
        case LipschitzMotion(k=k):
            return k
    raise InvalidInputError(f"unsupported motion {moving.motion!r}")


def hausdorff_distance(first: ConstraintSet, second: ConstraintSet) -> float:
    """
    Hausdorff distance between two translates of the same analytic set.

    Raises:
        InvalidInputError: If the sets are not translates of one analytic kind
    """
    match first, second:
        case HalfSpace(normal=n1, offset=b1), HalfSpace(normal=n2, offset=b2):
            if not _parallel(n1, n2):
                raise InvalidInputError("half-spaces with different normals")
            scale = float(np.linalg.norm(n2)) / float(np.linalg.norm(n1))
            return abs(b2 / scale - b1) / float(np.linalg.norm(n1))
        case AxisBox(lower=lo1, upper=hi1), AxisBox(lower=lo2, upper=hi2):
            shift = lo2 - lo1
            if not np.allclose(hi2 - hi1, shift, rtol=0.0, atol=1e-12):
                raise InvalidInputError("boxes are not translates of each other")
            return float(np.linalg.norm(shift))
        case BallExterior(center=c1, radius=r1), BallExterior(center=c2, radius=r2):
            if r1 != r2:
                raise InvalidInputError("ball-exteriors with different radii")
            return min(float(np.linalg.norm(c2 - c1)), r1)
        case CrossSet(corner=c1), CrossSet(corner=c2):
            return float(np.max(np.abs(c2 - c1)))
    raise InvalidInputError(
        f"no closed-form Hausdorff distance between {first.kind} and {second.kind}"
    )


def _parallel(n1: NDArray[np.float64], n2: NDArray[np.float64]) -> bool:
    cos = float(np.dot(n1, n2)) / float(np.linalg.norm(n1) * np.linalg.norm(n2))
    return cos > 1.0 - 1e-12


def feasible(set_: ConstraintSet, x: ArrayLike, tol: float | None = None) -> bool:
    """
    Membership up to ``tol``: distance for analytic kinds, constraint slack otherwise.

    States produced by floating-point projections land on the boundary only up to
    rounding, so exact sign tests are too strict for them.
    """
    tol = tolerance_settings.tol_feas if tol is None else tol
    if set_.kind in ANALYTIC_KINDS:
        return distance(set_, x) <= tol
    return member(set_, x, tol_feas=tol)
