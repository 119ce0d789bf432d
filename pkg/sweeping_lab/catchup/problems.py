"""
Standard problems with known solutions, shared by the verification suites.
"""

import math

import numpy as np

from ..geometry.models import (
    BallExterior,
    FixedMotion,
    HalfSpace,
    MovingSet,
    TranslationMotion,
)
from .models import ConstantField, LinearField, Problem


def half_plane_slide(horizon: float = 1.0) -> Problem:
    """{x_2 <= 0}, f = (1, 1), u0 = 0: the state slides along the boundary, u(t) = (t, 0)."""
    return Problem(
        moving_set=MovingSet(base=HalfSpace(normal=[0.0, 1.0], offset=0.0)),
        field=ConstantField(value=[1.0, 1.0]),
        u0=[0.0, 0.0],
        horizon=horizon,
        r=1.0,
    )


def ball_exterior_slide(
    theta0: float = 3.0 * math.pi / 4.0, horizon: float = 0.5, r: float = 0.5
) -> Problem:
    """Outside of the unit disk, f = (1, 0), u0 on the circle at angle ``theta0``."""
    return Problem(
        moving_set=MovingSet(base=BallExterior(center=[0.0, 0.0], radius=1.0)),
        field=ConstantField(value=[1.0, 0.0]),
        u0=[math.cos(theta0), math.sin(theta0)],
        horizon=horizon,
        r=r,
    )


def translating_half_plane(horizon: float = 1.0) -> Problem:
    """C(t) = {x_2 <= -t}, f = 0, u0 = 0: the state is pushed down, u(t) = (0, -t)."""
    return Problem(
        moving_set=MovingSet(
            base=HalfSpace(normal=[0.0, 1.0], offset=0.0),
            motion=TranslationMotion(velocity=[0.0, -1.0]),
        ),
        field=ConstantField(value=np.zeros(2)),
        u0=[0.0, 0.0],
        horizon=horizon,
        r=1.0,
    )


def interior_drift(horizon: float = 1.0) -> Problem:
    """Rotating linear field far from the boundary of a half-plane: the constraint never acts."""
    return Problem(
        moving_set=MovingSet(base=HalfSpace(normal=[0.0, 1.0], offset=10.0), motion=FixedMotion()),
        field=LinearField(matrix=[[0.0, -1.0], [1.0, 0.0]], shift=[1.0, 0.0]),
        u0=[0.0, 0.0],
        horizon=horizon,
        r=1.0,
    )
