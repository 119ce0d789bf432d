"""
Closed-form solutions used as references by convergence studies.

Both cases take a constant perturbation. A half-space gives free flight until
the boundary is hit, then a tangential slide. A ball exterior gives free flight,
then a slide along the sphere while the field still points inward, then free
flight again.
"""

import math
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

from ..geometry.models import BallExterior, FixedMotion, HalfSpace, TranslationMotion
from .models import ConstantField, Problem

Array = NDArray[np.float64]
Reference = Callable[[float], Array]


def half_space_reference(base: HalfSpace, u0: Array, f: Array) -> Reference:
    """Exact solution for a fixed half-space and constant field ``f``."""
    unit = base.normal / float(np.linalg.norm(base.normal))
    slack = float(np.dot(unit, u0)) - base.offset / float(np.linalg.norm(base.normal))
    f_normal = float(np.dot(unit, f))
    tangential = f - f_normal * unit
    hit = math.inf if f_normal <= 0.0 else max(0.0, -slack / f_normal)

    def solution(t: float) -> Array:
        if t <= hit:
            return u0 + t * f
        return u0 + hit * f + (t - hit) * tangential

    return solution


def ball_exterior_reference(base: BallExterior, u0: Array, f: Array) -> Reference:
    """
    Exact solution for a fixed ball exterior and constant field ``f``.

    On the sphere, the angle psi between the outer normal and f obeys
    psi' = -|f| sin(psi) / R, so tan(psi/2) decays like exp(-|f| t / R)
    until psi reaches pi/2 and the state leaves the sphere.
    """
    c, radius = base.center, base.radius
    speed = float(np.linalg.norm(f))
    if speed == 0.0:
        return lambda t: np.array(u0)
    f_hat = f / speed

    # Free flight until the first inward crossing of the sphere.
    offset = u0 - c
    b = float(np.dot(offset, f))
    disc = b * b - speed**2 * (float(np.dot(offset, offset)) - radius**2)
    if b >= 0.0 or disc < 0.0:
        return lambda t: u0 + t * f
    hit = max(0.0, (-b - math.sqrt(disc)) / speed**2)
    contact = u0 + hit * f

    e0 = (contact - c) / float(np.linalg.norm(contact - c))
    cos0 = float(np.clip(np.dot(e0, f_hat), -1.0, 1.0))
    psi0 = math.acos(cos0)
    ortho = e0 - cos0 * f_hat
    ortho_norm = float(np.linalg.norm(ortho))
    if ortho_norm <= 1e-15:
        # Field points straight at the center: the state never moves again.
        return lambda t: u0 + min(t, hit) * f
    w = ortho / ortho_norm
    release = hit + (radius / speed) * math.log(math.tan(psi0 / 2.0))
    rate = speed / radius

    def on_sphere(tau: float) -> Array:
        psi = 2.0 * math.atan(math.tan(psi0 / 2.0) * math.exp(-rate * tau))
        return c + radius * (math.cos(psi) * f_hat + math.sin(psi) * w)

    exit_point = on_sphere(release - hit)

    def solution(t: float) -> Array:
        if t <= hit:
            return u0 + t * f
        if t <= release:
            return on_sphere(t - hit)
        return exit_point + (t - release) * f

    return solution


def closed_form_reference(problem: Problem) -> Reference | None:
    """Closed-form solution of ``problem`` when one is known, else None."""
    if not isinstance(problem.field, ConstantField):
        return None
    f = np.array(problem.field.value)
    u0 = np.array(problem.u0)
    base, motion = problem.moving_set.base, problem.moving_set.motion

    match base, motion:
        case HalfSpace(), FixedMotion():
            return half_space_reference(base, u0, f)
        case HalfSpace(), TranslationMotion(velocity=a):
            moving_frame = half_space_reference(base, u0, f - a)
            return lambda t: moving_frame(t) + t * a
        case BallExterior(), FixedMotion():
            return ball_exterior_reference(base, u0, f)
    return None
