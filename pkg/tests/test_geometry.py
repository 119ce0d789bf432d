"""
Tests for the geometry package.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from sweeping_lab.errors import DimensionMismatchError, InvalidInputError
from sweeping_lab.geometry.disks import constraint_jacobian, constraint_labels, constraint_values
from sweeping_lab.geometry.models import (
    AxisBox,
    BallExterior,
    CrossSet,
    DiskConfigurationSet,
    HalfSpace,
    HalfSpaceIntersection,
    MovingSet,
    OscillatingMotion,
    TranslationMotion,
    Wall,
)
from sweeping_lab.geometry.sets import (
    distance,
    feasible,
    hausdorff_distance,
    member,
    motion_speed,
    set_at,
    translate,
)


class TestMembership:
    """Test cases for member and feasible."""

    def test_half_space(self, lower_half_plane):
        assert member(lower_half_plane, [3.0, -1.0])
        assert not member(lower_half_plane, [3.0, 0.5])

    def test_ball_exterior(self, unit_ball_exterior):
        assert not member(unit_ball_exterior, [0.5, 0.0])
        assert member(unit_ball_exterior, [1.0, 0.0])

    @pytest.mark.parametrize(
        "point,expected",
        [
            ([1.0, 1.0], False),
            ([1.0, -1.0], True),
            ([-1.0, 1.0], True),
            ([0.0, 0.0], True),
        ],
    )
    def test_cross_set(self, cross_set, point, expected):
        assert member(cross_set, point) is expected

    def test_axis_box(self):
        box = AxisBox(lower=[0.0, 0.0], upper=[1.0, 2.0])
        assert member(box, [0.5, 2.0])
        assert not member(box, [1.5, 0.0])

    def test_polyhedron_uses_tolerance(self):
        triangle = HalfSpaceIntersection(
            half_spaces=[
                HalfSpace(normal=[-1.0, 0.0], offset=0.0),
                HalfSpace(normal=[0.0, -1.0], offset=0.0),
                HalfSpace(normal=[1.0, 1.0], offset=1.0),
            ]
        )
        assert member(triangle, [0.5, 0.5 + 1e-12])
        assert not member(triangle, [0.5, 0.6])

    def test_disk_configuration(self):
        disks = DiskConfigurationSet(n_disks=2, radius=1.0)
        assert member(disks, [0.0, 0.0, 2.0, 0.0])
        assert not member(disks, [0.0, 0.0, 1.8, 0.0])

    def test_dimension_mismatch(self, lower_half_plane):
        with pytest.raises(DimensionMismatchError):
            member(lower_half_plane, [1.0, 2.0, 3.0])

    def test_feasible_accepts_rounding_on_the_sphere(self, unit_ball_exterior):
        theta = 3.0 * math.pi / 4.0
        point = [math.cos(theta), math.sin(theta)]
        assert feasible(unit_ball_exterior, point)


class TestDistance:
    """Test cases for distance."""

    def test_half_space(self, lower_half_plane):
        assert distance(lower_half_plane, [3.0, 2.0]) == pytest.approx(2.0)

    def test_ball_exterior(self, unit_ball_exterior):
        assert distance(unit_ball_exterior, [0.5, 0.0]) == pytest.approx(0.5)

    def test_inside_is_zero(self, cross_set):
        assert distance(cross_set, [1.0, -1.0]) == 0.0

    def test_cross_set(self, cross_set):
        assert distance(cross_set, [1.0, 3.0]) == pytest.approx(1.0)

    def test_corridor_configuration(self):
        walls = [
            Wall(disk=disk, axis="x", side=side, value=value)
            for disk in (0, 1)
            for side, value in (("lower", 1.0), ("upper", 2.98))
        ]
        corridor = DiskConfigurationSet(n_disks=2, radius=1.0, walls=walls)
        assert distance(corridor, [0.99, 0.0, 2.99, 0.0]) == pytest.approx(0.2, abs=1e-6)


class TestTranslation:
    """Test cases for translate, set_at and hausdorff_distance."""

    def test_fixed_set(self, lower_half_plane):
        assert set_at(MovingSet(base=lower_half_plane), 0.7) is lower_half_plane

    def test_translating_half_plane(self, lower_half_plane):
        moving = MovingSet(
            base=lower_half_plane, motion=TranslationMotion(velocity=[0.0, -1.0])
        )
        moved = set_at(moving, 0.5)
        assert isinstance(moved, HalfSpace)
        assert moved.offset == pytest.approx(-0.5)
        assert motion_speed(moving) == pytest.approx(1.0)

    def test_translating_ball_exterior(self, unit_ball_exterior):
        moving = MovingSet(
            base=unit_ball_exterior, motion=TranslationMotion(velocity=[1.0, 0.0])
        )
        moved = set_at(moving, 2.0)
        assert isinstance(moved, BallExterior)
        np.testing.assert_allclose(moved.center, [2.0, 0.0])

    def test_oscillation_speed(self, unit_ball_exterior):
        moving = MovingSet(
            base=unit_ball_exterior,
            motion=OscillatingMotion(direction=[1.0, 0.0], amplitude=0.2, frequency=3.0),
        )
        assert motion_speed(moving) == pytest.approx(0.6)

    def test_motion_dimension_checked(self, unit_ball_exterior):
        with pytest.raises(ValidationError):
            MovingSet(
                base=unit_ball_exterior, motion=TranslationMotion(velocity=[1.0, 0.0, 0.0])
            )

    def test_rigid_translation_of_disks(self):
        disks = DiskConfigurationSet(
            n_disks=2, radius=1.0, walls=[Wall(disk=0, axis="x", side="lower", value=0.0)]
        )
        moved = translate(disks, [1.0, 0.0, 1.0, 0.0])
        assert isinstance(moved, DiskConfigurationSet)
        assert moved.walls[0].value == pytest.approx(1.0)
        with pytest.raises(InvalidInputError):
            translate(disks, [1.0, 0.0, 0.0, 0.0])

    @pytest.mark.parametrize(
        "first,second,expected",
        [
            (
                HalfSpace(normal=[0.0, 1.0], offset=0.0),
                HalfSpace(normal=[0.0, 2.0], offset=-1.0),
                0.5,
            ),
            (
                AxisBox(lower=[0.0, 0.0], upper=[1.0, 1.0]),
                AxisBox(lower=[3.0, 4.0], upper=[4.0, 5.0]),
                5.0,
            ),
            (
                BallExterior(center=[0.0, 0.0], radius=1.0),
                BallExterior(center=[0.3, 0.4], radius=1.0),
                0.5,
            ),
            (
                BallExterior(center=[0.0, 0.0], radius=1.0),
                BallExterior(center=[3.0, 4.0], radius=1.0),
                1.0,
            ),
            (CrossSet(), CrossSet(corner=[0.5, -2.0]), 2.0),
        ],
    )
    def test_hausdorff_distance(self, first, second, expected):
        assert hausdorff_distance(first, second) == pytest.approx(expected)

    def test_hausdorff_distance_rejects_different_kinds(self, lower_half_plane, cross_set):
        with pytest.raises(InvalidInputError):
            hausdorff_distance(lower_half_plane, cross_set)


class TestSetModels:
    """Test cases for set validation."""

    def test_zero_normal_rejected(self):
        with pytest.raises(ValidationError):
            HalfSpace(normal=[0.0, 0.0], offset=1.0)

    def test_empty_box_rejected(self):
        with pytest.raises(ValidationError):
            AxisBox(lower=[1.0], upper=[0.0])

    def test_empty_polyhedron_rejected(self):
        with pytest.raises(ValidationError):
            HalfSpaceIntersection(
                half_spaces=[
                    HalfSpace(normal=[1.0], offset=0.0),
                    HalfSpace(normal=[-1.0], offset=-1.0),
                ]
            )

    def test_ball_exterior_prox_constant_defaults_to_radius(self):
        assert BallExterior(center=[0.0, 0.0], radius=2.0).prox_constant == 2.0
        with pytest.raises(ValidationError):
            BallExterior(center=[0.0, 0.0], radius=1.0, prox_constant=2.0)

    def test_walls_must_leave_room(self):
        with pytest.raises(ValidationError):
            DiskConfigurationSet(
                n_disks=1,
                radius=1.0,
                walls=[
                    Wall(disk=0, axis="x", side="lower", value=2.0),
                    Wall(disk=0, axis="x", side="upper", value=1.0),
                ],
            )

    def test_set_parses_from_kind_tag(self):
        moving = MovingSet.model_validate(
            {"base": {"kind": "cross-set"}, "motion": {"kind": "fixed"}}
        )
        assert isinstance(moving.base, CrossSet)


class TestDiskKernels:
    """Test cases for disk constraint values and gradients."""

    def test_values_and_labels(self):
        disks = DiskConfigurationSet(
            n_disks=2, radius=1.0, walls=[Wall(disk=1, axis="y", side="upper", value=1.0)]
        )
        q = np.array([0.0, 0.0, 3.0, 0.5])
        np.testing.assert_allclose(
            constraint_values(disks, q), [math.hypot(3.0, 0.5) - 2.0, 0.5]
        )
        assert constraint_labels(disks) == ["contact(0,1)", "wall(disk=1,y <= 1.0)"]

    def test_touching_gradient(self):
        disks = DiskConfigurationSet(n_disks=2, radius=1.0)
        jac = constraint_jacobian(disks, np.array([0.0, 0.0, 2.0, 0.0]))
        np.testing.assert_allclose(jac, [[-1.0, 0.0, 1.0, 0.0]])

    def test_coincident_centers(self):
        disks = DiskConfigurationSet(n_disks=2, radius=1.0)
        with pytest.raises(InvalidInputError):
            constraint_jacobian(disks, np.array([1.0, 1.0, 1.0, 1.0]))
