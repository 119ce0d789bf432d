"""
Tests for the projection package.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from sweeping_lab.catchup.models import ConstantField
from sweeping_lab.crowd.simulation import corridor_set
from sweeping_lab.errors import DimensionMismatchError, InvalidInputError
from sweeping_lab.geometry.models import (
    AxisBox,
    DiskConfigurationSet,
    HalfSpace,
    HalfSpaceIntersection,
)
from sweeping_lab.projection.cone import project_cone
from sweeping_lab.projection.models import ProjectionResult
from sweeping_lab.projection.oracles import (
    certify_directional_prox,
    in_gamma_r,
    project,
    project_disk_config,
    project_normal_cone,
)


class TestClosedFormProjection:
    """Test cases for project on analytic kinds."""

    def test_half_space(self, lower_half_plane):
        result = project(lower_half_plane, [3.0, 2.0])
        assert result.converged
        np.testing.assert_allclose(result.nearest[0], [3.0, 0.0])
        assert result.dist == pytest.approx(2.0)
        assert not result.ambiguous

    def test_cross_set_diagonal_is_ambiguous(self, cross_set):
        result = project(cross_set, [1.0, 1.0])
        assert result.ambiguous
        np.testing.assert_allclose(np.array(result.nearest), [[0.0, 1.0], [1.0, 0.0]])
        assert result.dist == pytest.approx(1.0)

    def test_ball_exterior_radial(self, unit_ball_exterior):
        result = project(unit_ball_exterior, [0.5, 0.0])
        np.testing.assert_allclose(result.nearest[0], [1.0, 0.0])
        assert result.dist == pytest.approx(0.5)

    def test_ball_exterior_center_reports_axis_points(self, unit_ball_exterior):
        result = project(unit_ball_exterior, [0.0, 0.0])
        assert len(result.nearest) == 4
        assert result.dist == pytest.approx(1.0)

    def test_box_clips(self):
        box = AxisBox(lower=[0.0, 0.0], upper=[1.0, 1.0])
        np.testing.assert_allclose(project(box, [2.0, -1.0]).nearest[0], [1.0, 0.0])

    def test_feasible_point_is_fixed(self, cross_set):
        result = project(cross_set, [-2.0, 5.0])
        np.testing.assert_allclose(result.nearest[0], [-2.0, 5.0])
        assert result.dist == 0.0


class TestIterativeProjection:
    """Test cases for polyhedra and disk configurations."""

    def test_polyhedron_matches_closed_form(self):
        corner = HalfSpaceIntersection(
            half_spaces=[
                HalfSpace(normal=[1.0, 0.0], offset=0.0),
                HalfSpace(normal=[0.0, 1.0], offset=0.0),
            ]
        )
        result = project(corner, [1.0, 2.0])
        assert result.converged
        np.testing.assert_allclose(result.nearest[0], [0.0, 0.0], atol=1e-8)
        assert result.multipliers is not None
        assert np.all(result.multipliers >= -1e-12)

    def test_feasible_configuration(self):
        disks = DiskConfigurationSet(n_disks=2, radius=1.0)
        result = project_disk_config(disks, [0.0, 0.0, 3.0, 0.0])
        assert result.dist == 0.0
        np.testing.assert_allclose(result.nearest[0], [0.0, 0.0, 3.0, 0.0])

    def test_overlapping_pair_separates_symmetrically(self):
        disks = DiskConfigurationSet(n_disks=2, radius=1.0)
        result = project_disk_config(disks, [0.0, 0.0, 1.8, 0.0])
        assert result.converged
        np.testing.assert_allclose(result.nearest[0], [-0.1, 0.0, 1.9, 0.0], atol=1e-7)
        assert result.dist == pytest.approx(math.sqrt(0.02), abs=1e-7)

    def test_corridor_has_two_minimizers(self):
        set_ = corridor_set(1.0, 0.01)
        result = project_disk_config(set_, [0.99, 0.0, 2.99, 0.0], seed=0, starts=16)
        assert result.converged
        assert len(result.nearest) == 2
        b = math.sqrt(2.0 * 0.01 - 0.01**2)
        np.testing.assert_allclose(
            np.array(result.nearest),
            [[1.0, -b, 2.98, b], [1.0, b, 2.98, -b]],
            atol=1e-6,
        )
        assert result.dist == pytest.approx(0.2, abs=1e-6)

    def test_same_seed_same_answer(self):
        set_ = corridor_set(1.0, 0.01)
        first = project_disk_config(set_, [0.99, 0.0, 2.99, 0.0], seed=3)
        second = project_disk_config(set_, [0.99, 0.0, 2.99, 0.0], seed=3)
        np.testing.assert_array_equal(np.array(first.nearest), np.array(second.nearest))


class TestConeProjection:
    """Test cases for project_cone."""

    def test_head_on_contact(self):
        v, lambdas = project_cone([[-1.0, 0.0, 1.0, 0.0]], [1.0, 0.0, -1.0, 0.0])
        np.testing.assert_allclose(v, np.zeros(4), atol=1e-12)
        np.testing.assert_allclose(lambdas, [1.0])

    def test_no_gradients(self):
        v, lambdas = project_cone(np.zeros((0, 3)), [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(v, [1.0, 2.0, 3.0])
        assert lambdas.size == 0

    def test_inactive_constraint(self):
        v, lambdas = project_cone([[0.0, 1.0]], [1.0, 3.0])
        np.testing.assert_allclose(v, [1.0, 3.0])
        np.testing.assert_allclose(lambdas, [0.0])

    def test_polar_decomposition(self):
        rng = np.random.default_rng(7)
        gradients = rng.standard_normal((4, 3))
        u = rng.standard_normal(3)
        v, lambdas = project_cone(gradients, u)
        assert np.all(gradients @ v >= -1e-10)
        assert np.all(lambdas >= 0.0)
        assert float(np.dot(v, u - v)) == pytest.approx(0.0, abs=1e-10)

    def test_zero_gradient_rejected(self):
        with pytest.raises(InvalidInputError):
            project_cone([[0.0, 0.0]], [1.0, 1.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            project_cone([[1.0, 0.0, 0.0]], [1.0, 1.0])


class TestGoodDirections:
    """Test cases for in_gamma_r."""

    def test_convex_set_any_scale(self, lower_half_plane):
        assert in_gamma_r(lower_half_plane, [0.0, 0.0], [0.0, 1.0], 100.0) is True

    @pytest.mark.parametrize("r,expected", [(0.9, True), (1.1, False)])
    def test_ball_exterior_scale(self, unit_ball_exterior, r, expected):
        assert in_gamma_r(unit_ball_exterior, [1.0, 0.0], [-1.0, 0.0], r) is expected

    def test_zero_direction(self, cross_set):
        assert in_gamma_r(cross_set, [0.0, 0.0], [0.0, 0.0], 5.0) is True

    def test_point_outside_rejected(self, unit_ball_exterior):
        with pytest.raises(InvalidInputError):
            in_gamma_r(unit_ball_exterior, [0.5, 0.0], [1.0, 0.0], 0.5)


class TestDirectionalProxRegularity:
    """Test cases for certify_directional_prox."""

    def test_cross_set_descending_field(self, cross_set):
        sample = [[0.0, 0.0], [0.0, 2.0], [3.0, 0.0], [-1.0, -1.0]]
        report = certify_directional_prox(
            cross_set, ConstantField(value=[-1.0, -1.0]), 1e6, sample, [0.5, 1.0, 10.0]
        )
        assert report.certified
        assert report.samples_checked == 12

    def test_cross_set_ascending_field_fails_at_the_corner(self, cross_set):
        report = certify_directional_prox(
            cross_set, ConstantField(value=[1.0, 1.0]), 10.0, [[0.0, 0.0]], [1.0]
        )
        assert not report.certified
        assert report.violations[0].stage == "a"

    def test_ball_exterior_any_field(self, unit_ball_exterior):
        angles = np.linspace(0.0, 2.0 * math.pi, 12, endpoint=False)
        sample = [[math.cos(a), math.sin(a)] for a in angles]
        report = certify_directional_prox(
            unit_ball_exterior, ConstantField(value=[0.3, -0.7]), 0.5, sample, [0.1, 0.3, 0.45]
        )
        assert report.certified

    def test_scales_must_lie_below_r(self, cross_set):
        with pytest.raises(InvalidInputError):
            certify_directional_prox(
                cross_set, ConstantField(value=[-1.0, -1.0]), 1.0, [[0.0, 0.0]], [2.0]
            )


class TestNormalCone:
    """Test cases for project_normal_cone."""

    def test_interior_point(self, lower_half_plane):
        np.testing.assert_array_equal(
            project_normal_cone(lower_half_plane, [0.0, -1.0], [1.0, 1.0]), [0.0, 0.0]
        )

    def test_half_plane_boundary(self, lower_half_plane):
        np.testing.assert_allclose(
            project_normal_cone(lower_half_plane, [0.0, 0.0], [1.0, 1.0]), [0.0, 1.0]
        )

    def test_ball_exterior_boundary(self, unit_ball_exterior):
        np.testing.assert_allclose(
            project_normal_cone(unit_ball_exterior, [1.0, 0.0], [-2.0, 1.0]), [-2.0, 0.0]
        )

    def test_disk_contact(self):
        disks = DiskConfigurationSet(n_disks=2, radius=1.0)
        normal = project_normal_cone(disks, [0.0, 0.0, 2.0, 0.0], [1.0, 0.0, -1.0, 0.0])
        np.testing.assert_allclose(normal, [1.0, 0.0, -1.0, 0.0], atol=1e-12)


class TestProjectionResult:
    """Test cases for ProjectionResult validation."""

    def test_converged_needs_a_nearest_point(self):
        with pytest.raises(ValidationError):
            ProjectionResult(nearest=[], dist=0.0, converged=True, iterations=3)

    def test_failed_projection_may_be_empty(self):
        result = ProjectionResult(nearest=[], dist=0.0, converged=False, iterations=3)
        assert not result.ambiguous
