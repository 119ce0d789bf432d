"""
Tests for the numerical checks and the verification suites.
"""

import math

import numpy as np
import pytest

from sweeping_lab.analysis.checks import (
    audit_trajectory,
    brute_force_cone_projection,
    check_cone_projection_bruteforce,
    check_convergence_order,
    check_corridor_scaling,
    check_duality_identities,
    check_equation_equivalence,
    check_gamma_scaling,
    check_hypomonotonicity,
    check_lipschitz_motion,
    check_moreau_decomposition,
    check_refinement_ratios,
    check_stability,
    sample_normal_pairs,
)
from sweeping_lab.analysis.models import MAX_RECORDED_VIOLATIONS, ReportBuilder
from sweeping_lab.analysis.suites import (
    ALL_SUITES,
    SUITES,
    run_suite,
    scaled_deltas,
    suite_names,
    u_obstacle_room,
)
from sweeping_lab.catchup.integrator import integrate
from sweeping_lab.catchup.models import ConstantField, ConvergenceRow, ConvergenceTable, Problem
from sweeping_lab.catchup.problems import (
    ball_exterior_slide,
    half_plane_slide,
    translating_half_plane,
)
from sweeping_lab.crowd.models import DiskConfiguration
from sweeping_lab.eikonal.fast_marching import rasterize_room
from sweeping_lab.eikonal.models import OBSTACLE
from sweeping_lab.errors import InvalidInputError, UnknownSuiteError
from sweeping_lab.geometry.models import MovingSet
from sweeping_lab.projection.cone import project_cone

REGULAR_SUITES = [name for name, suite in SUITES.items() if not suite.negative_control]
CONTROL_SUITES = [name for name, suite in SUITES.items() if suite.negative_control]


class TestReportBuilder:
    """Test cases for ReportBuilder."""

    def test_tolerance(self):
        builder = ReportBuilder("demo", tolerance=1e-9)
        assert builder.record(0.5, "fine")
        assert builder.record(-1e-10, "within tolerance")
        assert not builder.record(-1.0, "violated", [1.0, 2.0])
        report = builder.build(details={"x": 1.0})
        assert report.samples == 3
        assert report.violation_count == 1
        assert report.worst_margin == -1.0
        assert report.violations[0].inputs == [1.0, 2.0]
        assert not report.passed

    def test_recorded_violations_are_capped(self):
        builder = ReportBuilder("many")
        for _ in range(MAX_RECORDED_VIOLATIONS + 5):
            builder.record(-1.0, "bad")
        report = builder.build()
        assert report.violation_count == MAX_RECORDED_VIOLATIONS + 5
        assert len(report.violations) == MAX_RECORDED_VIOLATIONS

    def test_empty_report_passes(self):
        report = ReportBuilder("nothing").build()
        assert report.passed
        assert report.worst_margin is None


class TestHypomonotonicity:
    """Test cases for the normal cone inequality."""

    def test_ball_exterior(self, unit_ball_exterior):
        pairs = sample_normal_pairs(unit_ball_exterior, 500, seed=1)
        assert check_hypomonotonicity(unit_ball_exterior, pairs).passed

    def test_inflated_eta_is_violated(self, unit_ball_exterior):
        pairs = sample_normal_pairs(unit_ball_exterior, 500, seed=1)
        report = check_hypomonotonicity(unit_ball_exterior, pairs, eta=10.0)
        assert not report.passed
        assert report.violation_count > 0

    def test_half_space_is_monotone(self, lower_half_plane):
        pairs = sample_normal_pairs(lower_half_plane, 500)
        report = check_hypomonotonicity(lower_half_plane, pairs)
        assert report.passed
        assert math.isinf(report.details["eta"])

    def test_samples_lie_on_the_boundary(self, unit_ball_exterior):
        for z1, zeta1, z2, _ in sample_normal_pairs(unit_ball_exterior, 20):
            assert float(np.linalg.norm(z1)) == pytest.approx(1.0)
            assert float(np.dot(zeta1, z1)) <= 0.0

    def test_no_sampler(self, cross_set):
        with pytest.raises(InvalidInputError):
            sample_normal_pairs(cross_set, 3)


class TestTrajectoryChecks:
    """Test cases for audit, equivalence and stability."""

    def test_audit_passes(self):
        problem = ball_exterior_slide()
        report = audit_trajectory(integrate(problem, 100), problem)
        assert report.passed
        assert report.details["max_delta"] <= 1.0 + 1e-9

    def test_audit_of_moving_set(self):
        problem = translating_half_plane()
        assert audit_trajectory(integrate(problem, 50), problem).passed

    def test_disk_audit_checks_grid_points_only(self):
        c0 = DiskConfiguration(q=[0.0, 0.0, 1.5, 0.0], radius=0.5)
        problem = Problem(
            moving_set=MovingSet(base=c0.feasible_set),
            field=ConstantField(value=[1.0, 0.0, 0.0, 0.0]),
            u0=c0.q,
            horizon=1.0,
            r=0.5,
        )
        report = audit_trajectory(integrate(problem, 20), problem)
        assert report.passed
        assert report.samples == 4 * 20
        assert report.surrogate is not None
        assert "feasibility at grid points only" in report.surrogate

    def test_inflated_deltas_fail_the_audit(self):
        problem = ball_exterior_slide()
        trajectory = scaled_deltas(integrate(problem, 100), 3.0)
        assert not audit_trajectory(trajectory, problem).passed

    def test_equation_residual_halves(self):
        problem = ball_exterior_slide()
        residuals = []
        for n in (50, 100, 200, 400):
            report = check_equation_equivalence(
                integrate(problem, n), problem.moving_set.base, problem.field
            )
            assert report.passed
            residuals.append(report.details["max_residual"])
        assert check_refinement_ratios("halving", residuals).passed

    def test_stability(self):
        report = check_stability(half_plane_slide(), [0.0, 0.0], [0.1, 0.0], 50)
        assert report.passed
        assert report.details["ratio"] == pytest.approx(1.0)

    def test_stability_constant_too_small(self):
        report = check_stability(half_plane_slide(), [0.0, 0.0], [0.1, 0.0], 50, a=0.5)
        assert not report.passed


class TestConeChecks:
    """Test cases for the Moreau decomposition and cone projection checks."""

    def test_moreau_decomposition(self):
        assert check_moreau_decomposition(count=100, seed=3).passed

    def test_bruteforce_agreement(self):
        assert check_cone_projection_bruteforce(count=100, seed=3).passed

    def test_bruteforce_matches_nnls(self):
        gradients = np.array([[1.0, 0.0], [0.0, 1.0]])
        u = np.array([-1.0, 2.0])
        np.testing.assert_allclose(brute_force_cone_projection(gradients, u), [0.0, 2.0])
        np.testing.assert_allclose(project_cone(gradients, u).v, [0.0, 2.0])


class TestGeometricChecks:
    """Test cases for the good-direction, duality, corridor and motion checks."""

    def test_gamma_scaling(self, unit_ball_exterior):
        report = check_gamma_scaling(unit_ball_exterior, count=20)
        assert report.passed
        assert report.details["certified_triples"] == 20.0

    def test_gamma_scaling_needs_a_ball(self, lower_half_plane):
        with pytest.raises(InvalidInputError):
            check_gamma_scaling(lower_half_plane)

    @pytest.mark.parametrize("p", [2.0, 4.0, 6.0])
    def test_duality(self, p):
        assert check_duality_identities(p, count=100).passed

    def test_corridor(self):
        report = check_corridor_scaling()
        assert report.passed
        assert report.details["ratio"] == pytest.approx(2.0, abs=1e-4)

    def test_lipschitz_motion(self):
        moving = translating_half_plane().moving_set
        assert check_lipschitz_motion(moving, [0.0, 0.25, 0.5, 1.0]).passed


class TestOrderChecks:
    """Test cases for the convergence order and refinement checks."""

    def test_exact_table_passes(self):
        table = ConvergenceTable(
            reference="closed-form",
            rows=[ConvergenceRow(n=10, gap=0.0), ConvergenceRow(n=20, gap=0.0)],
            exact=True,
        )
        assert check_convergence_order(table).passed

    def test_slow_order_fails(self):
        table = ConvergenceTable(
            reference="closed-form",
            rows=[ConvergenceRow(n=10, gap=0.1), ConvergenceRow(n=40, gap=0.05)],
            fitted_order=0.5,
        )
        assert not check_convergence_order(table).passed

    def test_growing_doubling_gaps_fail(self):
        table = ConvergenceTable(
            reference="closed-form",
            rows=[
                ConvergenceRow(n=10, gap=0.1, doubling_gap=0.01),
                ConvergenceRow(n=20, gap=0.05, doubling_gap=0.1),
                ConvergenceRow(n=40, gap=0.025, doubling_gap=1.0),
                ConvergenceRow(n=80, gap=0.0125),
            ],
            fitted_order=1.0,
        )
        report = check_convergence_order(table)
        assert not report.passed
        assert report.details["kappa"] == pytest.approx(0.1)
        failed = {v.label.split(" n=")[0] for v in report.violations}
        assert failed == {"doubling gap", "cauchy"}

    def test_first_order_doubling_gaps_pass(self):
        table = ConvergenceTable(
            reference="closed-form",
            rows=[
                ConvergenceRow(n=10, gap=0.1, doubling_gap=0.05),
                ConvergenceRow(n=20, gap=0.05, doubling_gap=0.026),
                ConvergenceRow(n=40, gap=0.025, doubling_gap=0.0125),
                ConvergenceRow(n=80, gap=0.0125),
            ],
            fitted_order=1.0,
        )
        report = check_convergence_order(table)
        assert report.passed
        assert report.details["kappa"] == pytest.approx(0.5)

    def test_missing_order_fails(self):
        table = ConvergenceTable(reference="finest-grid", rows=[ConvergenceRow(n=10, gap=0.1)])
        assert not check_convergence_order(table).passed

    @pytest.mark.parametrize(
        "values,expected",
        [([1.0, 0.5, 0.26], True), ([1.0, 0.9], False), ([1.0, 0.0, 0.0], False)],
    )
    def test_refinement_ratios(self, values, expected):
        assert check_refinement_ratios("ratios", values).passed is expected


class TestSuites:
    """Test cases for suite selection and execution."""

    def test_all_skips_the_controls(self):
        names = suite_names(ALL_SUITES)
        assert names == REGULAR_SUITES
        assert not set(CONTROL_SUITES) & set(names)

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuiteError):
            suite_names("nonsense")
        with pytest.raises(UnknownSuiteError):
            run_suite(ALL_SUITES)

    def test_u_obstacle_room_shape(self):
        room = u_obstacle_room(60)
        mask = rasterize_room(room)
        assert mask.shape == (60, 60)
        assert np.any(mask == OBSTACLE)

    @pytest.mark.parametrize("name", REGULAR_SUITES)
    def test_regular_suite_passes(self, name):
        report = run_suite(name, seed=0)
        failed = [r.name for r in report.reports if not r.passed]
        assert report.passed, failed
        assert not report.negative_control

    @pytest.mark.parametrize("name", CONTROL_SUITES)
    def test_negative_control_fails(self, name):
        report = run_suite(name, seed=0)
        assert report.negative_control
        assert not report.passed
