"""
Tests for the fast marching solver and the exit field.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from sweeping_lab.eikonal.fast_marching import (
    dijkstra_distance,
    fast_marching,
    rasterize_room,
    solve_eikonal,
    solve_room,
    spontaneous_velocity,
)
from sweeping_lab.eikonal.models import EXIT, FREE, OBSTACLE, Rectangle, Room, Segment
from sweeping_lab.errors import InvalidInputError


@pytest.fixture
def planar_mask() -> np.ndarray:
    """11x11 free grid whose left column is the exit."""
    mask = np.full((11, 11), FREE, dtype=np.int8)
    mask[0, :] = EXIT
    return mask


class TestFastMarching:
    """Test cases for fast_marching."""

    def test_planar_front(self, planar_mask):
        values, _ = fast_marching(planar_mask, 0.5)
        expected = 0.5 * np.arange(11)[:, None] * np.ones((1, 11))
        np.testing.assert_allclose(values, expected, atol=0.5)

    def test_acceptance_order_is_monotone(self, planar_mask):
        values, order = fast_marching(planar_mask, 1.0)
        accepted = [values[i, j] for i, j in order]
        assert accepted == sorted(accepted)
        assert len(order) == planar_mask.size

    def test_point_exit_is_radial(self):
        mask = np.full((21, 21), FREE, dtype=np.int8)
        mask[10, 10] = EXIT
        values, _ = fast_marching(mask, 1.0)
        assert values[20, 10] == pytest.approx(10.0)
        # First-order error on the diagonal stays within a few cells.
        assert abs(values[17, 17] - 7.0 * math.sqrt(2.0)) <= 2.0

    def test_obstacles_and_unreachable_cells_are_infinite(self):
        mask = np.full((5, 5), FREE, dtype=np.int8)
        mask[0, :] = EXIT
        mask[2, :] = OBSTACLE
        values, _ = fast_marching(mask, 1.0)
        assert np.all(np.isinf(values[2:, :]))
        np.testing.assert_allclose(values[1, :], 1.0)

    def test_no_exit(self):
        with pytest.raises(InvalidInputError):
            fast_marching(np.zeros((4, 4), dtype=np.int8), 1.0)

    def test_bad_mask_code(self, planar_mask):
        planar_mask[3, 3] = 7
        with pytest.raises(InvalidInputError):
            fast_marching(planar_mask, 1.0)

    def test_agrees_with_dijkstra_around_an_obstacle(self):
        mask = np.full((40, 40), FREE, dtype=np.int8)
        mask[0, :] = EXIT
        mask[10:12, 5:35] = OBSTACLE
        spacing = 0.25
        marched, _ = fast_marching(mask, spacing)
        graph = dijkstra_distance(mask, spacing)
        free = mask != OBSTACLE
        # The 8-neighbour graph overestimates oblique distances by at most ~8%.
        assert np.all(np.isfinite(marched[free]) == np.isfinite(graph[free]))
        assert np.all(np.abs(marched[free] - graph[free]) <= 0.1 * graph[free] + 2.0 * spacing)


class TestDijkstra:
    """Test cases for dijkstra_distance."""

    def test_planar(self, planar_mask):
        values = dijkstra_distance(planar_mask, 1.0)
        np.testing.assert_allclose(values[:, 4], np.arange(11.0))

    def test_diagonal_moves(self):
        mask = np.full((3, 3), FREE, dtype=np.int8)
        mask[0, 0] = EXIT
        values = dijkstra_distance(mask, 1.0)
        assert values[2, 2] == pytest.approx(2.0 * math.sqrt(2.0))

    def test_no_corner_cutting(self):
        mask = np.full((2, 2), FREE, dtype=np.int8)
        mask[0, 0] = EXIT
        mask[1, 0] = OBSTACLE
        values = dijkstra_distance(mask, 1.0)
        assert values[1, 1] == pytest.approx(2.0)


class TestRooms:
    """Test cases for rasterize_room and solve_room."""

    @pytest.fixture
    def room(self) -> Room:
        return Room(
            width=2.0,
            height=1.0,
            spacing=0.5,
            obstacles=[Rectangle(x_min=1.0, y_min=0.0, x_max=1.0, y_max=0.5)],
            exits=[Segment(start=[0.0, 0.0], end=[0.0, 1.0])],
        )

    def test_rasterize(self, room):
        mask = rasterize_room(room)
        assert mask.shape == (5, 3)
        assert np.all(mask[0, :] == EXIT)
        assert mask[2, 0] == OBSTACLE and mask[2, 1] == OBSTACLE
        assert mask[2, 2] == FREE

    def test_solve_room(self, room):
        field = solve_room(room)
        assert field.dimensions == (5, 3)
        assert field.values[0, 1] == 0.0
        assert math.isinf(field.values[2, 0])
        np.testing.assert_allclose(field.node_position(4, 2), [2.0, 1.0])

    def test_room_needs_an_exit(self):
        with pytest.raises(ValidationError):
            Room(width=1.0, height=1.0, spacing=0.5, exits=[])

    def test_rectangle_order(self):
        with pytest.raises(ValidationError):
            Rectangle(x_min=1.0, y_min=0.0, x_max=0.0, y_max=1.0)


class TestSpontaneousVelocity:
    """Test cases for spontaneous_velocity."""

    def test_points_to_the_exit(self, planar_mask):
        field = solve_eikonal(planar_mask, 1.0)
        np.testing.assert_allclose(spontaneous_velocity(field, [5.3, 4.7]), [-1.0, 0.0])

    def test_unit_norm_on_free_cells(self):
        mask = np.full((30, 30), FREE, dtype=np.int8)
        mask[0, 10:20] = EXIT
        mask[10:20, 12:14] = OBSTACLE
        field = solve_eikonal(mask, 1.0)
        for i in range(1, 30, 3):
            for j in range(0, 30, 3):
                if mask[i, j] == FREE:
                    v = spontaneous_velocity(field, [float(i), float(j)])
                    assert float(np.linalg.norm(v)) == pytest.approx(1.0)

    def test_zero_on_the_exit(self, planar_mask):
        field = solve_eikonal(planar_mask, 1.0)
        np.testing.assert_array_equal(spontaneous_velocity(field, [0.0, 3.0]), [0.0, 0.0])

    @pytest.mark.parametrize("pos", [[-2.0, 3.0], [3.0, 11.0], [math.nan, 0.0]])
    def test_outside_the_grid(self, planar_mask, pos):
        field = solve_eikonal(planar_mask, 1.0)
        with pytest.raises(InvalidInputError):
            spontaneous_velocity(field, pos)

    def test_unreachable_cell(self):
        mask = np.full((5, 5), FREE, dtype=np.int8)
        mask[0, :] = EXIT
        mask[2, :] = OBSTACLE
        field = solve_eikonal(mask, 1.0)
        with pytest.raises(InvalidInputError):
            spontaneous_velocity(field, [3.0, 2.0])
        with pytest.raises(InvalidInputError):
            spontaneous_velocity(field, [2.0, 2.0])
