import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynakernel import MissingWaypoint, Point, RandomWaypoint, Rng, Topology

from oracles import RwpOracle


def make_node(x=0.0, y=0.0):
    t = Topology()
    return t, t.node(t.add_node(Point(x, y)))


class TestRng:
    def test_same_seed_same_stream(self):
        a, b = Rng(1234), Rng(1234)
        assert [a.next_int(400) for _ in range(100)] == \
               [b.next_int(400) for _ in range(100)]

    def test_different_seed_diverges(self):
        a, b = Rng(1), Rng(2)
        assert [a.next_int(10 ** 9) for _ in range(8)] != \
               [b.next_int(10 ** 9) for _ in range(8)]

    def test_matches_documented_algorithm(self):
        # the contract: MT19937 getrandbits over the minimal bit width,
        # rejecting values >= n
        rng = Rng(99)
        mirror = random.Random(99)

        def draw(n):
            bits = (n - 1).bit_length()
            v = mirror.getrandbits(bits)
            while v >= n:
                v = mirror.getrandbits(bits)
            return v

        for n in (400, 300, 7, 100, 2, 1000003):
            assert [rng.next_int(n) for _ in range(50)] == \
                   [draw(n) for _ in range(50)]

    def test_n_one_returns_zero(self):
        assert Rng(0).next_int(1) == 0

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            Rng(0).next_int(0)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2 ** 32), st.integers(1, 10 ** 6))
    def test_bounds(self, seed, n):
        rng = Rng(seed)
        for _ in range(20):
            assert 0 <= rng.next_int(n) < n

    def test_next_float_range(self):
        rng = Rng(5)
        for _ in range(100):
            assert 0.0 <= rng.next_float() < 1.0


class TestRandomWaypoint:
    def test_init_stores_target_point(self):
        t, node = make_node()
        RandomWaypoint(Rng(3)).init(node)
        target = node.get_property("target")
        assert isinstance(target, Point)
        assert 0 <= target.x < 400 and 0 <= target.y < 300

    def test_target_drawn_x_then_y(self):
        t, node = make_node()
        RandomWaypoint(Rng(42)).init(node)
        mirror = RwpOracle(42)
        mirror._retarget()
        target = node.get_property("target")
        assert (target.x, target.y) == (mirror.tx, mirror.ty)

    def test_step_is_exactly_five(self):
        t, node = make_node(200, 150)
        walker = RandomWaypoint(Rng(7))
        walker.init(node)
        for _ in range(500):
            before = node.position
            walker.move(node)
            d = before.distance_to(node.position)
            assert abs(d - 5.0) < 1e-9

    def test_known_triangle_step(self):
        # target on a 3-4-5 triangle: one step of 5 lands at (3, 4)
        t, node = make_node(0, 0)
        node.set_property("target", Point(30, 40))
        walker = RandomWaypoint(Rng(0))
        walker.move(node)
        assert node.position.x == pytest.approx(3.0, abs=1e-12)
        assert node.position.y == pytest.approx(4.0, abs=1e-12)

    def test_retarget_happens_after_move(self):
        # node 3 units from target: it still travels the full 5, passing
        # the target, and only then draws a new one
        t, node = make_node(0, 0)
        node.set_property("target", Point(3, 0))
        walker = RandomWaypoint(Rng(11))
        walker.move(node)
        assert node.position.x == pytest.approx(5.0, abs=1e-12)
        assert node.get_property("target") != Point(3, 0)

    def test_no_retarget_when_far(self):
        t, node = make_node(0, 0)
        node.set_property("target", Point(300, 0))
        walker = RandomWaypoint(Rng(11))
        walker.move(node)
        assert node.get_property("target") == Point(300, 0)

    def test_on_target_keeps_heading(self):
        t, node = make_node(10, 10)
        node.set_direction_angle(0.0)
        node.set_property("target", Point(10, 10))
        RandomWaypoint(Rng(1)).move(node)
        assert node.position.x == pytest.approx(15.0, abs=1e-12)
        assert node.position.y == pytest.approx(10.0, abs=1e-12)

    def test_missing_target_rejected(self):
        t, node = make_node()
        with pytest.raises(MissingWaypoint):
            RandomWaypoint(Rng(1)).move(node)

    def test_positions_may_exit_region(self):
        # the walk never clamps; a node starting far outside strolls back
        t, node = make_node(1000, 1000)
        walker = RandomWaypoint(Rng(2))
        walker.init(node)
        walker.move(node)
        assert node.position.x > 400 or node.position.y > 300

    def test_trajectory_matches_oracle(self):
        t, node = make_node(200, 150)
        walker = RandomWaypoint(Rng(2024))
        walker.init(node)
        oracle = RwpOracle(2024)
        oracle.start(200, 150)
        for step in range(2000):
            walker.move(node)
            oracle.step_once()
            assert abs(node.position.x - oracle.x) < 1e-9, f"x diverged at {step}"
            assert abs(node.position.y - oracle.y) < 1e-9, f"y diverged at {step}"

    def test_custom_region_and_step(self):
        t, node = make_node(5, 5)
        walker = RandomWaypoint(Rng(6), width=40, height=30, step=2.0)
        walker.init(node)
        for _ in range(200):
            before = node.position
            walker.move(node)
            assert abs(before.distance_to(node.position) - 2.0) < 1e-9
            target = node.get_property("target")
            assert 0 <= target.x < 40 and 0 <= target.y < 30
