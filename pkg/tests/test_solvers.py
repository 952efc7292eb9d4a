import math

import pytest
from hypothesis import given, settings, strategies as st

from mlefit.errors import ConvergenceError, DomainError, NoRootError
from mlefit.solvers import SolverConfig, find_root, minimize_2d


class TestFindRoot:
    def test_sqrt_two(self):
        res = find_root(lambda x: x * x - 2.0, 0.0, 2.0, SolverConfig(1e-14))
        assert res.root == pytest.approx(math.sqrt(2.0), abs=1e-13)
        assert res.iterations > 0

    def test_endpoint_root(self):
        assert find_root(lambda x: x - 1.0, 1.0, 3.0).root == 1.0

    def test_no_sign_change(self):
        with pytest.raises(NoRootError):
            find_root(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_budget_exhausted(self):
        with pytest.raises(ConvergenceError):
            find_root(lambda x: math.copysign(1.0, x - 0.3), 0.0, 1.0, SolverConfig(1e-300, 3))

    def test_nan_at_end(self):
        with pytest.raises(NoRootError):
            find_root(lambda x: math.nan, 0.0, 1.0)

    @given(st.floats(-50, 50), st.floats(0.1, 20))
    @settings(max_examples=50)
    def test_root_stays_in_bracket(self, c, width):
        lo, hi = c - width, c + width / 3
        res = find_root(lambda x: math.tanh(x - c), lo, hi, SolverConfig(1e-10))
        assert lo <= res.root <= hi
        assert abs(res.root - c) < 1e-8

    def test_config_validation(self):
        with pytest.raises(DomainError):
            SolverConfig(tolerance=0.0)
        with pytest.raises(DomainError):
            SolverConfig(max_iterations=0)


class TestMinimize2d:
    def test_rosenbrock(self):
        f = lambda x, y: (1 - x) ** 2 + 100 * (y - x * x) ** 2  # noqa: E731
        res = minimize_2d(f, (-1.2, 1.0), config=SolverConfig(1e-10, 5000))
        assert res.converged
        assert res.point == pytest.approx((1.0, 1.0), abs=1e-6)

    def test_constrained_optimum_on_boundary(self):
        f = lambda x, y: (x - 3.0) ** 2 + (y + 1.0) ** 2  # noqa: E731
        res = minimize_2d(f, (0.5, 0.5), box=((0.0, 1.0), (0.0, 1.0)), config=SolverConfig(1e-9, 2000))
        assert res.point == pytest.approx((1.0, 0.0), abs=1e-6)

    @given(
        st.floats(-5, 5),
        st.floats(-5, 5),
        st.floats(0.0, 0.9),
        st.floats(0.0, 0.9),
    )
    @settings(max_examples=40, deadline=None)
    def test_every_evaluation_is_inside_box(self, cx, cy, sx, sy):
        box = ((0.0, 1.0), (0.0, 1.0))
        seen = []

        def f(x, y):
            seen.append((x, y))
            return (x - cx) ** 2 + 2 * (y - cy) ** 2

        res = minimize_2d(f, (sx + 0.05, sy + 0.05), box=box)
        assert all(0.0 <= x <= 1.0 and 0.0 <= y <= 1.0 for x, y in seen)
        assert 0.0 <= res.point[0] <= 1.0 and 0.0 <= res.point[1] <= 1.0

    def test_nan_treated_as_infinite(self):
        f = lambda x, y: math.nan if x > 2 else (x - 1) ** 2 + y**2  # noqa: E731
        res = minimize_2d(f, (1.8, 0.5))
        assert res.point == pytest.approx((1.0, 0.0), abs=1e-4)

    def test_budget_reports_not_converged(self):
        f = lambda x, y: (1 - x) ** 2 + 100 * (y - x * x) ** 2  # noqa: E731
        res = minimize_2d(f, (-1.2, 1.0), config=SolverConfig(1e-12, 5))
        assert not res.converged

    def test_degenerate_box(self):
        with pytest.raises(DomainError):
            minimize_2d(lambda x, y: x, (0.0, 0.0), box=((1.0, 1.0), (0.0, 1.0)))

    def test_nonfinite_start(self):
        with pytest.raises(DomainError):
            minimize_2d(lambda x, y: math.inf, (0.0, 0.0))
