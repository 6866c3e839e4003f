import math

import numpy as np
import pytest

from repeater_scaling.analytic import (
    AnalyticOptions,
    CLOSED_FORM,
    acceptance_geomean,
    adaptive_simpson,
    average_gain,
    exponent_estimate,
    minimize_exponent,
    optimal_target_fidelity,
    small_error_exponent,
    steps_estimate,
)
from repeater_scaling.exceptions import InfeasibleError
from repeater_scaling.fixed_points import find_fixed_points
from repeater_scaling.maps import ErrorParams, purify, swap_fidelity
from repeater_scaling.recursive import ProtocolParams, resource_exponent

ZERO = ErrorParams()
CLOSED = AnalyticOptions(integral_mode=CLOSED_FORM)


def composite_simpson(fun, a, b, panels=4000):
    # fixed-panel oracle, independent of the adaptive routine
    h = (b - a) / panels
    total = fun(a) + fun(b)
    for i in range(1, panels):
        total += fun(a + i * h) * (4 if i % 2 else 2)
    return total * h / 3.0


class TestAdaptiveSimpson:
    def test_polynomial_is_exact(self):
        assert adaptive_simpson(lambda x: x * x, 0.0, 2.0, 1e-12) == pytest.approx(
            8.0 / 3.0, abs=1e-12
        )

    def test_transcendental(self):
        assert adaptive_simpson(math.sin, 0.0, math.pi, 1e-12) == pytest.approx(2.0, abs=1e-10)

    def test_constant_geometric_mean(self):
        # the geometric mean of a constant acceptance is the constant
        width = 0.3
        integral = adaptive_simpson(lambda _: math.log(0.77), 0.6, 0.9, 1e-12)
        assert math.exp(integral / width) == pytest.approx(0.77, abs=1e-12)


class TestAverageGain:
    def test_shrinking_interval_approaches_pointwise_gain(self):
        gain_at = float(purify(0.8, ZERO).fidelity) - 0.8
        value = average_gain(0.8 - 1e-6, 0.8, ZERO)
        assert value == pytest.approx(gain_at, abs=1e-5)
        assert gain_at == pytest.approx(0.03815028901734095, abs=1e-12)

    def test_matches_independent_quadrature(self):
        expected = composite_simpson(
            lambda f: float(purify(f, ZERO).fidelity) - f, 0.6, 0.9
        ) / 0.3
        assert average_gain(0.6, 0.9, ZERO) == pytest.approx(expected, rel=1e-10)

    def test_positive_on_feasible_interval(self):
        assert average_gain(0.55, 0.95, ZERO) > 0.0

    def test_infeasible_window_raises(self):
        with pytest.raises(InfeasibleError):
            average_gain(0.45, 0.9, ZERO)
        with pytest.raises(InfeasibleError):
            average_gain(0.7, 0.9, ErrorParams(eps_g=0.05, eps_r=0.05))


class TestStepsEstimate:
    def test_definition(self):
        gain = average_gain(0.6, 0.9, ZERO)
        assert steps_estimate(0.6, 0.9, ZERO) == pytest.approx(0.3 / gain, rel=1e-12)

    def test_ceiling_option(self):
        plain = steps_estimate(0.6, 0.9, ZERO)
        ceiled = steps_estimate(0.6, 0.9, ZERO, AnalyticOptions(use_ceiling=True))
        assert ceiled == math.ceil(plain)
        assert plain != ceiled  # the window was chosen non-integer

    def test_steps_times_gain_recovers_width(self):
        for width in (0.2, 0.05, 0.005):
            f0, ft = 0.75, 0.75 + width
            product = steps_estimate(f0, ft, ZERO) * average_gain(f0, ft, ZERO)
            assert product == pytest.approx(width, rel=1e-12)


class TestAcceptanceGeomean:
    def test_matches_independent_quadrature(self):
        expected = math.exp(
            composite_simpson(lambda f: math.log(float(purify(f, ZERO).p_accept)), 0.6, 0.9)
            / 0.3
        )
        assert acceptance_geomean(0.6, 0.9, ZERO) == pytest.approx(expected, rel=1e-10)

    def test_mean_value_bounds(self):
        grid = np.linspace(0.6, 0.9, 200)
        accepts = purify(grid, ZERO).p_accept
        value = acceptance_geomean(0.6, 0.9, ZERO)
        assert accepts.min() < value < accepts.max()


class TestClosedFormRoute:
    @pytest.mark.parametrize("eps_g", [0.0, 1e-4, 1e-3, 5e-3, 1e-2])
    @pytest.mark.parametrize("eps_r", [0.0, 1e-3, 1e-2])
    def test_agrees_with_quadrature(self, eps_g, eps_r):
        err = ErrorParams(eps_g=eps_g, eps_r=eps_r)
        ft = optimal_target_fidelity(eps_g) if eps_g else 0.93
        fps = find_fixed_points(err)
        f0 = float(swap_fidelity(ft, 2, err))
        if not (fps.feasible and fps.lower < f0 and ft < fps.upper):
            pytest.skip("window infeasible for this error pair")
        m_quad = steps_estimate(f0, ft, err)
        m_closed = steps_estimate(f0, ft, err, CLOSED)
        assert m_closed == pytest.approx(m_quad, rel=1e-8)
        p_quad = acceptance_geomean(f0, ft, err)
        p_closed = acceptance_geomean(f0, ft, err, CLOSED)
        assert p_closed == pytest.approx(p_quad, rel=1e-8)

    def test_nondefault_pauli_weights(self):
        err = ErrorParams(eps_g=0.008, eps_r=0.002, p_x=0.1, p_y=0.2, p_z=0.7)
        f0, ft = 0.75, 0.9
        assert steps_estimate(f0, ft, err, CLOSED) == pytest.approx(
            steps_estimate(f0, ft, err), rel=1e-8
        )


class TestExponentEstimate:
    def test_scaling_result_identity(self):
        result = exponent_estimate(0.7, 0.9, ZERO)
        assert result.feasible and result.method == "analytic"
        assert result.exponent == pytest.approx(
            math.log2(result.pairs_per_level) + 1.0, abs=1e-12
        )

    def test_closed_form_method_label(self):
        result = exponent_estimate(0.7, 0.9, ZERO, opts=CLOSED)
        assert result.method == "analytic-closed-form"

    def test_infeasible_in_band(self):
        result = exponent_estimate(0.7, 0.9, ErrorParams(eps_g=0.05, eps_r=0.05))
        assert not result.feasible and result.exponent is None

    def test_gap_to_recursive_on_reference_errors(self):
        # the two estimators stay within one unit of each other here
        for eps_g, eps_r in [(2.5e-3, 6e-3), (5e-4, 1e-4), (3.5e-4, 4e-4),
                             (5e-4, 1e-6), (2.5e-3, 4e-3)]:
            err = ErrorParams(eps_g=eps_g, eps_r=eps_r)
            ft = optimal_target_fidelity(eps_g)
            f0 = float(swap_fidelity(ft, 2, err))
            tilde = exponent_estimate(f0, ft, err)
            recursive = resource_exponent(ProtocolParams(ft=ft, err=err, f0=f0))
            assert tilde.feasible and recursive.feasible
            assert abs(tilde.exponent - recursive.exponent) <= 1.0


class TestOptimalTarget:
    def test_zero_gate_error(self):
        assert optimal_target_fidelity(0.0) == pytest.approx(1.0, abs=1e-15)

    def test_hand_evaluated_point(self):
        assert optimal_target_fidelity(0.001) == pytest.approx(0.9703501831575465, abs=1e-12)

    def test_monotone_decreasing(self):
        values = [optimal_target_fidelity(float(eg)) for eg in np.linspace(0.0, 0.02, 21)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_full_form_close_to_reduced_at_small_readout(self):
        for eps_g in (5e-4, 2.5e-3, 1e-2):
            full = optimal_target_fidelity(eps_g, 1e-4)
            reduced = optimal_target_fidelity(eps_g)
            assert full == pytest.approx(reduced, abs=5e-3)

    def test_full_form_at_zero_errors(self):
        assert optimal_target_fidelity(0.0, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_negative_gate_error_rejected(self):
        with pytest.raises(ValueError):
            optimal_target_fidelity(-1e-3)


class TestSmallErrorExponent:
    def test_floor(self):
        assert small_error_exponent(0.0) == 3.0

    def test_reference_points(self):
        assert small_error_exponent(5e-4) == pytest.approx(3.332049516849971, abs=1e-12)
        assert small_error_exponent(0.013) == pytest.approx(5.090245595138793, abs=1e-12)


class TestMinimizeExponent:
    def test_argmin_matches_closed_form(self):
        ft_num, result = minimize_exponent(ErrorParams(eps_g=0.005, eps_r=0.001))
        assert abs(ft_num - optimal_target_fidelity(0.005)) <= 0.02
        assert result.feasible and result.exponent > 3.0

    def test_zero_error_optimum_hugs_upper_boundary(self):
        ft_num, result = minimize_exponent(ZERO)
        assert ft_num > 0.99
        assert result.exponent >= 3.0

    def test_infeasible_errors_raise(self):
        with pytest.raises(InfeasibleError):
            minimize_exponent(ErrorParams(eps_g=0.03, eps_r=0.0))

    def test_closed_form_mode_matches_quadrature_mode(self):
        err = ErrorParams(eps_g=0.005, eps_r=0.001)
        ft_q, res_q = minimize_exponent(err)
        ft_c, res_c = minimize_exponent(err, opts=CLOSED)
        assert ft_c == pytest.approx(ft_q, abs=1e-4)
        assert res_c.exponent == pytest.approx(res_q.exponent, rel=1e-6)
