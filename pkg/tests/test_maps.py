import math

import numpy as np
import pytest

from repeater_scaling.exceptions import FidelityClampWarning
from repeater_scaling.maps import (
    DepolarizingGateParams,
    ErrorParams,
    _clamp_unit,
    decay,
    purify,
    purify_depolarizing,
    purify_ideal,
    swap_fidelity,
)

ZERO = ErrorParams()


def ideal_map(f):
    # independent transcription used as the oracle for the library's map
    w = (1.0 - f) / 3.0
    return (f * f + w * w) / (f * f + 2.0 * f * w + 5.0 * w * w)


class TestErrorParams:
    def test_defaults(self):
        err = ErrorParams(eps_g=0.01, eps_r=0.02)
        assert err.p_z == 0.5
        assert err.p_x + err.p_y == 0.5
        assert err.eta == pytest.approx(0.98, abs=1e-15)
        assert err.eta_s == err.eta

    def test_eta_s_override(self):
        err = ErrorParams(eps_r=0.1, eta_s=0.95)
        assert err.eta_s == 0.95

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"eps_g": -0.1},
            {"eps_g": 1.0},
            {"eps_r": 0.5},
            {"eps_r": -1e-9},
            {"p_x": 0.5, "p_y": 0.5, "p_z": 0.5},
            {"p_x": -0.1, "p_y": 0.6, "p_z": 0.5},
            {"eta_s": 0.5},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ErrorParams(**kwargs)

    def test_pauli_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ErrorParams(p_x=0.25, p_y=0.25, p_z=0.5 + 1e-10)


class TestPurifyIdeal:
    def test_upper_fixed_point(self):
        assert purify_ideal(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_lower_fixed_point(self):
        assert purify_ideal(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_hand_evaluated_point(self):
        # 0.6444444.../0.7688888... evaluated by hand
        assert purify_ideal(0.8) == pytest.approx(0.838150289017341, abs=1e-12)

    def test_rejects_out_of_range(self):
        for bad in (0.0, -0.2, 1.0 + 1e-9):
            with pytest.raises(ValueError):
                purify_ideal(bad)

    def test_array_broadcast(self):
        grid = np.linspace(0.3, 1.0, 11)
        out = purify_ideal(grid)
        assert out.shape == grid.shape
        for f, v in zip(grid, out):
            assert v == pytest.approx(purify_ideal(float(f)), abs=1e-15)


class TestPurify:
    def test_zero_error_reduces_to_ideal(self):
        for f in np.linspace(0.501, 1.0, 40):
            fid, _ = purify(float(f), ZERO)
            assert abs(float(fid) - float(purify_ideal(float(f)))) <= 1e-12

    def test_zero_error_acceptance_is_ideal_denominator(self):
        fid, acc = purify(0.9, ZERO)
        w = 0.1 / 3.0
        assert float(acc) == pytest.approx(0.81 + 2 * 0.9 * w + 5 * w * w, abs=1e-15)
        assert float(fid) == pytest.approx(ideal_map(0.9), abs=1e-15)

    def test_half_point(self):
        fid, acc = purify(0.5, ZERO)
        assert float(fid) == pytest.approx(0.5, abs=1e-12)
        assert float(acc) == pytest.approx(5.0 / 9.0, abs=1e-12)

    def test_acceptance_independent_of_gate_error(self):
        _, acc0 = purify(0.85, ErrorParams(eps_r=0.01))
        _, acc1 = purify(0.85, ErrorParams(eps_g=0.04, eps_r=0.01))
        assert float(acc0) == pytest.approx(float(acc1), abs=1e-15)

    def test_perfect_acceptance_at_unit_fidelity(self):
        _, acc = purify(1.0, ZERO)
        assert float(acc) == 1.0

    def test_acceptance_bounds(self):
        for f in np.linspace(0.01, 1.0, 25):
            for er in np.linspace(0.0, 0.49, 8):
                _, acc = purify(float(f), ErrorParams(eps_r=float(er)))
                assert 4.0 / 9.0 - 1e-12 <= float(acc) <= 1.0 + 1e-12

    @pytest.mark.parametrize("fixed_er", [0.0, 0.02])
    def test_monotone_degradation_in_gate_error(self, fixed_er):
        for f in np.linspace(0.6, 0.99, 9):
            values = [
                float(purify(float(f), ErrorParams(eps_g=float(eg), eps_r=fixed_er)).fidelity)
                for eg in np.linspace(0.0, 0.05, 11)
            ]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("fixed_eg", [0.0, 0.02])
    def test_monotone_degradation_in_readout_error(self, fixed_eg):
        for f in np.linspace(0.6, 0.99, 9):
            values = [
                float(purify(float(f), ErrorParams(eps_g=fixed_eg, eps_r=float(er))).fidelity)
                for er in np.linspace(0.0, 0.05, 11)
            ]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


class TestPurifyDepolarizing:
    def test_error_free_limit_matches_ideal(self):
        gate = DepolarizingGateParams(eta=1.0, p2=1.0)
        assert float(purify_depolarizing(0.8, gate)) == pytest.approx(
            float(purify_ideal(0.8)), abs=1e-15
        )

    def test_unit_fidelity_fixed_point(self):
        assert float(purify_depolarizing(1.0, DepolarizingGateParams())) == pytest.approx(
            1.0, abs=1e-15
        )

    def test_reference_value(self):
        # direct evaluation of the map at eta=1, p2=0.99
        gate = DepolarizingGateParams(eta=1.0, p2=0.99)
        assert float(purify_depolarizing(0.8, gate)) == pytest.approx(
            0.8304858435336552, abs=1e-12
        )

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            DepolarizingGateParams(p2=0.0)
        with pytest.raises(ValueError):
            DepolarizingGateParams(eta=0.4)


class TestSwapFidelity:
    def test_perfect_everything(self):
        assert float(swap_fidelity(1.0, 2, ErrorParams(eta_s=1.0))) == pytest.approx(
            1.0, abs=1e-15
        )

    def test_hand_evaluated_two_links(self):
        # 1/4 * (1 + 3 * (2.8/3)^2)
        assert float(swap_fidelity(0.95, 2, ErrorParams(eta_s=1.0))) == pytest.approx(
            0.9033333333333333, abs=1e-12
        )

    def test_unabsorbed_gate_error(self):
        err = ErrorParams(eps_g=0.01, eps_r=0.0)
        expected = 0.25 * (1.0 + 3.0 * (1.0 - 0.01) ** 3 * (2.8 / 3.0) ** 2)
        assert float(swap_fidelity(0.95, 2, err, absorbed=False)) == pytest.approx(
            expected, abs=1e-12
        )

    def test_contraction(self):
        for f in np.linspace(0.26, 1.0, 20):
            for eta_s in np.linspace(0.51, 1.0, 8):
                out = float(swap_fidelity(float(f), 2, ErrorParams(eps_r=0.1, eta_s=float(eta_s))))
                assert out <= float(f) + 1e-12
                assert out > 0.25

    def test_equality_only_at_perfect_point(self):
        assert float(swap_fidelity(1.0, 3, ErrorParams())) == pytest.approx(1.0, abs=1e-12)
        assert float(swap_fidelity(0.999, 2, ErrorParams())) < 0.999

    def test_composition_identity(self):
        # joining four links equals joining two twice, feeding the result back
        for f in np.linspace(0.3, 1.0, 15):
            for eta_s in (1.0, 0.95, 0.8):
                err = ErrorParams(eps_r=0.2, eta_s=eta_s)
                once = float(swap_fidelity(float(f), 4, err))
                stage = float(swap_fidelity(float(f), 2, err))
                twice = float(swap_fidelity(stage, 2, err))
                assert once == pytest.approx(twice, abs=1e-12)

    def test_rejects_single_link(self):
        with pytest.raises(ValueError):
            swap_fidelity(0.9, 1, ZERO)

    def test_rejects_low_fidelity(self):
        with pytest.raises(ValueError):
            swap_fidelity(0.25, 2, ZERO)


class TestDecay:
    def test_no_elapsed_time(self):
        assert decay(0.9, 0.0, 1.0) == pytest.approx(0.9, abs=1e-15)

    def test_one_coherence_time(self):
        assert decay(1.0, 2.5, 2.5) == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_half_coherence_time(self):
        assert decay(0.95, 0.5, 1.0) == pytest.approx(0.95 * math.exp(-0.25), abs=1e-15)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            decay(0.9, 1.0, 0.0)
        with pytest.raises(ValueError):
            decay(0.9, -1.0, 1.0)


class TestClamp:
    def test_small_excursion_clamped_with_warning(self):
        with pytest.warns(FidelityClampWarning):
            assert _clamp_unit(1.0 + 1e-12) == 1.0

    def test_large_excursion_raises(self):
        with pytest.raises(ValueError):
            _clamp_unit(1.0 + 1e-6)

    def test_in_range_untouched(self):
        assert _clamp_unit(0.73) == 0.73
