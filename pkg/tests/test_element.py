import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmamimo.element import (
    ElementWeight,
    FeasibleSet,
    LorentzianTuning,
    frequency_response,
    half_power_bandwidth,
    is_member,
    lorentzian_phase_weight,
    normalized_response_curve,
    project,
    project_weight,
)
from dmamimo.errors import DomainError

# mpmath at 50 digits: F=1, f0=3.5 GHz, chi=350 MHz, f=3.6 GHz
A_36GHZ = complex(-4.3991012095424774107, -7.8068556676387627289)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
complexes = st.builds(complex, finite, finite)


def circle_grid(n=100_000):
    phis = np.linspace(-np.pi, np.pi, n, endpoint=False)
    return 0.5j + 0.5 * np.exp(1j * phis)


class TestFrequencyResponse:
    def test_at_resonance_is_pure_imaginary(self):
        t = LorentzianTuning(1.0, 3.5e8, 3.5e9)
        a = frequency_response(t, 3.5e9)
        assert a == pytest.approx(-10j, abs=1e-12)

    def test_off_resonance_matches_high_precision(self):
        t = LorentzianTuning(1.0, 3.5e8, 3.5e9)
        a = frequency_response(t, 3.6e9)
        assert abs(a - A_36GHZ) <= 1e-13 * abs(A_36GHZ)

    def test_vanishes_at_low_frequency(self):
        t = LorentzianTuning(2.0, 1e7, 1e9)
        mags = np.abs(frequency_response(t, np.array([1e3, 1.0, 1e-3])))
        assert np.all(np.diff(mags) < 0)
        assert mags[-1] < 1e-23

    def test_pole_is_domain_error(self):
        t = LorentzianTuning(1.0, 0.0, 3.5e9)
        with pytest.raises(DomainError):
            frequency_response(t, 3.5e9)
        # undamped but off resonance is fine
        assert np.isfinite(frequency_response(t, 3.4e9))

    @pytest.mark.parametrize("f", [0.0, -1.0, np.nan])
    def test_rejects_bad_frequency(self, f):
        with pytest.raises(ValueError):
            frequency_response(LorentzianTuning(1.0, 1e8, 3e9), f)

    @pytest.mark.parametrize("args", [(0, 1e8, 3e9), (1, -1, 3e9), (1, 1e8, 0)])
    def test_tuning_validation(self, args):
        with pytest.raises(ValueError):
            LorentzianTuning(*args)


class TestNormalizedCurve:
    def test_peak_is_exactly_one(self):
        t = LorentzianTuning(1.0, 5e7, 3.5e9)
        f = np.linspace(3e9, 4e9, 501)
        c = normalized_response_curve(t, f)
        assert c.max() == 1.0
        assert np.all((c >= 0) & (c <= 1))

    def test_peak_at_resonance_sample(self):
        t = LorentzianTuning(1.0, 1e6, 3.5e9)
        f = np.linspace(3e9, 4e9, 1001)  # contains 3.5e9 at index 500
        c = normalized_response_curve(t, f)
        dense = np.linspace(3e9, 4e9, 200_001)
        oracle = dense[np.argmax(np.abs(t.oscillator_strength * dense**2
                                        / (t.resonance_frequency**2 - dense**2 + 1j * 1e6 * dense)))]
        assert f[np.argmax(c)] == pytest.approx(oracle, abs=f[1] - f[0])
        assert np.argmax(c) == 500

    def test_single_point(self):
        assert normalized_response_curve(LorentzianTuning(1, 1e8, 3e9), [2e9]).tolist() == [1.0]

    def test_smaller_damping_is_narrower(self):
        f = np.linspace(3e9, 4e9, 2001)
        wide = half_power_bandwidth(f, normalized_response_curve(LorentzianTuning(1, 2e8, 3.5e9), f))
        narrow = half_power_bandwidth(f, normalized_response_curve(LorentzianTuning(1, 5e7, 3.5e9), f))
        assert narrow < wide
        # for high Q the half-power width approaches chi
        assert narrow == pytest.approx(5e7, rel=0.05)

    @pytest.mark.parametrize("grid", [[], [3e9, 3e9], [3e9, 2e9], [-1.0, 1.0]])
    def test_bad_grids(self, grid):
        with pytest.raises(ValueError):
            normalized_response_curve(LorentzianTuning(1, 1e8, 3e9), grid)

    def test_far_below_resonance_is_flat(self):
        # a resonance well below the band gives the frequency-flat profile
        f = np.linspace(3e9, 4e9, 101)
        c = normalized_response_curve(LorentzianTuning(1, 1e8, 1e9), f)
        assert c.min() > 0.9


class TestLorentzianWeight:
    def test_on_state(self):
        w = lorentzian_phase_weight(math.pi / 2)
        assert w.value == pytest.approx(1j, abs=1e-15)
        assert w.set is FeasibleSet.LORENTZIAN_PHASE

    def test_off_state(self):
        assert abs(lorentzian_phase_weight(-math.pi / 2).value) < 1e-15

    def test_zero_phase(self):
        w = lorentzian_phase_weight(0.0)
        assert w.value == pytest.approx((1 + 1j) / 2, abs=1e-15)
        assert abs(w.value) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_phase_reduced(self):
        w = lorentzian_phase_weight(0.3 + 4 * math.pi)
        assert w.phase == pytest.approx(0.3, abs=1e-12)

    @pytest.mark.parametrize("phi", [math.inf, math.nan])
    def test_non_finite(self, phi):
        with pytest.raises(ValueError):
            lorentzian_phase_weight(phi)

    @given(st.floats(min_value=-1e6, max_value=1e6))
    def test_on_circle(self, phi):
        q = lorentzian_phase_weight(phi).value
        assert abs(abs(q - 0.5j) - 0.5) <= 1e-12


class TestProjection:
    def test_ray_through_top(self):
        assert project_weight(2j, FeasibleSet.LORENTZIAN_PHASE).value == pytest.approx(1j, abs=1e-15)

    def test_unit_modulus_zero_tiebreak(self):
        assert project_weight(0, FeasibleSet.UNIT_MODULUS).value == 1

    def test_lorentzian_center_tiebreak(self):
        assert project_weight(0.5j, FeasibleSet.LORENTZIAN_PHASE).value == 1j

    def test_binary_tiebreak(self):
        assert project_weight(0.5 + 3j, FeasibleSet.BINARY_AMPLITUDE).value == 1
        assert project_weight(0.49, FeasibleSet.BINARY_AMPLITUDE).value == 0

    def test_lorentzian_of_one_against_brute_force(self):
        grid = circle_grid()
        best = np.abs(1 - grid).min()
        q = project_weight(1, FeasibleSet.LORENTZIAN_PHASE).value
        w = 1 - 0.5j
        assert q == pytest.approx(0.5j + 0.5 * w / abs(w), abs=1e-15)
        assert abs(1 - q) <= best
        assert best - abs(1 - q) < 1e-9

    def test_phase_recorded(self):
        w = project_weight(3 + 0.5j, FeasibleSet.LORENTZIAN_PHASE)
        assert w.phase == pytest.approx(0.0, abs=1e-15)
        assert w.value == pytest.approx(lorentzian_phase_weight(w.phase).value, abs=1e-15)

    def test_unconstrained_identity(self):
        assert project_weight(3 - 4j, FeasibleSet.UNCONSTRAINED).value == 3 - 4j

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            project_weight(complex(math.inf, 0), FeasibleSet.UNIT_MODULUS)

    @given(complexes, st.sampled_from(list(FeasibleSet)))
    def test_idempotent(self, z, fset):
        q = project_weight(z, fset).value
        assert abs(project_weight(q, fset).value - q) <= 1e-12

    @given(complexes, st.sampled_from(list(FeasibleSet)))
    def test_result_is_member(self, z, fset):
        assert bool(is_member(project_weight(z, fset).value, fset))

    def test_optimal_against_discretized_sets(self):
        rng = np.random.default_rng(7)
        zs = 3 * (rng.standard_normal(1000) + 1j * rng.standard_normal(1000))
        phis = np.linspace(-np.pi, np.pi, 100_000, endpoint=False)
        grids = {
            # worst-case grid excess is the chord to the nearest grid point
            FeasibleSet.LORENTZIAN_PHASE: (circle_grid(), np.sin(np.pi / 200_000)),
            FeasibleSet.UNIT_MODULUS: (np.exp(1j * phis), 2 * np.sin(np.pi / 200_000)),
            FeasibleSet.BINARY_AMPLITUDE: (np.array([0, 1], dtype=complex), 0.0),
        }
        for fset, (grid, bound) in grids.items():
            proj = project(zs, fset)
            d_proj = np.abs(zs - proj)
            d_grid = np.abs(zs[:, None] - grid[None, :]).min(axis=1)
            assert np.all(d_proj <= d_grid + 1e-12), fset
            assert np.all(d_grid - d_proj <= bound + 1e-12), fset

    @pytest.mark.parametrize("z", [5e-324j, 5e-324 + 5e-324j, 0.5j - 5e-324, 1.7e308 - 1.7e308j])
    @pytest.mark.parametrize("fset", [FeasibleSet.UNIT_MODULUS, FeasibleSet.LORENTZIAN_PHASE])
    def test_extreme_magnitudes(self, z, fset):
        q = project_weight(z, fset).value
        assert bool(is_member(q, fset))
        center = 0.5j if fset is FeasibleSet.LORENTZIAN_PHASE else 0
        assert cmath.phase(q - center) == pytest.approx(cmath.phase(z - center), abs=1e-15)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(0)
        z = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        for fset in FeasibleSet:
            vec = project(z, fset)
            assert np.array_equal(vec, [project_weight(v, fset).value for v in z])


def test_element_weight_membership_enforced():
    with pytest.raises(ValueError):
        ElementWeight(0.3, FeasibleSet.BINARY_AMPLITUDE)
    with pytest.raises(ValueError):
        ElementWeight(0.5, FeasibleSet.LORENTZIAN_PHASE)
    ElementWeight(cmath.exp(0.7j), FeasibleSet.UNIT_MODULUS)


def test_weights_are_immutable():
    w = lorentzian_phase_weight(0.1)
    with pytest.raises(AttributeError):
        w.value = 1j
