import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from irsassoc.errors import GeometryError, InvalidInputError
from irsassoc.propagation import (
    SPEED_OF_LIGHT,
    AtmosphereConfig,
    IrsPanel,
    RadioConfig,
    ScatterAngles,
    element_angles,
    element_gain,
    element_pathloss,
    mixing_ratio,
    panel_cascade,
    propagation_phase,
    saturation_pressure,
    wavelength,
)

# frozen from a 40-digit mpmath evaluation of the closed forms
PSAT_296 = 27.948181426750768
MU_296_50 = 0.013791355256230332
BORESIGHT_GAIN = 4.042589962686201
BORESIGHT_PL_1M = 1.6211389382774043e-16


class TestWavelength:
    def test_300ghz(self):
        assert wavelength(300e9) == pytest.approx(0.9993081933333333e-3, rel=1e-12)

    def test_speed_of_light_gives_one_meter(self):
        assert wavelength(SPEED_OF_LIGHT) == 1.0

    def test_inverse_proportional(self):
        assert wavelength(150e9) == pytest.approx(2 * wavelength(300e9), rel=1e-15)

    @pytest.mark.parametrize("f", [0.0, -1.0])
    def test_rejects_nonpositive(self, f):
        with pytest.raises(InvalidInputError):
            wavelength(f)


class TestAtmosphere:
    def test_saturation_pressure_standard(self):
        assert saturation_pressure(296.0, 1013.25) == pytest.approx(PSAT_296, rel=1e-12)

    def test_exponent_vanishes_at_freezing(self):
        assert saturation_pressure(273.15, 0.0) == pytest.approx(6.1121 * 1.0007, rel=1e-15)

    def test_pressure_enters_linearly(self):
        ratio = saturation_pressure(296, 1013.25) / saturation_pressure(296, 0)
        assert ratio == pytest.approx((1.0007 + 3.46e-6 * 1013.25) / 1.0007, rel=1e-14)

    def test_singularity(self):
        with pytest.raises(InvalidInputError):
            saturation_pressure(32.18, 1000)

    @given(st.floats(273.2, 400), st.floats(1e-3, 50))
    def test_increasing_in_temperature(self, t, dt):
        assert saturation_pressure(t + dt, 1013.25) > saturation_pressure(t, 1013.25)

    def test_mixing_ratio(self):
        assert mixing_ratio(AtmosphereConfig(relative_humidity=0)) == 0.0
        mu50 = mixing_ratio(AtmosphereConfig())
        assert mu50 == pytest.approx(MU_296_50, rel=1e-12)
        assert mixing_ratio(AtmosphereConfig(relative_humidity=100)) == pytest.approx(2 * mu50, rel=1e-15)

    def test_mixing_ratio_zero_pressure(self):
        with pytest.raises(InvalidInputError):
            mixing_ratio(AtmosphereConfig(pressure=0.0))

    def test_humidity_range(self):
        with pytest.raises(InvalidInputError):
            AtmosphereConfig(relative_humidity=101)

    def test_absorption_hook(self):
        seen = {}

        def model(f, mu):
            seen["args"] = (f, mu)
            return 0.01

        radio = RadioConfig(absorption_model=model)
        assert radio.absorption(AtmosphereConfig()) == 0.01
        assert seen["args"] == (300e9, pytest.approx(MU_296_50))
        assert RadioConfig().absorption() == 0.0033


class TestPanel:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidInputError):
            IrsPanel(0, (0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 1, 0), (2, 2), 1e-3)

    def test_grid_centered(self):
        p = IrsPanel.facing(0, (1, 2, 3), (0, 1, 0), (3, 4), 0.5)
        pos = p.element_positions()
        assert pos.shape == (12, 3)
        np.testing.assert_allclose(pos.mean(axis=0), [1, 2, 3], atol=1e-12)
        # elements lie in the panel plane
        np.testing.assert_allclose((pos - p.center) @ p.normal, 0, atol=1e-12)

    def test_pitch(self):
        p = IrsPanel.facing(0, (0, 0, 0), (1, 0, 0), (1, 2), 0.25)
        pos = p.element_positions()
        assert np.linalg.norm(pos[1] - pos[0]) == pytest.approx(0.25)


def _rotation_oracle(panel, e, point):
    """Angles from an explicit world->panel rotation matrix."""
    rot = np.vstack([panel.axis_u, panel.axis_v, panel.normal])
    x, y, z = rot @ (np.asarray(point, float) - e)
    r = math.sqrt(x * x + y * y + z * z)
    psi = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    return psi, phi, r


class TestElementAngles:
    def test_boresight(self, boresight_panel):
        a = element_angles(boresight_panel, 0, (0, 0, 2), (0, 0, 5))
        assert a.psi_i == pytest.approx(0, abs=1e-12)
        assert a.psi_s == pytest.approx(0, abs=1e-12)

    def test_grazing(self, boresight_panel):
        a = element_angles(boresight_panel, 0, (3, 0, 0), (0, 0, 5))
        assert a.psi_i == pytest.approx(math.pi / 2, abs=1e-12)

    def test_behind(self, boresight_panel):
        with pytest.raises(GeometryError):
            element_angles(boresight_panel, 0, (0, 0, -1), (0, 0, 5))
        with pytest.raises(GeometryError):
            element_angles(boresight_panel, 0, (0, 0, 1), (1, 1, -0.1))

    def test_randomized_against_rotation_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            normal = rng.normal(size=3)
            panel = IrsPanel.facing(0, rng.uniform(-5, 5, 3), normal, (3, 3), 0.01)
            m = int(rng.integers(9))
            e = panel.element_positions()[m]
            pts = []
            for _ in range(2):
                d = rng.normal(size=3)
                d = d if d @ panel.normal > 0 else -d
                pts.append(e + rng.uniform(0.5, 10) * d / np.linalg.norm(d))
            a = element_angles(panel, m, pts[0], pts[1])
            psi_i, _, _ = _rotation_oracle(panel, e, pts[0])
            psi_s, phi_s, _ = _rotation_oracle(panel, e, pts[1])
            assert a.psi_i == pytest.approx(psi_i, abs=1e-9)
            assert a.psi_s == pytest.approx(psi_s, abs=1e-9)
            assert a.phi_s == pytest.approx(phi_s, abs=1e-9)


angles = st.builds(
    ScatterAngles,
    st.floats(0, math.pi / 2),
    st.floats(0, math.pi / 2),
    st.floats(-math.pi, math.pi),
)


class TestElementGain:
    def test_boresight_golden(self):
        lam = 1e-3
        g = element_gain(ScatterAngles(0, 0, 0), 0.16 * lam ** 2, lam)
        assert abs(g - (0.64 * math.pi) ** 2) <= 1e-9
        assert g == pytest.approx(BORESIGHT_GAIN, rel=1e-14)

    def test_grazing_incidence(self):
        assert element_gain(ScatterAngles(math.pi / 2, 0.3, 0.2), 1e-7, 1e-3) == pytest.approx(0, abs=1e-20)

    @given(st.floats(0, math.pi / 2), st.floats(0, math.pi / 2))
    def test_azimuth_quarter_turn(self, psi_i, psi_s):
        lam, area = 1e-3, 1.6e-7
        g = element_gain(ScatterAngles(psi_i, psi_s, math.pi / 2), area, lam)
        eta = math.sqrt(g) / (4 * math.pi * area / lam ** 2)
        assert eta == pytest.approx(abs(math.cos(psi_i)), abs=1e-12)

    @given(angles)
    def test_even_in_azimuth(self, a):
        g1 = element_gain(a, 1e-7, 1e-3)
        g2 = element_gain(a._replace(phi_s=-a.phi_s), 1e-7, 1e-3)
        assert g1 == pytest.approx(g2, rel=1e-12, abs=1e-30)

    @given(angles, st.floats(0.1, 10))
    def test_area_squared(self, a, c):
        g1 = element_gain(a, 1e-7, 1e-3)
        assert element_gain(a, c * 1e-7, 1e-3) == pytest.approx(c ** 2 * g1, rel=1e-12, abs=1e-30)

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidInputError):
            element_gain(ScatterAngles(0, 0, 0), 0, 1e-3)


class TestElementPathloss:
    def test_boresight_golden(self, boresight_panel, mm_radio):
        # source and destination may share a point; both hops are 1 m on the normal
        pl = element_pathloss((0, 0, 1), boresight_panel, 0, (0, 0, 1), mm_radio)
        assert pl == pytest.approx(BORESIGHT_PL_1M, rel=1e-12)

    def test_absorption_factor(self, boresight_panel, mm_radio):
        from dataclasses import replace

        lossy = replace(mm_radio, absorption_coeff=0.0033)
        base = element_pathloss((0, 0, 4), boresight_panel, 0, (0, 0, 6), mm_radio)
        att = element_pathloss((0, 0, 4), boresight_panel, 0, (0, 0, 6), lossy)
        assert att / base == pytest.approx(0.9675385595890320, rel=1e-12)

    def test_doubling_distances(self, boresight_panel, mm_radio):
        a = element_pathloss((0.3, 0.1, 2), boresight_panel, 0, (-0.5, 0.2, 3), mm_radio)
        b = element_pathloss((0.6, 0.2, 4), boresight_panel, 0, (-1.0, 0.4, 6), mm_radio)
        assert b == pytest.approx(a / 16, rel=1e-12)

    def test_symmetric_when_roles_swap(self, mm_radio):
        # in the u-n plane (phi_s = 0 or pi) the scatter factor reduces to cos^2 psi_s,
        # the same form as the incidence factor
        panel = IrsPanel.facing(0, (0, 0, 0), (0, 1, 0), (1, 1), 4e-4)
        u = panel.axis_u
        p1 = 2.0 * panel.normal + 0.7 * u
        p2 = 3.0 * panel.normal - 1.1 * u
        assert element_pathloss(p1, panel, 0, p2, mm_radio) == pytest.approx(
            element_pathloss(p2, panel, 0, p1, mm_radio), rel=1e-12)

    def test_zero_distance(self, boresight_panel, mm_radio):
        with pytest.raises(GeometryError):
            element_pathloss((0, 0, 0), boresight_panel, 0, (0, 0, 1), mm_radio)

    def test_vectorised_matches_scalar(self):
        radio = RadioConfig()
        panel = IrsPanel.facing(0, (0, 0, 2.5), (0, 1, 0), (3, 3), 0.4 * radio.wavelength)
        src = np.array([[1.0, 3.0, 1.5], [-2.0, 7.0, 1.5]])
        dst = np.array([[4.0, 2.0, 1.5]])
        loss, phase = panel_cascade(panel, src, dst, radio, radio.absorption())
        for k in range(2):
            for m in range(9):
                ref = element_pathloss(src[k], panel, m, dst[0], radio)
                assert loss[k, m, 0] == pytest.approx(ref, rel=1e-12)


class TestPhase:
    def test_full_wavelength(self):
        assert propagation_phase(0.4e-3, 0.6e-3, 1e-3) == pytest.approx(0, abs=1e-9)

    def test_half_wavelength(self):
        assert propagation_phase(0.2e-3, 0.3e-3, 1e-3) == pytest.approx(math.pi, rel=1e-12)

    def test_extended_precision_oracle(self):
        mpmath.mp.dps = 50
        d1, d2, lam = 4.0001, 6.0002, 1e-3
        exact = mpmath.fmod(2 * mpmath.pi * (mpmath.mpf(d1) + mpmath.mpf(d2)) / mpmath.mpf(lam), 2 * mpmath.pi)
        assert float(propagation_phase(d1, d2, lam)) == pytest.approx(float(exact), abs=1e-6)

    @given(st.floats(0, 50), st.floats(0, 50))
    def test_range(self, d1, d2):
        ph = float(propagation_phase(d1, d2, 1e-3))
        assert 0 <= ph < 2 * math.pi
