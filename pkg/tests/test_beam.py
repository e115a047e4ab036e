"""Beam-level statics, modal analysis and coupling factors."""

import numpy as np
import pytest

from pzbeam import (
    Beam,
    BeamError,
    GeneralizedState,
    Layer,
    Section,
    cantilever_tip_deflection,
    coupling_factor,
    free_actuation_state,
    make_beam,
    modal_frequencies,
    reduce_section,
    sensor_charge,
)
from pzbeam.section import PlaneMaterial

DIELECTRIC = PlaneMaterial(name="dielectric", Q11=60e9, Q12=18e9, Q22=60e9,
                           e31=0.0, e32=0.0, eps33=1.5e-8, density=7500.0)


class TestFreeActuation:
    def test_zero_voltage(self, sandwich):
        k = reduce_section(sandwich, "nsr")
        state = free_actuation_state(k, [0.0])
        assert state.eps == 0.0 and state.kappa == 0.0

    def test_mirror_sandwich_pure_bending(self, sandwich):
        k = reduce_section(sandwich, "nsr")
        state = free_actuation_state(k, [100.0])
        assert state.kappa != 0.0
        assert abs(state.eps) <= 1e-12 * abs(state.kappa) * sandwich.thickness

    def test_same_poled_sandwich_pure_extension(self, same_poled_sandwich):
        k = reduce_section(same_poled_sandwich, "nsr")
        state = free_actuation_state(k, [100.0])
        assert state.eps != 0.0
        assert abs(state.kappa) * same_poled_sandwich.thickness <= 1e-12 * abs(state.eps)

    def test_unimorph_fixture(self, unimorph):
        """Frozen 2x2 solve with the shipped records."""
        k = reduce_section(unimorph, "nsr")
        state = free_actuation_state(k, [100.0])
        assert state.eps == pytest.approx(2.330891306694728e-05, rel=1e-10)
        assert state.kappa == pytest.approx(-0.0868524496997991, rel=1e-10)

    def test_voltage_count_checked(self, sandwich):
        k = reduce_section(sandwich, "nsr")
        with pytest.raises(BeamError, match="voltages"):
            free_actuation_state(k, [1.0, 2.0])


class TestTipDeflection:
    def test_zero_voltage(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        assert cantilever_tip_deflection(beam, [0.0]) == 0.0

    def test_length_squared_scaling(self, sandwich):
        d1 = cantilever_tip_deflection(make_beam(sandwich, "nsr", 0.1), [50.0])
        d2 = cantilever_tip_deflection(make_beam(sandwich, "nsr", 0.2), [50.0])
        assert d2 == 4.0 * d1

    def test_linear_in_voltage(self, unimorph):
        beam = make_beam(unimorph, "ns", 0.08)
        d1 = cantilever_tip_deflection(beam, [40.0])
        d3 = cantilever_tip_deflection(beam, [120.0])
        assert d3 == pytest.approx(3.0 * d1, rel=1e-12)

    def test_bimorph_against_classical_formula(self, bimorph):
        """Opposed pair, each layer under field 2V/h_total; classical series
        deflection 3 d31 V L^2 / (2 h^2) evaluated at the equivalent drive.

        The pointwise null-transverse-stress closure condenses to the uniaxial
        law when d31 = d32, so the ratio is 1 up to round-off; the transverse
        kinematics of the other closures shifts it.
        """
        d31 = -320e-12
        length, h_total, volts = 50e-3, 1.0e-3, 10.0
        beam = make_beam(bimorph, "ns", length)
        deflection = cantilever_tip_deflection(beam, [volts])
        classical = 3 * d31 * (2 * volts) * length ** 2 / (2 * h_total ** 2)
        ratio = deflection / classical
        assert ratio == pytest.approx(1.0, abs=0.15)
        assert ratio == pytest.approx(1.0, rel=1e-9)   # frozen regression
        nd_ratio = cantilever_tip_deflection(make_beam(bimorph, "nd", length), [volts]) / classical
        assert nd_ratio == pytest.approx(1.2896969696969693, rel=1e-9)

    def test_requires_cantilever(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1, boundary="simply-supported")
        with pytest.raises(BeamError, match="cantilever"):
            cantilever_tip_deflection(beam, [1.0])


class TestSensorCharge:
    def test_zero_state(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        assert np.all(sensor_charge(beam, GeneralizedState()) == 0.0)

    def test_extension_decoupled_on_mirror_sandwich(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        q = sensor_charge(beam, GeneralizedState(eps=1e-4))
        k = beam.constitutive
        assert abs(q[0]) <= 1e-12 * abs(k.gk[0]) / sandwich.thickness * 1e-4

    def test_curvature_fixture_and_reciprocity(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        kappa = 0.01
        q = sensor_charge(beam, GeneralizedState(kappa=kappa))
        assert q[0] == pytest.approx(-7.601769641523459e-06, rel=1e-10)
        # charge per unit curvature equals moment per unit voltage
        assert q[0] == pytest.approx(beam.constitutive.gk[0] * kappa, rel=1e-12)


class TestModal:
    def test_zero_coupling_open_equals_short(self):
        section = Section(layers=(Layer(DIELECTRIC, 1e-3, poling=+1, electroded=True),),
                          width=0.02)
        beam = make_beam(section, "nsr", 0.1)
        np.testing.assert_array_equal(modal_frequencies(beam, "open", 5),
                                      modal_frequencies(beam, "short", 5))
        assert coupling_factor(beam, 1) == 0.0

    @pytest.mark.parametrize("closure", ["nd", "ns", "nsr"])
    def test_open_stiffening(self, sandwich, closure):
        beam = make_beam(sandwich, closure, 0.1)
        f_short = modal_frequencies(beam, "short", 4)
        f_open = modal_frequencies(beam, "open", 4)
        assert np.all(f_open >= f_short)

    def test_first_frequency_fixture(self, sandwich):
        """Hand evaluation of the closed form with the reduced stiffness."""
        beam = make_beam(sandwich, "nsr", 0.1)
        k = beam.constitutive
        d_eff = k.bending_stiffness - k.coupling_stiffness ** 2 / k.extension_stiffness
        expected = 1.87510407 ** 2 / (2 * np.pi) * np.sqrt(
            d_eff / (beam.mass_per_length * 0.1 ** 4))
        got = modal_frequencies(beam, "short", 1)[0]
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(169.7018285271727, rel=1e-10)
        assert beam.mass_per_length == pytest.approx(0.1710936, rel=1e-12)

    def test_inverse_length_squared_scaling(self, sandwich):
        f1 = modal_frequencies(make_beam(sandwich, "nsr", 0.1), "short", 3)
        f2 = modal_frequencies(make_beam(sandwich, "nsr", 0.2), "short", 3)
        np.testing.assert_allclose(f2, f1 / 4.0, rtol=1e-12)

    def test_simply_supported_mode_ratios(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.15, boundary="simply-supported")
        f = modal_frequencies(beam, "short", 3)
        np.testing.assert_allclose(f / f[0], [1.0, 4.0, 9.0], rtol=1e-12)

    def test_cantilever_asymptotic_roots(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        f = modal_frequencies(beam, "short", 5)
        base = f[0] / 1.87510407 ** 2
        assert f[3] == pytest.approx(base * (np.pi * 3.5) ** 2, rel=1e-9)
        assert f[4] == pytest.approx(base * (np.pi * 4.5) ** 2, rel=1e-9)

    def test_validation(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        with pytest.raises(BeamError):
            modal_frequencies(beam, "grounded", 2)
        with pytest.raises(BeamError):
            modal_frequencies(beam, "short", 0)
        with pytest.raises(BeamError):
            make_beam(sandwich, "nsr", -0.1)
        with pytest.raises(BeamError):
            Beam(constitutive=beam.constitutive, mass_per_length=0.0, length=0.1)


class TestCouplingFactor:
    def test_fixtures_and_ordering(self, sandwich):
        """Frozen from the reduced matrices of the shipped sandwich."""
        k2 = {c: coupling_factor(make_beam(sandwich, c, 0.1), 1) for c in ("nd", "ns", "nsr")}
        assert k2["nd"] == pytest.approx(0.3276947057815043, rel=1e-9)
        assert k2["ns"] == pytest.approx(0.10791589677630035, rel=1e-9)
        assert k2["nsr"] == pytest.approx(0.12972668315608715, rel=1e-9)
        assert k2["ns"] < k2["nsr"] < k2["nd"]

    def test_length_invariance(self, sandwich):
        short = coupling_factor(make_beam(sandwich, "nsr", 0.05), 1)
        long = coupling_factor(make_beam(sandwich, "nsr", 0.4), 1)
        assert short == pytest.approx(long, rel=1e-12)

    def test_nonnegative_and_mode_validated(self, sandwich):
        beam = make_beam(sandwich, "nsr", 0.1)
        assert coupling_factor(beam, 3) >= 0.0
        with pytest.raises(BeamError):
            coupling_factor(beam, 0)
