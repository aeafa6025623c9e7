import pytest

from casimir.catalog import resolve_material, silica_oscillators
from casimir.constants import KB_J_K, PI, ZETA3
from casimir.errors import AccuracyWarning, ConfigurationError, DomainError
from casimir.materials import OscillatorSet
from casimir.oracles import (casimir_polder_entropy_t0, classical_limit, dielectric_entropy_asymptotics,
                             metal_entropy_asymptotics, oscillator_relaxation_length, plasma_te_integral, polylog3)

DRUDE = resolve_material("drude:au")


def test_polylog3():
    assert polylog3(1.0) == ZETA3
    assert polylog3(0.0) == 0.0
    assert polylog3(0.34129) == pytest.approx(0.35754, abs=1e-4)
    with pytest.raises(DomainError):
        polylog3(1.5)


def test_plasma_low_temperature_entropy():
    expansion = metal_entropy_asymptotics("plasma_low_t", 1e-6, 10.0, {"omega_p": 9.0})
    assert expansion.leading_power == 2.0
    assert expansion.leading_value == pytest.approx(1.511e-16, rel=1e-3)
    assert expansion.value == pytest.approx(1.567e-16, rel=1e-2)
    assert expansion.sign == 1
    assert not expansion.warnings


def test_drude_limit_series_against_integral():
    integral = metal_entropy_asymptotics("drude_t0_integral", 1e-6, 0.0, DRUDE)
    series = metal_entropy_asymptotics("drude_t0_series", 1e-6, 0.0, DRUDE)
    assert integral.value < 0
    assert series.value == pytest.approx(integral.value, rel=1e-2)
    # bounded by the ideal-metal l = 0 value
    assert abs(integral.value) < KB_J_K * ZETA3 / (16 * PI * 1e-12)


def test_series_warns_outside_small_skin_depth():
    with pytest.warns(AccuracyWarning):
        expansion = metal_entropy_asymptotics("drude_t0_series", 1e-7, 0.0, DRUDE)
    assert expansion.warnings


def test_shape_only_expansions():
    assert metal_entropy_asymptotics("drude_impurity", 1e-6, 1.0).leading_power == 1.0
    assert metal_entropy_asymptotics("drude_impurity", 1e-6, 1.0).sign == -1
    assert metal_entropy_asymptotics("nonlocal_perfect", 1e-6, 1.0).leading_power == 0.5
    assert metal_entropy_asymptotics("nonlocal_impurity", 1e-6, 1.0).value is None
    with pytest.raises(ConfigurationError):
        metal_entropy_asymptotics("graphene", 1e-6, 1.0)


def test_plasma_te_integral_limits():
    # large plasma frequency approaches the ideal-metal TE integrals
    assert plasma_te_integral(1e-6, 1e4, 1) == pytest.approx(-ZETA3, rel=1e-3)
    assert plasma_te_integral(1e-6, 1e4, 2) == pytest.approx(2 * ZETA3, rel=1e-3)
    assert -ZETA3 < plasma_te_integral(1e-6, 9.0, 1) < 0


def test_classical_limits():
    f_ideal, p_ideal = classical_limit("ideal_metal", 6e-6, 300.0)
    f_drude, p_drude = classical_limit("drude", 6e-6, 300.0)
    assert f_drude == pytest.approx(f_ideal / 2) and p_drude == pytest.approx(p_ideal / 2)
    f_plasma, _ = classical_limit("plasma", 6e-6, 300.0, {"omega_p": 9.0})
    assert f_ideal < f_plasma < f_drude
    f_diel, _ = classical_limit("ideal_dielectric", 6e-6, 300.0, {"eps0": 3.81})
    assert f_drude / f_diel == pytest.approx(ZETA3 / polylog3(0.34129), rel=1e-4)
    assert f_drude / f_diel == pytest.approx(3.362, rel=1e-3)
    with pytest.raises(ConfigurationError):
        classical_limit("plasma", 6e-6, 300.0)


def test_silica_relaxation_length():
    assert oscillator_relaxation_length(silica_oscillators()) == pytest.approx(2.2e-7, rel=2e-2)


def test_dielectric_expansions():
    osc = silica_oscillators()
    real = dielectric_entropy_asymptotics("real_t0", 1e-6, 0.0, osc)
    assert real.value == pytest.approx(KB_J_K * (ZETA3 - 0.35754) / (16 * PI * 1e-12), rel=1e-3)
    ideal = dielectric_entropy_asymptotics("ideal_low_t", 1e-6, 1.0, osc)
    assert ideal.leading_power == 1.0
    assert ideal.leading_value > 0
    undamped = OscillatorSet.from_triples([(o.strength, o.frequency, 0.0) for o in osc.oscillators])
    lossless = dielectric_entropy_asymptotics("ideal_low_t", 1e-6, 1.0, undamped)
    assert lossless.leading_power == 2.0


def test_atom_plate_entropy():
    assert casimir_polder_entropy_t0(1e-6, 1e-39, float("inf")) == 0.0
    assert casimir_polder_entropy_t0(1e-6, 1e-39, 3.81) > 0
    with pytest.raises(DomainError):
        casimir_polder_entropy_t0(0.0, 1e-39, 3.81)
