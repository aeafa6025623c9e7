import math

import pytest

from casimir import lifshitz
from casimir.catalog import resolve_material
from casimir.config import MatsubaraConfig
from casimir.constants import HBARC_J_M
from casimir.errors import DomainError
from casimir.lifshitz import (CasimirResult, Quantity, energy_zero_t, force_zero_t, free_energy, pressure,
                              regime_threshold)
from casimir.oracles import classical_limit
from casimir.reflection import ReflectionPair, reflection_coefficients
from casimir.thermo import thermal_correction

CFG = MatsubaraConfig()
IDEAL = resolve_material("ideal-metal")
DRUDE = resolve_material("drude:au")
PLASMA = resolve_material("plasma:au")


@pytest.mark.parametrize("a", [1e-7, 1e-6])
def test_ideal_metal_zero_temperature(a):
    energy = energy_zero_t(a, IDEAL, IDEAL, CFG)
    force = force_zero_t(a, IDEAL, IDEAL, CFG)
    assert energy.value == pytest.approx(-math.pi ** 2 * HBARC_J_M / (720 * a ** 3), rel=1e-6)
    assert force.value == pytest.approx(-math.pi ** 2 * HBARC_J_M / (240 * a ** 4), rel=1e-6)
    assert force.kind is Quantity.FORCE_ZERO_T
    assert force.units == "N/m^2"
    assert force.temperature == 0.0


def test_zero_temperature_pressure_at_one_micron():
    assert force_zero_t(1e-6, IDEAL, IDEAL, CFG).value == pytest.approx(-1.3001e-3, rel=1e-4)


def test_classical_limit_ideal_metal():
    a, T = 6e-6, 300.0
    f_cl, p_cl = classical_limit("ideal_metal", a, T)
    assert pressure(a, T, IDEAL, IDEAL, CFG).value == pytest.approx(p_cl, rel=1e-2)
    assert free_energy(a, T, IDEAL, IDEAL, CFG).value == pytest.approx(f_cl, rel=1e-2)


def test_classical_limit_drude_is_half_ideal():
    a, T = 6e-6, 300.0
    drude = pressure(a, T, DRUDE, DRUDE, CFG)
    ideal = pressure(a, T, IDEAL, IDEAL, CFG)
    assert drude.value == pytest.approx(classical_limit("drude", a, T)[1], rel=1e-2)
    assert drude.value == pytest.approx(-0.917e-6, rel=1e-2)
    assert drude.value / ideal.value == pytest.approx(0.5, abs=5e-3)


def test_classical_limit_plasma():
    a, T = 6e-6, 300.0
    p_cl = classical_limit("plasma", a, T, {"omega_p": 9.0})[1]
    assert pressure(a, T, PLASMA, PLASMA, CFG).value == pytest.approx(p_cl, rel=1e-2)


def test_result_metadata():
    result = pressure(1e-6, 300.0, DRUDE, DRUDE, CFG)
    assert isinstance(result, CasimirResult)
    assert result.converged
    assert result.value < 0
    assert result.truncation_error <= CFG.rel_tol * abs(result.value)
    assert result.terms_used > 1
    assert not result.euler_maclaurin
    assert result.model_dump(mode="json")["kind"] == "pressure"


def test_asymmetric_plates_lie_between_symmetric_ones():
    a, T = 1e-6, 300.0
    dd = pressure(a, T, DRUDE, DRUDE, CFG).value
    pp = pressure(a, T, PLASMA, PLASMA, CFG).value
    dp = pressure(a, T, DRUDE, PLASMA, CFG).value
    assert min(dd, pp) < dp < max(dd, pp)
    assert pressure(a, T, PLASMA, DRUDE, CFG).value == pytest.approx(dp, rel=1e-10)


@pytest.mark.parametrize("a, expected", [(5e-7, -0.064), (7e-7, -0.094), (1e-6, -0.138)])
def test_drude_thermal_correction(a, expected):
    assert thermal_correction(a, 300.0, DRUDE, DRUDE, CFG, "at_zero") == pytest.approx(expected, abs=5e-3)


def test_thermal_correction_conventions_share_numerator():
    at_t = thermal_correction(5e-7, 300.0, DRUDE, DRUDE, CFG, "at_T")
    at_zero = thermal_correction(5e-7, 300.0, DRUDE, DRUDE, CFG, "at_zero")
    assert at_t == pytest.approx(at_zero / (1 + at_zero), rel=1e-9)


@pytest.mark.parametrize("a, expected", [(5e-7, 0.00058), (1e-6, 0.0029)])
def test_plasma_thermal_correction(a, expected):
    assert thermal_correction(a, 300.0, PLASMA, PLASMA, CFG) == pytest.approx(expected, abs=5e-4)


@pytest.mark.slow
def test_drude_thermal_correction_changes_sign():
    assert thermal_correction(6.0e-6, 300.0, DRUDE, DRUDE, CFG) < 0
    assert thermal_correction(6.6e-6, 300.0, DRUDE, DRUDE, CFG) > 0


def test_zero_temperature_drude_close_to_plasma():
    drude = energy_zero_t(1e-6, DRUDE, DRUDE, CFG).value
    plasma = energy_zero_t(1e-6, PLASMA, PLASMA, CFG).value
    assert drude == pytest.approx(plasma, rel=6e-3)
    assert abs(drude) < abs(plasma)


@pytest.mark.parametrize("quantity", [energy_zero_t, force_zero_t])
def test_large_plasma_frequency_approaches_ideal_metal(quantity):
    stiff = PLASMA.with_param("omega_p", 1e4)
    assert quantity(1e-6, stiff, stiff, CFG).value == pytest.approx(quantity(1e-6, IDEAL, IDEAL, CFG).value,
                                                                     rel=1e-3)


@pytest.mark.parametrize("quantity", [free_energy, pressure])
def test_sign_flip_of_both_plates_leaves_result_unchanged(monkeypatch, quantity):
    before = quantity(1e-6, 300.0, DRUDE, PLASMA, CFG).value

    def flipped(*args, **kwargs):
        pair = reflection_coefficients(*args, **kwargs)
        return ReflectionPair(-pair.r_tm, -pair.r_te)

    monkeypatch.setattr(lifshitz, "reflection_coefficients", flipped)
    assert quantity(1e-6, 300.0, DRUDE, PLASMA, CFG).value == pytest.approx(before, rel=1e-12)


def test_euler_maclaurin_tail_matches_direct_sum():
    a, T = 1e-7, 300.0
    direct = free_energy(a, T, DRUDE, DRUDE, MatsubaraConfig(euler_maclaurin_from=0))
    tail = free_energy(a, T, DRUDE, DRUDE, MatsubaraConfig(euler_maclaurin_from=16))
    assert tail.euler_maclaurin and not direct.euler_maclaurin
    assert tail.terms_used < direct.terms_used
    assert tail.value == pytest.approx(direct.value, rel=1e-5)


def test_capped_sum_is_flagged():
    cfg = MatsubaraConfig(l_max_cap=3, euler_maclaurin_from=0)
    result = pressure(1e-7, 300.0, DRUDE, DRUDE, cfg)
    assert not result.converged
    assert result.warnings


@pytest.mark.parametrize("a, T", [(0.0, 300.0), (-1e-6, 300.0), (1e-6, 0.0), (1e-6, -5.0)])
def test_domain_guards(a, T):
    with pytest.raises(DomainError):
        pressure(a, T, DRUDE, DRUDE, CFG)


def test_regime_threshold_at_room_temperature():
    assert regime_threshold(300.0) == pytest.approx(6.07e-7, rel=1e-2)
    with pytest.raises(DomainError):
        regime_threshold(0.0)


@pytest.mark.slow
def test_free_energy_tends_to_zero_temperature_value():
    cold = free_energy(1e-6, 1.0, PLASMA, PLASMA, CFG)
    assert cold.euler_maclaurin
    assert cold.value == pytest.approx(energy_zero_t(1e-6, PLASMA, PLASMA, CFG.at(1.0)).value, rel=1e-2)


def test_free_energy_increases_towards_zero_with_separation():
    values = [free_energy(a, 300.0, DRUDE, DRUDE, CFG).value for a in (2e-7, 5e-7, 1e-6, 3e-6)]
    assert all(v < 0 for v in values)
    assert values == sorted(values)
