import math

import numpy as np
import pytest

from casimir.catalog import resolve_material
from casimir.config import MatsubaraConfig
from casimir.errors import DomainError
from casimir.lifshitz import free_energy
from casimir.oracles import classical_limit, dielectric_entropy_asymptotics, metal_entropy_asymptotics
from casimir.thermo import (EntropySample, NernstDetector, Verdict, asymptotic_temperature, entropy,
                            finite_difference_step, natural_entropy_scale, nernst_scan, thermal_correction)

CFG = MatsubaraConfig()
GRID = [30.0, 10.0, 5.0, 2.0, 1.0, 0.5, 0.2]


def _samples(values, conclusive=True):
    return [EntropySample(temperature=t, entropy=s, fd_step=1e-3, fd_error_estimate=0.0, conclusive=conclusive)
            for t, s in zip(GRID, values)]


def test_finite_difference_step():
    assert finite_difference_step(300.0) == pytest.approx(0.3)
    assert finite_difference_step(0.5) == 1e-3
    assert finite_difference_step(2e-3) == 5e-4


def test_detector_power_law_to_zero():
    detector = NernstDetector(1e-6)
    report = detector.analyze(_samples([1e-17 * t ** 2 for t in GRID]))
    assert report.verdict is Verdict.SATISFIED
    assert report.limit_estimate == 0.0
    assert report.fitted_exponent == pytest.approx(2.0, abs=1e-6)
    assert [s.temperature for s in report.samples] == sorted(GRID)


def test_detector_nonzero_limit():
    limit = -300 * NernstDetector(1e-6).threshold
    report = NernstDetector(1e-6).analyze(_samples([limit + 1e-18 * t for t in GRID]))
    assert report.verdict is Verdict.VIOLATED
    assert report.limit_estimate == pytest.approx(limit, rel=1e-3)


def test_detector_power_law_fit_with_offset():
    detector = NernstDetector(1e-6)
    limit = 50 * detector.threshold
    report = detector.analyze(_samples([limit + 2 * limit * t for t in GRID]))
    assert report.verdict is Verdict.VIOLATED
    assert report.limit_estimate == pytest.approx(limit, rel=1e-2)
    assert report.fitted_exponent == pytest.approx(1.0, abs=1e-2)


def test_detector_keeps_plateau_with_scatter():
    plateau = -2.96e-13
    scatter = [0.012, -0.008, 0.01, 0.0, 0.004, -0.006, 0.008]
    report = NernstDetector(1e-6).analyze(_samples([plateau * (1 + e) for e in scatter]))
    assert report.verdict is Verdict.VIOLATED
    assert report.limit_estimate < 0
    assert report.limit_estimate == pytest.approx(plateau, rel=5e-2)


def test_detector_square_root_decay_above_threshold():
    detector = NernstDetector(1e-6)
    values = [1e-14 * math.sqrt(t) * (1 - 0.1 * math.sqrt(t)) for t in GRID[1:]]
    values.insert(0, 1e-14 * math.sqrt(30.0) * 0.5)
    report = detector.analyze(_samples(values))
    assert report.samples[0].entropy > detector.threshold
    assert report.verdict is Verdict.SATISFIED
    assert abs(report.limit_estimate) < detector.threshold
    assert report.fitted_exponent == pytest.approx(0.5, abs=0.1)


def test_power_law_fit_rejects_limit_of_wrong_sign():
    detector = NernstDetector(1e-6)
    T = np.array([0.2, 0.5, 1.0, 2.0])
    assert detector.fit_power_law(T, -1e-13 + 5e-14 * T) is not None
    assert detector.fit_power_law(T, 3e-14 * T ** 0.5 - 1e-15) is None
    assert detector.fit_power_law(T[:3], 1e-14 * T[:3]) is None


def test_detector_noise_is_inconclusive():
    report = NernstDetector(1e-6).analyze(_samples([1e-17 * t ** 2 for t in GRID], conclusive=False))
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.notes


@pytest.mark.parametrize("grid", [[10.0, 1.0, 0.1], [0.1, 0.2, 0.5, 1.0, 2.0, 10.0],
                                  [10.0, 8.0, 6.0, 4.0, 2.0, 1.0]])
def test_grid_validation(grid):
    ideal = resolve_material("ideal-metal")
    with pytest.raises(DomainError):
        nernst_scan(1e-6, ideal, ideal, grid, CFG)


def test_entropy_guards():
    ideal = resolve_material("ideal-metal")
    with pytest.raises(DomainError):
        entropy(1e-6, 0.0, ideal, ideal, CFG)


def test_classical_entropy_of_ideal_metal():
    ideal = resolve_material("ideal-metal")
    sample = entropy(6e-6, 300.0, ideal, ideal, CFG)
    f_cl = classical_limit("ideal_metal", 6e-6, 300.0)[0]
    assert sample.conclusive
    assert sample.entropy == pytest.approx(-f_cl / 300.0, rel=0.1)
    assert sample.fd_step == pytest.approx(0.3)


def test_dielectric_conductivity_raises_thermal_correction():
    real = resolve_material("real-dielectric:silica")
    ideal = resolve_material("ideal-dielectric:silica")
    assert thermal_correction(1e-6, 300.0, real, real, CFG, "at_zero") > 1.0
    assert 0 < thermal_correction(2e-6, 300.0, ideal, ideal, CFG, "at_zero") < 0.2


@pytest.mark.slow
def test_dc_conductivity_free_energy_ratio_at_large_separation():
    real = resolve_material("real-dielectric:silica")
    ideal = resolve_material("ideal-dielectric:silica")
    ratio = free_energy(6e-6, 300.0, real, real, CFG).value / free_energy(6e-6, 300.0, ideal, ideal, CFG).value
    assert ratio == pytest.approx(3.362, rel=1e-2)


def test_unknown_convention():
    ideal = resolve_material("ideal-metal")
    with pytest.raises(DomainError, match="at_zero"):
        thermal_correction(1e-6, 300.0, ideal, ideal, CFG, "at_room")


def test_asymptotic_temperature():
    assert asymptotic_temperature(1e-6, resolve_material("nonlocal:au")) == pytest.approx(0.851, rel=1e-3)
    assert asymptotic_temperature(2e-7, resolve_material("nonlocal:au")) == pytest.approx(4.255, rel=1e-3)
    impurity = asymptotic_temperature(1e-6, resolve_material("nonlocal:au-impurity"))
    assert impurity == pytest.approx(3.502e-5 / (2 * math.pi * 8.617333e-5), rel=1e-3)
    assert asymptotic_temperature(1e-6, resolve_material("drude:au-impurity")) == pytest.approx(7.77e-6, rel=1e-2)
    assert asymptotic_temperature(1e-6, resolve_material("drude:au")) is None
    assert asymptotic_temperature(1e-6, resolve_material("plasma:au")) is None


@pytest.mark.slow
def test_plasma_entropy_matches_low_temperature_expansion():
    plasma = resolve_material("plasma:au")
    sample = entropy(1e-6, 10.0, plasma, plasma, CFG)
    expected = metal_entropy_asymptotics("plasma_low_t", 1e-6, 10.0, plasma).value
    assert sample.conclusive
    assert sample.entropy == pytest.approx(expected, rel=5e-2)


@pytest.mark.slow
def test_drude_perfect_lattice_entropy_is_negative():
    drude = resolve_material("drude:au-perfect")
    sample = entropy(1e-6, 2.0, drude, drude, CFG)
    limit = metal_entropy_asymptotics("drude_t0_integral", 1e-6, 0.0, drude).value
    assert sample.entropy < 0
    assert sample.entropy == pytest.approx(limit, rel=2e-2)


@pytest.mark.slow
def test_real_dielectric_entropy_limit():
    silica = resolve_material("real-dielectric:silica")
    sample = entropy(1e-6, 1.0, silica, silica, CFG)
    limit = dielectric_entropy_asymptotics("real_t0", 1e-6, 0.0, silica.oscillators).value
    assert sample.entropy > 0
    assert sample.entropy == pytest.approx(limit, rel=2e-2)


@pytest.mark.slow
def test_plasma_satisfies_heat_theorem():
    plasma = resolve_material("plasma:au")
    report = nernst_scan(1e-6, plasma, plasma, GRID, CFG, workers=4)
    assert report.verdict is Verdict.SATISFIED
    assert abs(report.limit_estimate) < natural_entropy_scale(1e-6) * 1e-3
    assert np.all([s.entropy > 0 for s in report.samples])


@pytest.mark.slow
def test_ideal_dielectric_entropy_matches_low_temperature_expansion():
    silica = resolve_material("ideal-dielectric:silica")
    sample = entropy(1e-6, 2.0, silica, silica, CFG)
    expansion = dielectric_entropy_asymptotics("ideal_low_t", 1e-6, 2.0, silica.oscillators)
    assert expansion.leading_power == 1.0
    assert sample.entropy > 0
    assert sample.entropy == pytest.approx(expansion.value, rel=5e-2)


@pytest.mark.slow
def test_drude_perfect_lattice_violates_heat_theorem():
    drude = resolve_material("drude:au-perfect")
    report = nernst_scan(1e-6, drude, drude, GRID, CFG, workers=4)
    limit = metal_entropy_asymptotics("drude_t0_integral", 1e-6, 0.0, drude).value
    assert report.verdict is Verdict.VIOLATED
    assert report.limit_estimate == pytest.approx(limit, rel=2e-2)


@pytest.mark.slow
def test_real_dielectric_violates_heat_theorem():
    silica = resolve_material("real-dielectric:silica")
    report = nernst_scan(1e-6, silica, silica, GRID, CFG, workers=4)
    limit = dielectric_entropy_asymptotics("real_t0", 1e-6, 0.0, silica.oscillators).value
    assert report.verdict is Verdict.VIOLATED
    assert report.limit_estimate == pytest.approx(limit, rel=2e-2)


@pytest.mark.slow
def test_nonlocal_perfect_lattice_entropy_vanishes_as_square_root():
    gold = resolve_material("nonlocal:au")
    grid = [2.0, 1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01]
    report = nernst_scan(1e-6, gold, gold, grid, CFG, workers=4)
    assert report.verdict is Verdict.SATISFIED
    assert report.fitted_exponent == pytest.approx(0.5, abs=0.1)
    assert not any("asymptotic regime" in note for note in report.notes)


@pytest.mark.slow
def test_nonlocal_impurity_entropy_vanishes_linearly():
    gold = resolve_material("nonlocal:au@gamma_residual=0.01")
    grid = [10.0, 5.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05]
    report = nernst_scan(2e-7, gold, gold, grid, CFG, workers=4)
    assert report.verdict is Verdict.SATISFIED
    assert report.fitted_exponent == pytest.approx(1.0, abs=0.15)


@pytest.mark.slow
def test_drude_impurity_entropy_vanishes_linearly():
    gold = resolve_material("drude:au@gamma_residual=0.85")
    grid = [10.0, 5.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05]
    report = nernst_scan(2e-7, gold, gold, grid, CFG, workers=4)
    assert report.verdict is Verdict.SATISFIED
    assert report.fitted_exponent == pytest.approx(1.0, abs=0.15)
    assert all(s.entropy < 0 for s in report.samples[:4])


@pytest.mark.slow
def test_gold_impurity_scan_reports_unreached_regime():
    gold = resolve_material("drude:au-impurity")
    report = nernst_scan(1e-6, gold, gold, GRID, CFG, workers=4)
    assert report.verdict is Verdict.VIOLATED
    assert report.limit_estimate < 0
    assert any("asymptotic regime" in note for note in report.notes)
