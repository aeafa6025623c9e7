import numpy as np
import pytest

from casimir.catalog import resolve_material
from casimir.config import MatsubaraConfig
from casimir.errors import ConfigurationError, DomainError, IngestionError
from casimir.lifshitz import matsubara_frequency, pressure
from casimir.materials import eps_imag_freq
from casimir.optics import (CACHE_HEADER, ExtrapolationSpec, OpticalDataTable, build_material, cache_dir,
                            ingest, kk_to_imag_axis, load_cache, nk_to_eps_imag, read_optical_table)

OMEGA_P, GAMMA = 9.0, 0.035
EXT = ExtrapolationSpec("drude", OMEGA_P, GAMMA)


def drude_im(omega):
    return OMEGA_P ** 2 * GAMMA / (omega * (omega ** 2 + GAMMA ** 2))


def write_table(path, omega=None):
    omega = np.geomspace(1e-2, 1e3, 2000) if omega is None else omega
    lines = ["# synthetic drude metal", "# omega_eV eps_imag"]
    lines += [f"{w:.17g} {e:.17g}" for w, e in zip(omega, drude_im(omega))]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_kramers_kronig_recovers_drude(tmp_path):
    table = read_optical_table(write_table(tmp_path / "au.txt"))
    xi = np.geomspace(0.1, 10.0, 25)
    eps = kk_to_imag_axis(table, EXT, xi)
    analytic = eps_imag_freq(resolve_material("drude:au"), xi, 300.0)
    assert np.allclose(eps, analytic, rtol=5e-3)


def test_plasma_extrapolation_with_empty_core():
    table = OpticalDataTable.from_arrays(np.geomspace(1e-2, 1e3, 200), np.zeros(200))
    ext = ExtrapolationSpec("plasma", OMEGA_P)
    eps = kk_to_imag_axis(table, ext, 0.16243)
    assert eps == pytest.approx(1 + OMEGA_P ** 2 / 0.16243 ** 2, rel=1e-12)
    assert eps == pytest.approx(1 + 3071.2, rel=1e-3)
    assert kk_to_imag_axis(table, ext, 1e4) == pytest.approx(1.0, abs=1e-6)


def test_tabulated_pressure_matches_analytic(tmp_path):
    table = read_optical_table(write_table(tmp_path / "au.txt"))
    material = build_material(table, EXT, 300.0, 200)
    drude = resolve_material("drude:au")
    cfg = MatsubaraConfig(rel_tol=1e-7)
    assert pressure(5e-7, 300.0, material, material, cfg).value == \
        pytest.approx(pressure(5e-7, 300.0, drude, drude, cfg).value, rel=5e-3)


def test_ingest_writes_deterministic_cache(tmp_path):
    src = write_table(tmp_path / "au.txt")
    material, path = ingest(src, EXT, 300.0, 50, directory=tmp_path / "cache")
    first = path.read_bytes()
    again, path2 = ingest(src, EXT, 300.0, 50, directory=tmp_path / "cache")
    assert path2 == path
    assert path.read_bytes() == first
    assert first.decode().splitlines()[0] == CACHE_HEADER
    assert material.digest == again.digest

    loaded = load_cache(path)
    assert loaded.digest == material.digest
    assert np.array_equal(loaded.values, material.values)
    assert loaded.xi[0] == pytest.approx(matsubara_frequency(1, 300.0))
    assert resolve_material(f"cache:{path}").zero_frequency == "drude"


def test_digest_depends_on_temperature(tmp_path):
    src = write_table(tmp_path / "au.txt")
    a, _ = ingest(src, EXT, 300.0, 20, directory=tmp_path)
    b, _ = ingest(src, EXT, 77.0, 20, directory=tmp_path)
    assert a.digest != b.digest


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("CASIMIR_CACHE_DIR", str(tmp_path))
    assert cache_dir() == tmp_path


def test_negative_imaginary_part_names_line(tmp_path):
    path = tmp_path / "bad.txt"
    rows = [f"{w} 1.0" for w in np.geomspace(0.01, 10.0, 30)]
    rows[4] = "0.5 -2.0"
    path.write_text("# header\n" + "\n".join(rows) + "\n", encoding="utf-8")
    with pytest.raises(IngestionError) as info:
        read_optical_table(path)
    assert info.value.line == 6
    assert ":6:" in str(info.value)


def test_malformed_tables(tmp_path):
    path = tmp_path / "text.txt"
    path.write_text("0.1 1.0\n0.2 abc\n", encoding="utf-8")
    with pytest.raises(IngestionError) as info:
        read_optical_table(path)
    assert info.value.line == 2
    with pytest.raises(IngestionError):
        read_optical_table(write_table(tmp_path / "short.txt", np.geomspace(1.0, 10.0, 30)))
    with pytest.raises(IngestionError):
        read_optical_table(tmp_path / "missing.txt")


def test_nk_columns(tmp_path):
    omega = np.geomspace(0.01, 10.0, 30)
    path = tmp_path / "nk.txt"
    path.write_text("\n".join(f"{w} 2.0 0.5" for w in omega) + "\n", encoding="utf-8")
    table = read_optical_table(path, columns="nk")
    assert np.allclose(table.eps_imag, nk_to_eps_imag(2.0, 0.5))
    assert table.eps_imag[0] == 2.0


def test_extrapolation_spec_checks():
    with pytest.raises(ConfigurationError):
        ExtrapolationSpec("drude", 9.0)
    with pytest.raises(ConfigurationError):
        ExtrapolationSpec("lorentz", 9.0, 0.035)
    table = OpticalDataTable.from_arrays(np.geomspace(0.01, 10.0, 30), np.ones(30))
    with pytest.raises(DomainError):
        kk_to_imag_axis(table, EXT, 0.0)
