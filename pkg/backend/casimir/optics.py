"""
Tabulated optical data -> eps(i xi) by the Kramers-Kronig relation, and the
on-disk cache of eps at the Matsubara frequencies.

Table format: UTF-8 text, whitespace-separated decimal columns
`omega_eV eps_imag` (or `omega_eV n k`), `#` starts a comment.
"""
import hashlib
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .constants import PI
from .errors import ConfigurationError, DomainError, IngestionError
from .lifshitz import matsubara_frequency
from .materials import Tabulated

logger = logging.getLogger(__name__)

MIN_ROWS = 20
MIN_DECADES = 2.0
XI_FLOOR_EV = 1e-6
CACHE_ENV = "CASIMIR_CACHE_DIR"
CACHE_HEADER = "# casimir eps(i xi_l) cache"


@dataclass(frozen=True)
class OpticalDataTable:
    omega: np.ndarray
    eps_imag: np.ndarray
    source: Optional[str] = None

    @property
    def omega_min(self) -> float:
        return float(self.omega[0])

    @property
    def omega_max(self) -> float:
        return float(self.omega[-1])

    @classmethod
    def from_arrays(cls, omega, eps_imag, source: Optional[str] = None) -> "OpticalDataTable":
        table = cls(np.asarray(omega, dtype=float), np.asarray(eps_imag, dtype=float), source)
        table.validate()
        return table

    def validate(self):
        omega, eps_imag = self.omega, self.eps_imag
        if omega.ndim != 1 or omega.shape != eps_imag.shape:
            raise IngestionError("omega and eps_imag must be one-dimensional and of equal length", path=self.source)
        if len(omega) < MIN_ROWS:
            raise IngestionError(f"need at least {MIN_ROWS} rows, got {len(omega)}", path=self.source)
        if not omega[0] > 0:
            raise IngestionError("omega_min must be > 0", path=self.source)
        bad = np.flatnonzero(np.diff(omega) <= 0)
        if bad.size:
            raise IngestionError(f"omega not strictly increasing at row {bad[0] + 2}", path=self.source)
        neg = np.flatnonzero(eps_imag < 0)
        if neg.size:
            raise IngestionError(f"negative Im eps at row {neg[0] + 1}", path=self.source)
        if np.log10(omega[-1] / omega[0]) < MIN_DECADES:
            raise IngestionError(f"table spans less than {MIN_DECADES:g} decades", path=self.source)


@dataclass(frozen=True)
class ExtrapolationSpec:
    mode: str
    omega_p: float
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ("drude", "plasma"):
            raise ConfigurationError(f"extrapolation mode must be 'drude' or 'plasma', got {self.mode!r}")
        if not self.omega_p > 0:
            raise ConfigurationError("omega_p must be > 0")
        if self.mode == "drude" and not (self.gamma is not None and self.gamma > 0):
            raise ConfigurationError("drude extrapolation needs gamma > 0")


def nk_to_eps_imag(n, k) -> np.ndarray:
    return 2.0 * np.asarray(n, dtype=float) * np.asarray(k, dtype=float)


def read_optical_table(path, columns: str = "eps") -> OpticalDataTable:
    """Reads `omega eps_imag` (columns="eps") or `omega n k` (columns="nk") rows."""
    if columns not in ("eps", "nk"):
        raise ConfigurationError(f"columns must be 'eps' or 'nk', got {columns!r}")
    width = 2 if columns == "eps" else 3
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise IngestionError(f"cannot read optical table: {e}", path=str(path)) from e

    omega, eps_imag = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != width:
            raise IngestionError(f"expected {width} columns, got {len(fields)}", line=lineno, path=str(path))
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise IngestionError(f"not a decimal number in {line!r}", line=lineno, path=str(path)) from None
        if not all(np.isfinite(values)):
            raise IngestionError("non-finite value", line=lineno, path=str(path))
        w = values[0]
        im = values[1] if columns == "eps" else float(nk_to_eps_imag(values[1], values[2]))
        if w <= 0:
            raise IngestionError(f"omega must be > 0, got {w}", line=lineno, path=str(path))
        if omega and w <= omega[-1]:
            raise IngestionError("omega not strictly increasing", line=lineno, path=str(path))
        if im < 0:
            raise IngestionError(f"negative Im eps {im}", line=lineno, path=str(path))
        omega.append(w)
        eps_imag.append(im)

    logger.info("Read %d optical rows from %s", len(omega), path)
    return OpticalDataTable.from_arrays(omega, eps_imag, source=str(path))


def _drude_below_table(ext: ExtrapolationSpec, omega_min: float, xi: np.ndarray) -> np.ndarray:
    """(2/pi) int_0^omega_min of the Drude Im eps kernel, in closed form."""
    g, wp2 = ext.gamma, ext.omega_p ** 2
    near = np.abs(xi - g) < 1e-6 * g
    xs = np.where(near, g * 2.0, xi)
    general = wp2 * g / (xs ** 2 - g ** 2) * (np.arctan(omega_min / g) / g - np.arctan(omega_min / xs) / xs)
    coincident = wp2 * g / (2 * g ** 2) * (omega_min / (omega_min ** 2 + g ** 2) + np.arctan(omega_min / g) / g)
    return (2.0 / PI) * np.where(near, coincident, general)


def _tabulated_part(table: OpticalDataTable, xi: np.ndarray) -> np.ndarray:
    """(2/pi) int over the table and its omega^-3 continuation above omega_max."""
    w = table.omega[None, :]
    x = xi[:, None]
    body = trapezoid(w ** 2 * table.eps_imag[None, :] / (w ** 2 + x ** 2), np.log(table.omega), axis=1)
    w_max = table.omega_max
    amplitude = table.eps_imag[-1] * w_max ** 3
    tail = amplitude / xi ** 2 * (1.0 / w_max - (PI / 2 - np.arctan(w_max / xi)) / xi)
    return (2.0 / PI) * (body + tail)


def kk_to_imag_axis(table: OpticalDataTable, ext: ExtrapolationSpec, xi):
    """eps(i xi) from Im eps(omega), with the free-electron part below the table fixed by ext."""
    arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(~(arr >= XI_FLOOR_EV)):
        raise DomainError(f"xi must be >= {XI_FLOOR_EV} eV; zero frequency is handled by zero_freq_coeffs")
    out = 1.0 + _tabulated_part(table, arr)
    if ext.mode == "drude":
        out = out + _drude_below_table(ext, table.omega_min, arr)
    else:
        out = out + ext.omega_p ** 2 / arr ** 2
    return float(out[0]) if np.ndim(xi) == 0 else out.reshape(np.shape(xi))


def digest(table: OpticalDataTable, ext: ExtrapolationSpec, T: float, l_max: int) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(table.omega, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(table.eps_imag, dtype="<f8").tobytes())
    h.update(f"{ext.mode}|{ext.omega_p!r}|{ext.gamma!r}|{float(T)!r}|{int(l_max)}".encode())
    return h.hexdigest()


def build_material(table: OpticalDataTable, ext: ExtrapolationSpec, T: float, l_max: int,
                   name: Optional[str] = None) -> Tabulated:
    """Samples eps(i xi_l) for l = 1..l_max and wraps them in a monotone interpolant."""
    if not T > 0:
        raise DomainError(f"temperature must be > 0, got {T}")
    if l_max < 2:
        raise DomainError(f"l_max must be >= 2, got {l_max}")
    xi = np.array([matsubara_frequency(l, T) for l in range(1, l_max + 1)])
    eps = kk_to_imag_axis(table, ext, xi)
    logger.info("Built tabulated material: %d Matsubara samples, eps(i xi_1)=%g", l_max, eps[0])
    return Tabulated(xi, eps, zero_frequency=ext.mode, omega_p=ext.omega_p,
                     high_frequency=lambda x: kk_to_imag_axis(table, ext, x),
                     name=name or f"tabulated:{ext.mode}", digest=digest(table, ext, T, l_max))


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, "~/.cache/casimir")).expanduser()


def cache_path_for(key: str, directory: Optional[Path] = None) -> Path:
    return Path(directory or cache_dir()) / f"eps_{key[:16]}.txt"


def write_cache(path, material: Tabulated, temperature: float) -> Path:
    """Writes `l xi_eV eps` rows; the file is replaced atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        CACHE_HEADER,
        f"# digest {material.digest or ''}",
        f"# mode {material.zero_frequency} omega_p {material.omega_p!r} temperature {float(temperature)!r}",
        "# l xi_eV eps",
    ]
    lines += [f"{l} {x:.17g} {e:.17g}" for l, (x, e) in enumerate(zip(material.xi, material.values), start=1)]
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".eps_", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.info("Wrote cache %s", path)
    return path


def load_cache(path, name: Optional[str] = None) -> Tabulated:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise IngestionError(f"cannot read cache: {e}", path=str(path)) from e
    if not lines or lines[0] != CACHE_HEADER:
        raise IngestionError("not a casimir cache file", line=1, path=str(path))

    meta = {}
    xi, eps = [], []
    for lineno, raw in enumerate(lines[1:], start=2):
        if raw.startswith("#"):
            parts = raw[1:].split()
            if parts and parts[0] in ("digest", "mode"):
                meta.update(dict(zip(parts[0::2], parts[1::2])))
            continue
        fields = raw.split()
        if len(fields) != 3:
            raise IngestionError("expected 'l xi_eV eps'", line=lineno, path=str(path))
        try:
            xi.append(float(fields[1]))
            eps.append(float(fields[2]))
        except ValueError:
            raise IngestionError("not a decimal number", line=lineno, path=str(path)) from None

    mode = meta.get("mode", "drude")
    omega_p = meta.get("omega_p")
    try:
        return Tabulated(xi, eps, zero_frequency=mode, omega_p=float(omega_p) if omega_p not in (None, "None") else None,
                         name=name or f"tabulated:{path.stem}", digest=meta.get("digest") or None)
    except ConfigurationError as e:
        raise IngestionError(str(e), path=str(path)) from e


def ingest(path, ext: ExtrapolationSpec, T: float, l_max: int, columns: str = "eps",
           directory: Optional[Path] = None) -> Tuple[Tabulated, Path]:
    table = read_optical_table(path, columns)
    material = build_material(table, ext, T, l_max)
    target = cache_path_for(material.digest, directory)
    write_cache(target, material, T)
    return material, target
