"""Parameter sweeps and theory bands over separation or temperature."""
import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from .config import MatsubaraConfig
from .errors import CasimirError, ConfigurationError, DomainError
from .geometry import SpherePlate, sphere_plate_gradient
from .lifshitz import CasimirResult, force_zero_t, free_energy, energy_zero_t, pressure
from .materials import MaterialModel
from .thermo import entropy, thermal_correction

logger = logging.getLogger(__name__)

DEFAULT_RADIUS_M = 150e-6


class SweepQuantity(str, enum.Enum):
    FREE_ENERGY = "free_energy"
    PRESSURE = "pressure"
    GRADIENT = "gradient"
    ENTROPY = "entropy"
    THERMAL_CORRECTION = "thermal_correction"


QUANTITY_UNITS = {
    SweepQuantity.FREE_ENERGY: "J/m^2",
    SweepQuantity.PRESSURE: "N/m^2",
    SweepQuantity.GRADIENT: "N/m",
    SweepQuantity.ENTROPY: "J/(m^2 K)",
    SweepQuantity.THERMAL_CORRECTION: "1",
}
VARIABLE_UNITS = {"separation": "m", "temperature": "K"}


class Geometry(BaseModel):
    radius: float = Field(DEFAULT_RADIUS_M, gt=0)
    beta: float = 0.0
    roughness: Tuple[float, float] = (0.0, 0.0)


class SweepSpec(BaseModel):
    variable: str = "separation"
    start: float
    stop: float
    count: int = Field(ge=2)
    spacing: str = "linear"
    quantity: SweepQuantity = SweepQuantity.PRESSURE
    separation: Optional[float] = None
    temperature: float = 300.0
    convention: str = "at_T"
    geometry: Geometry = Field(default_factory=Geometry)

    @model_validator(mode="after")
    def _check(self):
        if self.variable not in VARIABLE_UNITS:
            raise ValueError(f"variable must be one of {sorted(VARIABLE_UNITS)}")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be 'linear' or 'log'")
        if not self.start < self.stop:
            raise ValueError("range needs start < stop")
        if self.spacing == "log" and self.start <= 0:
            raise ValueError("log spacing needs start > 0")
        if self.variable == "temperature" and self.separation is None:
            raise ValueError("temperature sweeps need a fixed separation")
        return self

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(np.log10(self.start), np.log10(self.stop), self.count)
        return np.linspace(self.start, self.stop, self.count)

    def point(self, x: float) -> Tuple[float, float]:
        """(separation, temperature) at abscissa x."""
        if self.variable == "separation":
            return float(x), self.temperature
        return float(self.separation), float(x)


class TheoryBand(BaseModel):
    variable: str
    quantity: SweepQuantity
    parameter: str
    interval: Tuple[float, float]
    abscissa: List[float]
    low: List[float]
    high: List[float]

    def to_frame(self) -> pd.DataFrame:
        unit = QUANTITY_UNITS[self.quantity]
        return pd.DataFrame({
            f"{self.variable} [{VARIABLE_UNITS[self.variable]}]": self.abscissa,
            f"{self.quantity.value}_low [{unit}]": self.low,
            f"{self.quantity.value}_high [{unit}]": self.high,
        })


def compute_point(quantity: SweepQuantity, a: float, T: float, model1: MaterialModel, model2: MaterialModel,
                  cfg: MatsubaraConfig, geometry: Optional[Geometry] = None,
                  convention: str = "at_T") -> Dict[str, Any]:
    """One value with its error estimate. T = 0 selects the zero-temperature integrals."""
    quantity = SweepQuantity(quantity)
    geometry = geometry or Geometry()
    if T < 0:
        raise DomainError(f"temperature must be >= 0, got {T}")

    if quantity is SweepQuantity.ENTROPY:
        sample = entropy(a, T, model1, model2, cfg)
        return {"value": sample.entropy, "truncation_error": sample.fd_error_estimate, "terms_used": 0,
                "converged": sample.conclusive}
    if quantity is SweepQuantity.THERMAL_CORRECTION:
        value = thermal_correction(a, T, model1, model2, cfg, convention)
        return {"value": value, "truncation_error": 0.0, "terms_used": 0, "converged": True}

    result: CasimirResult
    if quantity is SweepQuantity.GRADIENT:
        sp = SpherePlate(geometry.radius, a, geometry.beta, tuple(geometry.roughness))
        result = sphere_plate_gradient(sp, model1, model2, cfg.at(T))
    elif T == 0:
        op = energy_zero_t if quantity is SweepQuantity.FREE_ENERGY else force_zero_t
        result = op(a, model1, model2, cfg.at(0.0))
    else:
        op = free_energy if quantity is SweepQuantity.FREE_ENERGY else pressure
        result = op(a, T, model1, model2, cfg)
    return {"value": result.value, "truncation_error": result.truncation_error,
            "terms_used": result.terms_used, "converged": result.converged}


def _row(spec: SweepSpec, x: float, model1, model2, cfg) -> Dict[str, Any]:
    a, T = spec.point(x)
    try:
        out = compute_point(spec.quantity, a, T, model1, model2, cfg, spec.geometry, spec.convention)
        out["error"] = ""
    except CasimirError as e:
        logger.warning("Row %s=%g failed: %s", spec.variable, x, e)
        out = {"value": np.nan, "truncation_error": np.nan, "terms_used": 0, "converged": False, "error": str(e)}
    out["x"] = float(x)
    return out


def run_scan(spec: SweepSpec, model1: MaterialModel, model2: MaterialModel, cfg: MatsubaraConfig,
             workers: int = 1) -> pd.DataFrame:
    """One row per grid point, in grid order; failed rows carry their message in `error`."""
    grid = spec.grid()
    logger.info("Scanning %s over %d points of %s", spec.quantity.value, len(grid), spec.variable)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(lambda x: _row(spec, x, model1, model2, cfg), grid))
    unit = QUANTITY_UNITS[spec.quantity]
    return pd.DataFrame({
        f"{spec.variable} [{VARIABLE_UNITS[spec.variable]}]": [r["x"] for r in rows],
        f"{spec.quantity.value} [{unit}]": [r["value"] for r in rows],
        f"truncation_error [{unit}]": [r["truncation_error"] for r in rows],
        "terms_used": [r["terms_used"] for r in rows],
        "converged": [r["converged"] for r in rows],
        "error": [r["error"] for r in rows],
    })


class BandAnalyzer:
    """
    Runs the same sweep for several values of one material parameter and
    takes the pointwise envelope. The parameter is varied on both plates.
    """

    def __init__(self, spec: SweepSpec, cfg: MatsubaraConfig, workers: int = 1):
        self.spec = spec
        self.cfg = cfg
        self.workers = workers

    def compare_parameters(self, model1: MaterialModel, model2: MaterialModel, parameter: str,
                           values: Sequence[float]) -> Dict[float, pd.DataFrame]:
        results = {}
        for value in values:
            m1 = model1.with_param(parameter, value)
            m2 = m1 if model2 is model1 else model2.with_param(parameter, value)
            results[float(value)] = run_scan(self.spec, m1, m2, self.cfg, self.workers)
        return results

    def envelope(self, results: Dict[float, pd.DataFrame], parameter: str) -> TheoryBand:
        frames = list(results.values())
        value_col = f"{self.spec.quantity.value} [{QUANTITY_UNITS[self.spec.quantity]}]"
        stacked = np.vstack([f[value_col].to_numpy() for f in frames])
        if np.any(np.isnan(stacked)):
            raise CasimirError("band contains failed points")
        keys = sorted(results)
        return TheoryBand(variable=self.spec.variable, quantity=self.spec.quantity, parameter=parameter,
                          interval=(keys[0], keys[-1]), abscissa=frames[0].iloc[:, 0].tolist(),
                          low=stacked.min(axis=0).tolist(), high=stacked.max(axis=0).tolist())


def run_band(spec: SweepSpec, model1: MaterialModel, model2: MaterialModel, parameter: str,
             interval: Tuple[float, float], cfg: MatsubaraConfig, samples: int = 3,
             workers: int = 1) -> TheoryBand:
    lo, hi = interval
    if lo > hi:
        raise ConfigurationError(f"parameter interval must have low <= high, got {interval}")
    if samples < 1:
        raise ConfigurationError("band needs at least one parameter sample")
    values = [lo] if lo == hi else list(np.linspace(lo, hi, max(2, samples)))
    analyzer = BandAnalyzer(spec, cfg, workers)
    return analyzer.envelope(analyzer.compare_parameters(model1, model2, parameter, values), parameter)
