"""Sphere-plate quantities from plate-plate results (proximity force approximation)."""
import logging
import warnings
from dataclasses import dataclass
from typing import List, Tuple

from .config import MatsubaraConfig
from .constants import PI
from .errors import DomainError, RegimeWarning
from .lifshitz import CasimirResult, Quantity, UNITS, force_zero_t, pressure
from .materials import MaterialModel

logger = logging.getLogger(__name__)

PFA_MAX_RATIO = 0.1
ROUGHNESS_MAX_RATIO = 0.2


@dataclass(frozen=True)
class SpherePlate:
    radius: float
    separation: float
    beta: float = 0.0
    roughness: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0 or not self.separation > 0:
            raise DomainError("sphere radius and separation must be > 0")
        if min(self.roughness) < 0:
            raise DomainError("roughness amplitudes must be >= 0")

    def regime_issues(self) -> List[str]:
        issues = []
        if self.separation / self.radius >= PFA_MAX_RATIO:
            issues.append(f"a/R = {self.separation / self.radius:.3g} is outside the PFA regime (< {PFA_MAX_RATIO})")
        if max(self.roughness) >= ROUGHNESS_MAX_RATIO * self.separation:
            issues.append("roughness amplitude is not small against the separation (< a/5)")
        return issues


def _warn_regime(sp: SpherePlate) -> List[str]:
    issues = sp.regime_issues()
    for msg in issues:
        warnings.warn(msg, RegimeWarning, stacklevel=3)
    return issues


def pfa_force(sp: SpherePlate, free_energy_per_area: float) -> float:
    """Force (N) on the sphere: 2 pi R times the plate-plate free energy."""
    _warn_regime(sp)
    return 2 * PI * sp.radius * free_energy_per_area


def pfa_gradient(sp: SpherePlate, pressure_value: float) -> float:
    """Force gradient (N/m): -2 pi R times the plate-plate pressure, positive for attraction."""
    _warn_regime(sp)
    return -2 * PI * sp.radius * pressure_value


def beta_factor(sp: SpherePlate) -> float:
    return 1.0 + sp.beta * sp.separation / sp.radius


def beta_corrected_gradient(sp: SpherePlate, pfa_gradient_value: float) -> float:
    return pfa_gradient_value * beta_factor(sp)


def roughness_factor(sp: SpherePlate) -> float:
    d1, d2 = sp.roughness
    s = (d1 ** 2 + d2 ** 2) / sp.separation ** 2
    return 1.0 + 10 * s + 105 * s ** 2


def roughness_corrected_gradient(sp: SpherePlate, gradient: float) -> float:
    """Stochastic-roughness correction to second order in the roughness amplitudes."""
    _warn_regime(sp)
    return gradient * roughness_factor(sp)


def sphere_plate_gradient(sp: SpherePlate, model1: MaterialModel, model2: MaterialModel,
                          cfg: MatsubaraConfig) -> CasimirResult:
    """
    Plate pressure at cfg.temperature (zero-temperature integral when it is 0),
    mapped to the sphere and corrected for beta and roughness.
    """
    T = cfg.temperature
    if T > 0:
        plate = pressure(sp.separation, T, model1, model2, cfg)
    else:
        plate = force_zero_t(sp.separation, model1, model2, cfg)
    issues = _warn_regime(sp)
    scale = -2 * PI * sp.radius * beta_factor(sp) * roughness_factor(sp)
    return CasimirResult(value=scale * plate.value, kind=Quantity.GRADIENT, units=UNITS[Quantity.GRADIENT],
                         truncation_error=abs(scale) * plate.truncation_error, terms_used=plate.terms_used,
                         converged=plate.converged, euler_maclaurin=plate.euler_maclaurin,
                         separation=sp.separation, temperature=T, warnings=plate.warnings + issues)
