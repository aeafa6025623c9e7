"""
Lifshitz free energy and pressure between two plates.

Per Matsubara index the k_perp integral is taken in y = 2a*q on
[zeta_l, zeta_l + y_max_offset] after the substitution y = zeta_l + t^2,
which keeps the zero-frequency logarithm and the square-root behaviour of
nonlocal coefficients smooth in t.
"""
import enum
import logging
import math
from collections import deque
from typing import List, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, Field

from .config import MatsubaraConfig
from .constants import HBARC_J_M, KB_EV_K, KB_J_K, PI, separation_to_ev
from .errors import DomainError
from .materials import MaterialModel
from .quadrature import adaptive_integrate, uniform_edges
from .reflection import reflection_coefficients

logger = logging.getLogger(__name__)

INNER_PANELS = 4
MIN_EULER_MACLAURIN = 16
# Outer panels in zeta for the T = 0 integral and the Euler-Maclaurin remainder
ZETA_OFFSETS = (0.0, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0, 64.0)


class Quantity(str, enum.Enum):
    FREE_ENERGY = "free_energy"
    PRESSURE = "pressure"
    ENERGY_ZERO_T = "energy_zero_t"
    FORCE_ZERO_T = "force_zero_t"
    GRADIENT = "gradient"


UNITS = {
    Quantity.FREE_ENERGY: "J/m^2",
    Quantity.PRESSURE: "N/m^2",
    Quantity.ENERGY_ZERO_T: "J/m^2",
    Quantity.FORCE_ZERO_T: "N/m^2",
    Quantity.GRADIENT: "N/m",
}


class CasimirResult(BaseModel):
    value: float
    kind: Quantity
    units: str
    truncation_error: float = 0.0
    terms_used: int = 0
    converged: bool = True
    euler_maclaurin: bool = False
    separation: float
    temperature: float
    warnings: List[str] = Field(default_factory=list)


class MatsubaraSum(NamedTuple):
    total: float
    truncation_error: float
    terms: int
    converged: bool
    euler_maclaurin: bool


def matsubara_frequency(l: int, temperature: float) -> float:
    """xi_l = 2 pi k_B T l / hbar in eV."""
    if l < 0:
        raise DomainError(f"Matsubara index must be >= 0, got {l}")
    if not temperature > 0:
        raise DomainError(f"temperature must be > 0, got {temperature}")
    return 2 * PI * KB_EV_K * temperature * l


def regime_threshold(temperature: float) -> float:
    """Separation hbar*c/(4 pi k_B T) in metres above which the l = 0 term dominates."""
    if not temperature > 0:
        raise DomainError(f"temperature must be > 0, got {temperature}")
    return HBARC_J_M / (4 * PI * KB_J_K * temperature)


class LifshitzEngine:
    """
    Evaluates the per-frequency kernels and their Matsubara sum or
    zero-temperature integral for one pair of plates.
    Material parameters are taken at cfg.temperature.
    """

    def __init__(self, model1: MaterialModel, model2: MaterialModel, cfg: MatsubaraConfig):
        self.model1 = model1
        self.model2 = model2
        self.cfg = cfg

    def _products(self, xi, k_perp, zero: bool):
        T = self.cfg.temperature
        r1 = reflection_coefficients(self.model1, xi, k_perp, T, zero_frequency=zero)
        if self.model2 is self.model1:
            return r1.r_tm * r1.r_tm, r1.r_te * r1.r_te
        r2 = reflection_coefficients(self.model2, xi, k_perp, T, zero_frequency=zero)
        return r1.r_tm * r2.r_tm, r1.r_te * r2.r_te

    def kernel(self, zeta: np.ndarray, a_ev: float, quantity: Quantity, zero: bool = False) -> np.ndarray:
        """
        K(zeta) = int y dy sum_pol ln(1 - r1 r2 e^-y) for the energy, or
        int y^2 dy sum_pol x/(1-x) with x = r1 r2 e^-y for the pressure.
        zero selects the exact xi = 0 coefficients (zeta must then be 0).
        """
        scale = 2.0 * a_ev
        z = np.asarray(zeta, dtype=float)[:, None]
        energy = quantity in (Quantity.FREE_ENERGY, Quantity.ENERGY_ZERO_T)

        def integrand(t):
            t = t[None, :]
            y = z + t * t
            kappa = t * np.sqrt(2.0 * z + t * t)
            p_tm, p_te = self._products(z / scale, kappa / scale, zero)
            decay = np.exp(-y)
            x_tm = p_tm * decay
            x_te = p_te * decay
            if energy:
                f = y * (np.log1p(-x_tm) + np.log1p(-x_te))
            else:
                f = y * y * (x_tm / (1.0 - x_tm) + x_te / (1.0 - x_te))
            return 2.0 * t * f

        edges = uniform_edges(0.0, math.sqrt(self.cfg.y_max_offset), INNER_PANELS)
        return adaptive_integrate(integrand, edges, self.cfg.rel_tol).value

    def matsubara_sum(self, a: float, quantity: Quantity) -> MatsubaraSum:
        cfg = self.cfg
        a_ev = separation_to_ev(a)
        step = 2.0 * a_ev * 2 * PI * KB_EV_K * cfg.temperature
        ratio = math.exp(-step)
        tail_factor = ratio / (1.0 - ratio) if ratio < 1.0 else math.inf

        total = 0.5 * float(self.kernel(np.array([0.0]), a_ev, quantity, zero=True)[0])
        terms = 1
        recent = deque(maxlen=3)
        last = 0.0
        block = cfg.block_size
        l = 1
        stop_direct = max(cfg.euler_maclaurin_from, MIN_EULER_MACLAURIN) if cfg.euler_maclaurin_from > 0 else cfg.l_max_cap + 1

        while l <= cfg.l_max_cap and l < stop_direct:
            n = min(block, cfg.l_max_cap - l + 1, stop_direct - l)
            values = self.kernel(np.arange(l, l + n) * step, a_ev, quantity)
            for v in values:
                v = float(v)
                total += v
                terms += 1
                last = v
                recent.append(abs(v))
                if (len(recent) == 3 and max(recent) <= 0.1 * cfg.rel_tol * abs(total)
                        and abs(v) * tail_factor <= cfg.rel_tol * abs(total)):
                    logger.debug("Matsubara sum converged after %d terms: %g", terms, total)
                    return MatsubaraSum(total, abs(v) * tail_factor, terms, True, False)
            logger.debug("Matsubara block l=%d..%d, partial sum %g", l, l + n - 1, total)
            l += n
            block = min(2 * block, 4096)

        if l >= stop_direct and l <= cfg.l_max_cap:
            # Values for l < L are already in total; add the remainder from l = L
            remainder, error = self._euler_maclaurin_remainder(l, step, a_ev, quantity)
            total += remainder
            return MatsubaraSum(total, error, terms + 3, True, True)

        logger.warning("Matsubara sum not converged within l_max_cap=%d (a=%g m, T=%g K)",
                       cfg.l_max_cap, a, cfg.temperature)
        return MatsubaraSum(total, abs(last) * tail_factor, terms, False, False)

    def _euler_maclaurin_remainder(self, L: int, step: float, a_ev: float, quantity: Quantity):
        """Sum over l >= L as integral + endpoint corrections, derivatives by five-point differences."""
        f = self.kernel(np.arange(L - 2, L + 3) * step, a_ev, quantity)
        d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / 12.0
        d3 = (-f[0] + 2 * f[1] - 2 * f[3] + f[4]) / 2.0
        zeta_l = L * step
        edges = zeta_l + np.asarray(ZETA_OFFSETS)
        quad = adaptive_integrate(lambda zs: self.kernel(zs, a_ev, quantity), edges, self.cfg.rel_tol)
        integral = float(quad.value) / step
        remainder = integral + f[2] / 2.0 - d1 / 12.0 + d3 / 720.0
        error = abs(d3) / 720.0 + float(np.max(quad.error)) / step
        logger.debug("Euler-Maclaurin remainder from l=%d: %g (integral %g)", L, remainder, integral)
        return remainder, error

    def zero_temperature_integral(self, a: float, quantity: Quantity):
        a_ev = separation_to_ev(a)
        return adaptive_integrate(lambda zs: self.kernel(zs, a_ev, quantity), np.asarray(ZETA_OFFSETS),
                                  self.cfg.rel_tol)


def _check_inputs(a: float, temperature: Optional[float] = None):
    if not a > 0:
        raise DomainError(f"separation must be > 0, got {a}")
    if temperature is not None and not temperature > 0:
        raise DomainError(f"temperature must be > 0, got {temperature}")


def _finite_t_result(a, temperature, model1, model2, cfg, quantity: Quantity) -> CasimirResult:
    _check_inputs(a, temperature)
    cfg = cfg.at(temperature)
    s = LifshitzEngine(model1, model2, cfg).matsubara_sum(a, quantity)
    kT = KB_J_K * temperature
    if quantity is Quantity.FREE_ENERGY:
        prefactor = kT / (8 * PI * a ** 2)
    else:
        prefactor = -kT / (8 * PI * a ** 3)
    return _assemble(prefactor * s.total, prefactor * s.truncation_error, s.terms, s.converged,
                     s.euler_maclaurin, quantity, a, temperature, cfg.rel_tol)


def _assemble(value, error, terms, converged, em, quantity, a, temperature, rel_tol) -> CasimirResult:
    warnings: List[str] = []
    if not converged:
        warnings.append("Matsubara sum hit l_max_cap before converging")
    if abs(error) > rel_tol * abs(value):
        converged = False
        warnings.append(f"truncation error {abs(error):.3g} exceeds rel_tol of the value")
    return CasimirResult(value=value, kind=quantity, units=UNITS[quantity], truncation_error=abs(error),
                         terms_used=terms, converged=converged, euler_maclaurin=em,
                         separation=a, temperature=temperature, warnings=warnings)


def free_energy(a: float, T: float, model1: MaterialModel, model2: MaterialModel,
                cfg: MatsubaraConfig) -> CasimirResult:
    """Free energy per unit area (J/m^2), l = 0 term halved."""
    return _finite_t_result(a, T, model1, model2, cfg, Quantity.FREE_ENERGY)


def pressure(a: float, T: float, model1: MaterialModel, model2: MaterialModel,
             cfg: MatsubaraConfig) -> CasimirResult:
    """Pressure (N/m^2); negative values mean attraction."""
    return _finite_t_result(a, T, model1, model2, cfg, Quantity.PRESSURE)


def _zero_t_result(a, model1, model2, cfg, quantity: Quantity) -> CasimirResult:
    _check_inputs(a)
    quad = LifshitzEngine(model1, model2, cfg).zero_temperature_integral(a, quantity)
    if quantity is Quantity.ENERGY_ZERO_T:
        prefactor = HBARC_J_M / (32 * PI ** 2 * a ** 3)
    else:
        prefactor = -HBARC_J_M / (32 * PI ** 2 * a ** 4)
    error = prefactor * float(np.max(quad.error))
    result = _assemble(prefactor * float(quad.value), error, quad.panels, quad.converged, False,
                       quantity, a, 0.0, cfg.rel_tol)
    return result


def energy_zero_t(a: float, model1: MaterialModel, model2: MaterialModel, cfg: MatsubaraConfig) -> CasimirResult:
    """
    T = 0 energy per unit area. Frequencies become continuous; material
    parameters stay at cfg.temperature.
    """
    return _zero_t_result(a, model1, model2, cfg, Quantity.ENERGY_ZERO_T)


def force_zero_t(a: float, model1: MaterialModel, model2: MaterialModel, cfg: MatsubaraConfig) -> CasimirResult:
    return _zero_t_result(a, model1, model2, cfg, Quantity.FORCE_ZERO_T)
