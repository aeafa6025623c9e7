"""
Closed-form large-separation and low-temperature results used to check
the numerical engine.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, List, Mapping, Optional, Tuple

import mpmath
import numpy as np

from .constants import HBARC_EV_M, HBARC_J_M, KB_J_K, PI, ZETA3, ZETA5, separation_to_ev
from .errors import AccuracyWarning, ConfigurationError, DomainError
from .materials import OscillatorSet, static_permittivity
from .quadrature import adaptive_integrate, uniform_edges

logger = logging.getLogger(__name__)

SERIES_DELTA_LIMIT = 0.2
_ORACLE_TOL = 1e-12


@dataclass
class EntropyExpansion:
    """
    Low-temperature entropy in J/(m^2 K). leading_power 0 means a nonzero
    T -> 0 limit. Shape-only expansions carry no numeric coefficients.
    """
    kind: str
    leading_power: float
    leading_value: Optional[float] = None
    next_term: Optional[float] = None
    sign: Optional[int] = None
    warnings: List[str] = field(default_factory=list)

    @property
    def value(self) -> Optional[float]:
        if self.leading_value is None:
            return None
        return self.leading_value + (self.next_term or 0.0)


def polylog3(x: float) -> float:
    """Li_3(x) on [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"polylog3 is defined here for 0 <= x <= 1, got {x}")
    if x == 1.0:
        return ZETA3
    return float(mpmath.polylog(3, x))


def _plasma_te_reflection(y: np.ndarray, w: float) -> np.ndarray:
    # (y - s)/(y + s) with s = sqrt(y^2 + w^2), written without cancellation
    s = np.sqrt(y * y + w * w)
    return -(w * w) / (y + s) ** 2


def plasma_te_integral(a: float, omega_p: float, moment: int) -> float:
    """
    Zero-frequency TE integral of the plasma model in y = 2a*k_perp:
    moment 1 -> int y ln(1 - r^2 e^-y) dy; moment 2 -> int y^2 r^2 e^-y/(1 - r^2 e^-y) dy.
    """
    w = 2.0 * separation_to_ev(a) * omega_p

    def integrand(t):
        y = t * t
        x = _plasma_te_reflection(y, w) ** 2 * np.exp(-y)
        if moment == 1:
            f = y * np.log1p(-x)
        else:
            f = y * y * x / (1.0 - x)
        return 2.0 * t * f

    return float(adaptive_integrate(integrand, uniform_edges(0.0, 8.0, 8), _ORACLE_TOL).value)


def _need(aux: Optional[Mapping[str, Any]], key: str) -> float:
    if aux is None or aux.get(key) is None:
        raise ConfigurationError(f"missing parameter '{key}'")
    return float(aux[key])


def classical_limit(kind: str, a: float, T: float, aux: Optional[Mapping[str, Any]] = None) -> Tuple[float, float]:
    """(free energy J/m^2, pressure N/m^2) from the l = 0 term alone."""
    if not a > 0 or not T > 0:
        raise DomainError("classical_limit needs a > 0 and T > 0")
    kT = KB_J_K * T
    ideal_f = -kT * ZETA3 / (8 * PI * a ** 2)
    ideal_p = -kT * ZETA3 / (4 * PI * a ** 3)

    if kind == "ideal_metal":
        return ideal_f, ideal_p
    if kind in ("drude", "real_dielectric"):
        return ideal_f / 2, ideal_p / 2
    if kind == "plasma":
        omega_p = _need(aux, "omega_p")
        f = ideal_f / 2 + kT / (16 * PI * a ** 2) * plasma_te_integral(a, omega_p, 1)
        p = ideal_p / 2 - kT / (16 * PI * a ** 3) * plasma_te_integral(a, omega_p, 2)
        return f, p
    if kind == "ideal_dielectric":
        eps0 = _need(aux, "eps0")
        li3 = polylog3(((eps0 - 1) / (eps0 + 1)) ** 2)
        return -kT * li3 / (16 * PI * a ** 2), -kT * li3 / (8 * PI * a ** 3)
    raise ConfigurationError(f"unknown classical limit '{kind}'")


def _omega_p(params: Any) -> float:
    if hasattr(params, "get_param"):
        return params.get_param("omega_p")
    return _need(params, "omega_p")


def _skin_ratio(a: float, params: Any) -> float:
    """delta_0/a with delta_0 = c/omega_p."""
    return HBARC_EV_M / _omega_p(params) / a


def _accuracy_check(expansion: EntropyExpansion, delta: float) -> EntropyExpansion:
    if delta >= SERIES_DELTA_LIMIT:
        msg = f"skin-depth ratio {delta:.3g} >= {SERIES_DELTA_LIMIT}; series truncation error is not small"
        warnings.warn(msg, AccuracyWarning, stacklevel=3)
        expansion.warnings.append(msg)
    return expansion


def metal_entropy_asymptotics(kind: str, a: float, T: float, params: Any = None) -> EntropyExpansion:
    if not a > 0:
        raise DomainError(f"separation must be > 0, got {a}")

    if kind == "plasma_low_t":
        delta = _skin_ratio(a, params)
        prefactor = KB_J_K ** 3 * T ** 2 / (PI * HBARC_J_M ** 2)
        u = a * KB_J_K * T / HBARC_J_M
        leading = prefactor * 1.5 * ZETA3
        rest = prefactor * (-4 * PI ** 3 * u / 45
                            + delta * (3 * ZETA3 - 16 * PI ** 3 * u / 45)
                            - delta ** 2 * 20 * ZETA5 * u ** 2)
        return _accuracy_check(EntropyExpansion(kind, 2.0, leading, rest, +1), delta)

    if kind == "drude_t0_integral":
        value = KB_J_K / (16 * PI * a ** 2) * plasma_te_integral(a, _omega_p(params), 1)
        return EntropyExpansion(kind, 0.0, value, 0.0, -1)

    if kind == "drude_t0_series":
        delta = _skin_ratio(a, params)
        leading = -KB_J_K * ZETA3 / (16 * PI * a ** 2)
        return _accuracy_check(EntropyExpansion(kind, 0.0, leading, leading * (-4 * delta + 12 * delta ** 2), -1),
                               delta)

    # Coefficients of the following laws are not available in closed form
    if kind == "drude_impurity":
        return EntropyExpansion(kind, 1.0, sign=-1)
    if kind == "nonlocal_perfect":
        return EntropyExpansion(kind, 0.5)
    if kind == "nonlocal_impurity":
        return EntropyExpansion(kind, 1.0)
    raise ConfigurationError(f"unknown metal entropy expansion '{kind}'")


def oscillator_relaxation_length(osc: OscillatorSet) -> float:
    """c * sum g_j gamma_j / omega_j^4 in metres."""
    return HBARC_EV_M * sum(o.strength * o.damping / o.frequency ** 4 for o in osc.oscillators)


def dielectric_entropy_asymptotics(kind: str, a: float, T: float, osc: OscillatorSet) -> EntropyExpansion:
    if not a > 0:
        raise DomainError(f"separation must be > 0, got {a}")
    eps0 = static_permittivity(osc)
    r2 = ((eps0 - 1) / (eps0 + 1)) ** 2
    li3 = polylog3(r2)

    if kind == "real_t0":
        value = KB_J_K / (16 * PI * a ** 2) * (ZETA3 - li3)
        return EntropyExpansion(kind, 0.0, value, 0.0, +1)

    if kind == "ideal_low_t":
        if eps0 <= 1:
            raise DomainError("ideal_low_t needs a dielectric with eps(0) > 1")
        G = oscillator_relaxation_length(osc)
        prefactor = KB_J_K ** 2 * T / (2 * HBARC_J_M * a ** 2)
        linear = prefactor * G * li3 / (3 * (eps0 ** 2 - 1))
        quadratic = prefactor * 3 * ZETA3 * r2 * (eps0 ** 2 + 1) / (2 * PI) * a ** 2 * KB_J_K * T / HBARC_J_M
        if G == 0:
            return EntropyExpansion(kind, 2.0, quadratic, 0.0, +1)
        return EntropyExpansion(kind, 1.0, linear, quadratic, +1)

    raise ConfigurationError(f"unknown dielectric entropy expansion '{kind}'")


def casimir_polder_entropy_t0(a: float, alpha0: float, eps0: float) -> float:
    """T -> 0 atom-plate entropy (J/K) for a dielectric plate with dc conductivity."""
    if not a > 0 or not alpha0 > 0 or eps0 < 1:
        raise DomainError("casimir_polder_entropy_t0 needs a > 0, alpha0 > 0, eps0 >= 1")
    if math.isinf(eps0):
        return 0.0
    r = (eps0 - 1) / (eps0 + 1)
    return KB_J_K * alpha0 / (4 * a ** 3) * (1 - r)
