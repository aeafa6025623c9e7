import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import curve_fit

from .config import MatsubaraConfig
from .constants import HBAR_J_S, KB_EV_K, KB_J_K, PI, ZETA3, separation_to_ev
from .errors import DegenerateInputError, DomainError
from .lifshitz import force_zero_t, free_energy, pressure
from .materials import Drude, MaterialModel, NonlocalDrude

logger = logging.getLogger(__name__)

ENTROPY_REL_TOL = 1e-11
MIN_STEP_K = 1e-3
# Relative float64 floor on differences of free energies
ROUNDING_FLOOR = 1e-14
NOISE_FLOOR_FRACTION = 1e-4
NERNST_FRACTION = 1e-3
# Log-log slope below which an entropy series counts as flat
MIN_DECAY_EXPONENT = 0.2
MAX_FIT_EXPONENT = 6.0
# Share of the lowest sample a fitted nonzero limit must carry
MIN_LIMIT_SHARE = 0.5


class Verdict(str, enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class Convention(str, enum.Enum):
    AT_T = "at_T"
    AT_ZERO = "at_zero"


class EntropySample(BaseModel):
    temperature: float
    entropy: float
    fd_step: float
    fd_error_estimate: float
    conclusive: bool = True


class NernstReport(BaseModel):
    separation: float
    limit_estimate: float
    fitted_exponent: float
    verdict: Verdict
    threshold: float
    samples: List[EntropySample] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


def natural_entropy_scale(a: float) -> float:
    """k_B zeta(3)/(16 pi a^2), the magnitude of the Drude T -> 0 entropy."""
    return KB_J_K * ZETA3 / (16 * PI * a ** 2)


def finite_difference_step(T: float) -> float:
    """max(1e-3 T, 1 mK), capped at T/4 so that T - h stays positive."""
    return min(max(1e-3 * T, MIN_STEP_K), T / 4)


def entropy(a: float, T: float, model1: MaterialModel, model2: MaterialModel,
            cfg: MatsubaraConfig) -> EntropySample:
    """
    S = -dF/dT by central differences at steps h and h/2 combined by
    Richardson extrapolation. Relaxation and conductivity follow T inside
    the difference.
    """
    if not a > 0 or not T > 0:
        raise DomainError("entropy needs a > 0 and T > 0")
    cfg = cfg.tightened(ENTROPY_REL_TOL)
    h = finite_difference_step(T)

    def F(t: float) -> float:
        return free_energy(a, t, model1, model2, cfg).value

    def derivative(step: float) -> float:
        return (F(T - step) - F(T + step)) / (2 * step)

    d_h = derivative(h)
    d_half = derivative(h / 2)
    s = (4 * d_half - d_h) / 3
    rounding = ROUNDING_FLOOR * abs(F(T)) / h
    error = abs(d_half - d_h) / 3 + rounding
    floor = NOISE_FLOOR_FRACTION * natural_entropy_scale(a)
    conclusive = error < 0.01 * max(abs(s), floor)
    if not conclusive:
        logger.warning("Entropy at T=%g K is dominated by finite-difference noise (S=%g, err=%g)", T, s, error)
    return EntropySample(temperature=T, entropy=s, fd_step=h, fd_error_estimate=error, conclusive=conclusive)


def thermal_correction(a: float, T: float, model1: MaterialModel, model2: MaterialModel,
                       cfg: MatsubaraConfig, convention: str = "at_T") -> float:
    """
    Relative thermal correction to the pressure, (P(a,T) - P(a,0)) divided by
    P(a,T) (at_T) or by P(a,0) (at_zero). Published correction curves for
    gold are plotted against P(a,0), so compare those with at_zero.
    """
    try:
        convention = Convention(convention)
    except ValueError:
        known = ", ".join(c.value for c in Convention)
        raise DomainError(f"unknown convention '{convention}'; known: {known}") from None
    cfg = cfg.at(T)
    p_t = pressure(a, T, model1, model2, cfg)
    p_0 = force_zero_t(a, model1, model2, cfg)
    denominator = p_t if convention is Convention.AT_T else p_0
    floor = max(10 * denominator.truncation_error, 1e-300)
    if abs(denominator.value) <= floor:
        raise DegenerateInputError(f"pressure {denominator.value:g} N/m^2 is below its noise floor")
    return (p_t.value - p_0.value) / denominator.value


def asymptotic_temperature(a: float, model: MaterialModel) -> Optional[float]:
    """
    Temperature in K below which the low-temperature entropy law of a
    relaxing metal applies, or None when the model has no such scale.

    Nonlocal: hbar v_t / (4 pi a k_B), and gamma_0 / (2 pi k_B) with impurities.
    Drude with impurities: gamma_0 / (8 pi k_B (a/hbar c)^2 omega_p^2).
    """
    if isinstance(model, NonlocalDrude):
        scale = HBAR_J_S * model.params.v_t / (4 * PI * a * KB_J_K)
        gamma0 = model.params.drude.gamma_residual
        if gamma0 > 0:
            scale = min(scale, gamma0 / (2 * PI * KB_EV_K))
        return scale
    if isinstance(model, Drude) and model.params.gamma_residual > 0:
        a_ev = separation_to_ev(a)
        return model.params.gamma_residual / (8 * PI * KB_EV_K * a_ev ** 2 * model.params.omega_p ** 2)
    return None


def _validate_grid(t_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 6:
        raise DomainError("temperature grid needs at least 6 points")
    if np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
        raise DomainError("temperature grid must be positive and strictly descending")
    if grid[0] / grid[-1] < 100:
        raise DomainError("temperature grid must span at least two decades")
    return grid


def _power_law(t, limit, coeff, power):
    return limit + coeff * t ** power


class NernstDetector:
    """
    Reads a low-temperature entropy series and decides whether it tends to
    zero. Uses log-log trend fits and a three-parameter power law.
    """

    def __init__(self, a: float, window_size: int = 3):
        self.a = a
        self.window_size = window_size
        self.threshold = NERNST_FRACTION * natural_entropy_scale(a)

    def analyze(self, samples: List[EntropySample]) -> NernstReport:
        ordered = sorted(samples, key=lambda s: s.temperature)
        T = np.array([s.temperature for s in ordered])
        S = np.array([s.entropy for s in ordered])
        lowest = S[:self.window_size]
        half = max(self.window_size, len(S) // 2)
        notes: List[str] = []
        reliable = all(s.conclusive for s in ordered[:self.window_size])

        if abs(S[0]) < self.threshold:
            limit = 0.0
            exponent = self.detect_trend(T[:half], S[:half])
        elif self.detect_spread(lowest) < 0.01:
            limit = float(S[0])
            exponent = self.detect_trend(T[:half], S[:half] - limit)
            notes.append("entropy flat at the lowest temperatures")
        else:
            fit = self.fit_power_law(T[:half + 1], S[:half + 1])
            if fit is None:
                limit, exponent = self.trend_limit(T[:half], S[:half])
                notes.append("power-law fit rejected; limit read from the log-log trend")
            else:
                limit, exponent = fit

        if not reliable:
            verdict = Verdict.INCONCLUSIVE
            notes.append("finite-difference noise dominates at the lowest temperatures")
        elif abs(limit) < self.threshold and exponent > 0:
            verdict = Verdict.SATISFIED
        elif abs(limit) >= self.threshold:
            verdict = Verdict.VIOLATED
        else:
            verdict = Verdict.INCONCLUSIVE

        return NernstReport(separation=self.a, limit_estimate=limit,
                            fitted_exponent=0.0 if np.isnan(exponent) else float(exponent),
                            verdict=verdict, threshold=self.threshold, samples=ordered, notes=notes)

    def detect_trend(self, T: np.ndarray, S: np.ndarray) -> float:
        """Slope of log|S| against log T; nan when fewer than two nonzero points."""
        mask = S != 0
        if np.count_nonzero(mask) < 2:
            return float("nan")
        slope, _ = np.polyfit(np.log(T[mask]), np.log(np.abs(S[mask])), 1)
        return float(slope)

    def detect_spread(self, series: np.ndarray) -> float:
        """Relative spread of a short series around its mean."""
        mean = np.mean(series)
        if mean == 0:
            return float("inf")
        return float((np.max(series) - np.min(series)) / abs(mean))

    def trend_limit(self, T: np.ndarray, S: np.ndarray) -> Tuple[float, float]:
        """Zero limit for a series decaying at least as T^MIN_DECAY_EXPONENT, else the lowest sample."""
        slope = self.detect_trend(T, S)
        if np.isfinite(slope) and slope >= MIN_DECAY_EXPONENT:
            return 0.0, slope
        limit = float(S[0])
        return limit, self.detect_trend(T[1:], S[1:] - limit)

    def fit_power_law(self, T: np.ndarray, S: np.ndarray) -> Optional[Tuple[float, float]]:
        """
        Fits S = limit + c T^p. None when the fit fails, when its limit strays
        from the lowest sample by more than the sampled span or when it
        carries less than MIN_LIMIT_SHARE of the lowest sample.
        """
        if len(T) < 4:
            return None
        p0 = (float(S[0]), float(S[-1] - S[0]) / float(T[-1]), 1.0)
        try:
            params, _ = curve_fit(_power_law, T, S, p0=p0, maxfev=20000)
        except (RuntimeError, ValueError) as e:
            logger.warning("Power-law fit of entropy failed: %s", e)
            return None
        limit, power = float(params[0]), float(params[2])
        span = float(np.max(S) - np.min(S))
        explains_lowest = limit * S[0] > 0 and abs(limit) >= MIN_LIMIT_SHARE * abs(S[0])
        if not (np.isfinite(limit) and 0 < power <= MAX_FIT_EXPONENT and explains_lowest
                and abs(limit - S[0]) <= span):
            logger.info("Rejected power-law fit: limit=%g, exponent=%g", limit, power)
            return None
        return limit, power


def nernst_scan(a: float, model1: MaterialModel, model2: MaterialModel, t_grid: Sequence[float],
                cfg: MatsubaraConfig, workers: int = 1) -> NernstReport:
    """Entropy on a descending temperature grid and a verdict on its T -> 0 limit."""
    grid = _validate_grid(t_grid)
    if not a > 0:
        raise DomainError(f"separation must be > 0, got {a}")
    logger.info("Nernst scan at a=%g m over %d temperatures", a, len(grid))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        samples = list(pool.map(lambda t: entropy(a, float(t), model1, model2, cfg), grid))
    report = NernstDetector(a).analyze(samples)
    scales = [s for s in (asymptotic_temperature(a, m) for m in (model1, model2)) if s is not None]
    if scales and grid[-1] > 0.1 * min(scales):
        report.notes.append(f"lowest temperature {grid[-1]:g} K does not reach the asymptotic regime "
                            f"(below about {0.1 * min(scales):.3g} K)")
    return report
