"""
TM/TE reflection coefficients on the imaginary frequency axis.

All wavenumbers and frequencies are in eV (hbar*c*k and hbar*xi). Local
Fresnel and impedance forms are homogeneous of degree zero in (xi, k_perp),
so the engine may also pass both scaled by 2a.
"""
import logging
import math
from typing import NamedTuple

import numpy as np

from .constants import EPSILON0_F_M, EV_J, HBARC_EV_M, KB_J_K, T_ROOM_K, velocity_ratio
from .materials import (Drude, GeneralizedPlasma, IdealDielectric, IdealMetal, MaterialModel, NonlocalDrude, Plasma,
                        RealDielectric, Tabulated, gamma_at_temperature)
from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)


class ReflectionPair(NamedTuple):
    r_tm: np.ndarray
    r_te: np.ndarray


class WaveVectors(NamedTuple):
    q: np.ndarray
    k: np.ndarray
    k_t: np.ndarray


def _out(value, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(value)
    return value


def wave_vectors(xi, k_perp, eps=1.0, mu=1.0, eps_t=None) -> WaveVectors:
    xi = np.asarray(xi, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    k2 = k_perp ** 2
    q = np.sqrt(k2 + xi ** 2)
    k = np.sqrt(k2 + np.asarray(eps) * np.asarray(mu) * xi ** 2)
    k_t = np.sqrt(k2 + np.asarray(eps if eps_t is None else eps_t) * xi ** 2)
    return WaveVectors(q, k, k_t)


def fresnel(eps, mu, xi, k_perp) -> ReflectionPair:
    """Fresnel coefficients at imaginary frequency xi > 0."""
    if np.any(~(np.asarray(xi) > 0)):
        raise DomainError("fresnel needs xi > 0; use zero_freq_coeffs at zero frequency")
    if np.any(np.asarray(k_perp) < 0):
        raise DomainError("k_perp must be >= 0")
    eps = np.asarray(eps, dtype=float)
    mu = np.asarray(mu, dtype=float)
    q, k, _ = wave_vectors(xi, k_perp, eps, mu)
    r_tm = (eps * q - k) / (eps * q + k)
    r_te = (mu * q - k) / (mu * q + k)
    ins = (eps, mu, xi, k_perp)
    return ReflectionPair(_out(r_tm, *ins), _out(r_te, *ins))


def impedance_reflection(eps_t, eps_l, xi, k_perp) -> ReflectionPair:
    """Coefficients for permittivities that depend on k_perp only (transverse and longitudinal parts)."""
    if np.any(~(np.asarray(xi) > 0)):
        raise DomainError("impedance_reflection needs xi > 0")
    if np.any(np.asarray(k_perp) < 0):
        raise DomainError("k_perp must be >= 0")
    eps_t = np.asarray(eps_t, dtype=float)
    eps_l = np.asarray(eps_l, dtype=float)
    k_perp_a = np.asarray(k_perp, dtype=float)
    q, _, k_t = wave_vectors(xi, k_perp_a, eps_t=eps_t)
    longitudinal = k_perp_a * (eps_t - eps_l) / eps_l
    r_tm = (eps_t * q - k_t - longitudinal) / (eps_t * q + k_t + longitudinal)
    r_te = (q - k_t) / (q + k_t)
    ins = (eps_t, eps_l, xi, k_perp)
    return ReflectionPair(_out(r_tm, *ins), _out(r_te, *ins))


def screened_rtm0(eps0: float, kappa, k_perp):
    """Zero-frequency TM coefficient of a dielectric with inverse screening length kappa (eV)."""
    if eps0 < 1:
        raise DomainError(f"eps0 must be >= 1, got {eps0}")
    if np.any(np.asarray(kappa) < 0):
        raise DomainError("kappa must be >= 0")
    if np.any(~(np.asarray(k_perp) > 0)):
        raise DomainError("k_perp must be > 0")
    k_perp_a = np.asarray(k_perp, dtype=float)
    root = eps0 * np.sqrt(np.asarray(kappa, dtype=float) ** 2 + k_perp_a ** 2)
    return _out((root - k_perp_a) / (root + k_perp_a), kappa, k_perp)


def debye_huckel_kappa(eps0: float, n_per_m3: float, temperature: float) -> float:
    """Inverse Debye-Hueckel screening length in eV for carrier density n (1/m^3)."""
    if eps0 < 1 or n_per_m3 < 0 or not temperature > 0:
        raise DomainError("debye_huckel_kappa needs eps0 >= 1, n >= 0, T > 0")
    kappa_si = math.sqrt(EV_J ** 2 * n_per_m3 / (eps0 * EPSILON0_F_M * KB_J_K * temperature))
    return kappa_si * HBARC_EV_M


def _magnetic_rte(mu0: float) -> float:
    return (mu0 - 1.0) / (mu0 + 1.0)


def _plasma_rte0(omega_p: float, mu0: float, k_perp: np.ndarray) -> np.ndarray:
    root = np.sqrt(k_perp ** 2 + mu0 * omega_p ** 2)
    return (mu0 * k_perp - root) / (mu0 * k_perp + root)


def zero_freq_coeffs(model: MaterialModel, k_perp, temperature: float = T_ROOM_K) -> ReflectionPair:
    """
    Exact xi = 0 coefficients for each model. `temperature` matters only for
    the nonlocal model, whose TE limit depends on gamma(T).
    """
    k = np.asarray(k_perp, dtype=float)
    if np.any(~(k > 0)):
        raise DomainError("k_perp must be > 0 at zero frequency")
    ones = np.ones_like(k)

    if isinstance(model, IdealMetal):
        r_tm, r_te = ones, -ones
    elif isinstance(model, Drude):
        r_tm, r_te = ones, _magnetic_rte(model.mu0) * ones
    elif isinstance(model, (Plasma, GeneralizedPlasma)):
        r_tm, r_te = ones, _plasma_rte0(model.omega_p, model.mu0, k)
    elif isinstance(model, IdealDielectric):
        if model.kappa is not None:
            r_tm = np.asarray(screened_rtm0(model.eps0, model.kappa, k)) * ones
        elif isinstance(model, RealDielectric):
            r_tm = ones
        else:
            eps0 = model.eps0
            r_tm = (eps0 - 1.0) / (eps0 + 1.0) * ones
        r_te = _magnetic_rte(model.mu0) * ones
    elif isinstance(model, NonlocalDrude):
        p = model.params
        gamma = gamma_at_temperature(p.drude, temperature)
        r_tm = ones
        if gamma == 0:
            r_te = -ones
        else:
            k0 = np.sqrt(k ** 2 + p.drude.omega_p ** 2 * velocity_ratio(p.v_t) * k / gamma)
            r_te = (k - k0) / (k + k0)
    elif isinstance(model, Tabulated):
        r_tm = ones
        if model.zero_frequency == "plasma":
            r_te = _plasma_rte0(model.omega_p, model.mu0, k)
        else:
            r_te = _magnetic_rte(model.mu0) * ones
    else:
        raise ConfigurationError(f"no zero-frequency limit known for {model!r}")

    return ReflectionPair(_out(r_tm, k_perp), _out(r_te, k_perp))


def reflection_coefficients(model: MaterialModel, xi, k_perp, temperature: float,
                            zero_frequency: bool = False) -> ReflectionPair:
    """
    Dispatches one plate's coefficients. With zero_frequency the xi argument is
    ignored and the exact limit forms are used; otherwise mu = 1.
    """
    if zero_frequency:
        return zero_freq_coeffs(model, k_perp, temperature)
    if isinstance(model, IdealMetal):
        shape = np.broadcast(np.asarray(xi), np.asarray(k_perp)).shape
        return ReflectionPair(np.ones(shape), -np.ones(shape))
    if isinstance(model, NonlocalDrude):
        eps_t, eps_l = model.eps_tl(xi, k_perp, temperature)
        return impedance_reflection(eps_t, eps_l, xi, k_perp)
    eps = model.eps(np.asarray(xi, dtype=float), temperature)
    return fresnel(eps, 1.0, xi, k_perp)
