"""Physical constants and unit conversions shared by the engine.

Frequencies and wavenumbers are carried in eV (hbar = 1, hbar*c folds a
wavenumber into an energy). Results are returned in SI.
"""
import math

import scipy.constants as const

HBAR_J_S = const.hbar
KB_J_K = const.k
EV_J = const.e
C_M_S = const.c
EPSILON0_F_M = const.epsilon_0

HBAR_EV_S = const.hbar / const.e
HBARC_EV_M = const.hbar * const.c / const.e
HBARC_J_M = const.hbar * const.c
KB_EV_K = const.k / const.e

ZETA3 = 1.2020569032
ZETA5 = 1.0369277551
PI = math.pi

# Gold free-electron parameters and Fermi velocity
GOLD_OMEGA_P_EV = 9.0
GOLD_GAMMA_EV = 0.035
GOLD_GAMMA_RESIDUAL_EV = 5.32e10 * HBAR_EV_S
FERMI_VELOCITY_M_S = 1.40e6

T_ROOM_K = 300.0


def separation_to_ev(a: float) -> float:
    """Separation in metres expressed as an inverse energy (1/eV)."""
    return a / HBARC_EV_M


def rad_s_to_ev(omega: float) -> float:
    return omega * HBAR_EV_S


def invs_to_ev(sigma: float) -> float:
    """Gaussian conductivity in 1/s to eV."""
    return sigma * HBAR_EV_S


def velocity_ratio(v: float) -> float:
    return v / C_M_S
