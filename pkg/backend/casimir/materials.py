import enum
import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from .constants import (C_M_S, FERMI_VELOCITY_M_S, KB_EV_K, PI, T_ROOM_K,
                        invs_to_ev, velocity_ratio)
from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)


class MaterialType(enum.Enum):
    IDEAL_METAL = "ideal_metal"
    DRUDE = "drude"
    PLASMA = "plasma"
    GENERALIZED_PLASMA = "generalized_plasma"
    IDEAL_DIELECTRIC = "ideal_dielectric"
    REAL_DIELECTRIC = "real_dielectric"
    NONLOCAL_DRUDE = "nonlocal_drude"
    TABULATED = "tabulated"


class ConductivityMode(enum.Enum):
    ACTIVATED = "activated"
    CONSTANT = "constant"


@dataclass
class ModelParameter:
    name: str
    value: float
    description: str
    min_val: float
    max_val: float
    units: str = ""


@dataclass(frozen=True)
class DrudeParams:
    omega_p: float
    gamma_room: float
    gamma_residual: float = 0.0
    t_room: float = T_ROOM_K

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ConfigurationError(f"omega_p must be > 0, got {self.omega_p}")
        if self.gamma_room < 0 or self.gamma_residual < 0:
            raise ConfigurationError("relaxation parameters must be >= 0")
        if not self.t_room > 0:
            raise ConfigurationError(f"t_room must be > 0, got {self.t_room}")
        if self.gamma_room + self.gamma_residual >= self.omega_p / 10:
            raise ConfigurationError(
                f"relaxation {self.gamma_room + self.gamma_residual} eV is not small against omega_p={self.omega_p} eV")


@dataclass(frozen=True)
class Oscillator:
    strength: float   # g_j, eV^2
    frequency: float  # omega_j, eV
    damping: float = 0.0

    def __post_init__(self):
        if not self.frequency > 0:
            raise ConfigurationError(f"oscillator frequency must be > 0, got {self.frequency}")
        if self.strength < 0 or self.damping < 0:
            raise ConfigurationError("oscillator strength and damping must be >= 0")


@dataclass(frozen=True)
class OscillatorSet:
    oscillators: Tuple[Oscillator, ...] = ()

    @property
    def count(self) -> int:
        return len(self.oscillators)

    @classmethod
    def from_triples(cls, triples: Sequence[Tuple[float, float, float]]) -> "OscillatorSet":
        return cls(tuple(Oscillator(g, w, d) for g, w, d in triples))

    def susceptibility(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        total = np.zeros_like(xi)
        for osc in self.oscillators:
            total = total + osc.strength / (osc.frequency ** 2 + xi ** 2 + osc.damping * xi)
        return total

    def scaled(self, factor: float) -> "OscillatorSet":
        return OscillatorSet(tuple(replace(o, strength=o.strength * factor) for o in self.oscillators))


@dataclass(frozen=True)
class ConductivityLaw:
    sigma_ref: float      # 1/s, Gaussian
    delta_gap: float = 0.0
    t_ref: float = T_ROOM_K
    mode: ConductivityMode = ConductivityMode.ACTIVATED

    def __post_init__(self):
        if self.sigma_ref < 0 or self.delta_gap < 0 or not self.t_ref > 0:
            raise ConfigurationError("conductivity law needs sigma_ref >= 0, delta_gap >= 0, t_ref > 0")


@dataclass(frozen=True)
class NonlocalDrudeParams:
    drude: DrudeParams
    v_t: float = FERMI_VELOCITY_M_S
    v_l: float = FERMI_VELOCITY_M_S

    def __post_init__(self):
        for label, v in (("v_t", self.v_t), ("v_l", self.v_l)):
            if not 0 < v < C_M_S / 50:
                raise ConfigurationError(f"{label} must lie in (0, c/50), got {v} m/s")


def gamma_at_temperature(params: DrudeParams, temperature: float) -> float:
    """Relaxation in eV: residual impurity part plus a T^2 law anchored at t_room."""
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    return params.gamma_residual + params.gamma_room * (temperature / params.t_room) ** 2


def conductivity_at_temperature(law: ConductivityLaw, temperature: float) -> float:
    """dc conductivity in 1/s."""
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    if law.mode is ConductivityMode.CONSTANT:
        return law.sigma_ref
    if temperature == 0:
        return 0.0
    exponent = -(law.delta_gap / (2 * KB_EV_K)) * (1.0 / temperature - 1.0 / law.t_ref)
    # exp underflows to 0 well before it could overflow for T < t_ref
    return law.sigma_ref * float(np.exp(min(exponent, 700.0)))


def static_permittivity(osc: OscillatorSet) -> float:
    return 1.0 + sum(o.strength / o.frequency ** 2 for o in osc.oscillators)


def _drude_term(omega_p: float, gamma: float, xi: np.ndarray) -> np.ndarray:
    return omega_p ** 2 / (xi * (xi + gamma))


class MaterialModel:
    """
    Base class for a plate's response on the imaginary frequency axis.
    Subclasses evaluate eps(i xi) for xi > 0; zero frequency is handled
    by the reflection module.
    """
    is_nonlocal = False

    def __init__(self, type: MaterialType, name: Optional[str] = None, mu0: float = 1.0):
        if mu0 < 1:
            raise ConfigurationError(f"mu0 must be >= 1, got {mu0}")
        self.type = type
        self.name = name or type.value
        self.mu0 = mu0

    def eps(self, xi: np.ndarray, temperature: float) -> np.ndarray:
        raise NotImplementedError

    def parameters(self) -> Dict[str, ModelParameter]:
        return {"mu0": ModelParameter("mu0", self.mu0, "static permeability", 1.0, 1e6)}

    def get_param(self, name: str) -> float:
        try:
            return self.parameters()[name].value
        except KeyError:
            raise ConfigurationError(f"{self.name} has no parameter '{name}'") from None

    def with_param(self, name: str, value: float) -> "MaterialModel":
        """Returns a copy with one named parameter replaced."""
        param = self.parameters().get(name)
        if param is None:
            raise ConfigurationError(f"{self.name} has no parameter '{name}'")
        if not param.min_val <= value <= param.max_val:
            raise ConfigurationError(
                f"{name}={value} outside [{param.min_val}, {param.max_val}] for {self.name}")
        return self._replaced(name, float(value))

    def _replaced(self, name: str, value: float) -> "MaterialModel":
        if name == "mu0":
            clone = object.__new__(type(self))
            clone.__dict__.update(self.__dict__)
            clone.mu0 = value
            return clone
        raise ConfigurationError(f"{self.name} has no parameter '{name}'")

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, mu0={self.mu0})"


class IdealMetal(MaterialModel):
    def __init__(self, name: str = "ideal-metal"):
        super().__init__(MaterialType.IDEAL_METAL, name)

    def eps(self, xi, temperature):
        return np.full_like(np.asarray(xi, dtype=float), np.inf)


class Drude(MaterialModel):
    def __init__(self, params: DrudeParams, mu0: float = 1.0, name: Optional[str] = None):
        super().__init__(MaterialType.DRUDE, name, mu0)
        self.params = params

    def eps(self, xi, temperature):
        return 1.0 + _drude_term(self.params.omega_p, gamma_at_temperature(self.params, temperature), xi)

    def parameters(self):
        p = self.params
        out = super().parameters()
        out.update({
            "omega_p": ModelParameter("omega_p", p.omega_p, "plasma frequency", 1e-3, 100.0, "eV"),
            "gamma": ModelParameter("gamma", p.gamma_room, "relaxation at t_room", 0.0, 10.0, "eV"),
            "gamma_residual": ModelParameter("gamma_residual", p.gamma_residual, "impurity relaxation", 0.0, 1.0, "eV"),
        })
        return out

    def _replaced(self, name, value):
        fields = {"omega_p": "omega_p", "gamma": "gamma_room", "gamma_residual": "gamma_residual"}
        if name in fields:
            return Drude(replace(self.params, **{fields[name]: value}), self.mu0, self.name)
        return super()._replaced(name, value)


class Plasma(MaterialModel):
    def __init__(self, omega_p: float, mu0: float = 1.0, name: Optional[str] = None):
        super().__init__(MaterialType.PLASMA, name, mu0)
        if not omega_p > 0:
            raise ConfigurationError(f"omega_p must be > 0, got {omega_p}")
        self.omega_p = omega_p

    def eps(self, xi, temperature):
        xi = np.asarray(xi, dtype=float)
        return 1.0 + self.omega_p ** 2 / xi ** 2

    def parameters(self):
        out = super().parameters()
        out["omega_p"] = ModelParameter("omega_p", self.omega_p, "plasma frequency", 1e-3, 1e4, "eV")
        return out

    def _replaced(self, name, value):
        if name == "omega_p":
            return Plasma(value, self.mu0, self.name)
        return super()._replaced(name, value)


class GeneralizedPlasma(MaterialModel):
    """Plasma free-electron term plus bound-electron oscillators."""

    def __init__(self, omega_p: float, oscillators: OscillatorSet, mu0: float = 1.0, name: Optional[str] = None):
        super().__init__(MaterialType.GENERALIZED_PLASMA, name, mu0)
        if not omega_p > 0:
            raise ConfigurationError(f"omega_p must be > 0, got {omega_p}")
        self.omega_p = omega_p
        self.oscillators = oscillators

    def eps(self, xi, temperature):
        xi = np.asarray(xi, dtype=float)
        return 1.0 + self.omega_p ** 2 / xi ** 2 + self.oscillators.susceptibility(xi)

    def parameters(self):
        out = super().parameters()
        out["omega_p"] = ModelParameter("omega_p", self.omega_p, "plasma frequency", 1e-3, 1e4, "eV")
        return out

    def _replaced(self, name, value):
        if name == "omega_p":
            return GeneralizedPlasma(value, self.oscillators, self.mu0, self.name)
        return super()._replaced(name, value)


class IdealDielectric(MaterialModel):
    def __init__(self, oscillators: OscillatorSet, mu0: float = 1.0, kappa: Optional[float] = None,
                 name: Optional[str] = None):
        super().__init__(MaterialType.IDEAL_DIELECTRIC, name, mu0)
        if kappa is not None and kappa < 0:
            raise ConfigurationError(f"kappa must be >= 0, got {kappa}")
        self.oscillators = oscillators
        self.kappa = kappa  # inverse screening length, eV

    @property
    def eps0(self) -> float:
        return static_permittivity(self.oscillators)

    def eps(self, xi, temperature):
        return 1.0 + self.oscillators.susceptibility(xi)


class RealDielectric(IdealDielectric):
    """Oscillator permittivity plus the dc-conductivity term 4*pi*sigma0(T)/xi."""

    def __init__(self, oscillators: OscillatorSet, conductivity: ConductivityLaw, mu0: float = 1.0,
                 kappa: Optional[float] = None, name: Optional[str] = None):
        super().__init__(oscillators, mu0, kappa, name)
        self.type = MaterialType.REAL_DIELECTRIC
        if name is None:
            self.name = self.type.value
        self.conductivity = conductivity

    def eps(self, xi, temperature):
        xi = np.asarray(xi, dtype=float)
        sigma = invs_to_ev(conductivity_at_temperature(self.conductivity, temperature))
        return super().eps(xi, temperature) + 4 * PI * sigma / xi

    def parameters(self):
        out = super().parameters()
        out["sigma0"] = ModelParameter("sigma0", self.conductivity.sigma_ref, "dc conductivity at t_ref",
                                       0.0, 1e20, "1/s")
        return out

    def _replaced(self, name, value):
        if name == "sigma0":
            return RealDielectric(self.oscillators, replace(self.conductivity, sigma_ref=value),
                                  self.mu0, self.kappa, self.name)
        return super()._replaced(name, value)


class NonlocalDrude(MaterialModel):
    """Drude-like response with wavenumber-dependent transverse and longitudinal permittivities."""
    is_nonlocal = True

    def __init__(self, params: NonlocalDrudeParams, mu0: float = 1.0, name: Optional[str] = None):
        super().__init__(MaterialType.NONLOCAL_DRUDE, name, mu0)
        self.params = params

    def eps(self, xi, temperature):
        raise DomainError("nonlocal response depends on k_perp; use eps_nonlocal_imag_freq")

    def eps_tl(self, xi, k_perp, temperature) -> Tuple[np.ndarray, np.ndarray]:
        return eps_nonlocal_imag_freq(self.params, xi, k_perp, temperature)

    def parameters(self):
        p = self.params
        out = super().parameters()
        out.update({
            "omega_p": ModelParameter("omega_p", p.drude.omega_p, "plasma frequency", 1e-3, 100.0, "eV"),
            "gamma": ModelParameter("gamma", p.drude.gamma_room, "relaxation at t_room", 0.0, 10.0, "eV"),
            "gamma_residual": ModelParameter("gamma_residual", p.drude.gamma_residual, "impurity relaxation",
                                             0.0, 1.0, "eV"),
            "v_t": ModelParameter("v_t", p.v_t, "transverse nonlocality velocity", 1.0, C_M_S / 50, "m/s"),
            "v_l": ModelParameter("v_l", p.v_l, "longitudinal nonlocality velocity", 1.0, C_M_S / 50, "m/s"),
        })
        return out

    def _replaced(self, name, value):
        drude_fields = {"omega_p": "omega_p", "gamma": "gamma_room", "gamma_residual": "gamma_residual"}
        if name in drude_fields:
            drude = replace(self.params.drude, **{drude_fields[name]: value})
            return NonlocalDrude(replace(self.params, drude=drude), self.mu0, self.name)
        if name in ("v_t", "v_l"):
            return NonlocalDrude(replace(self.params, **{name: value}), self.mu0, self.name)
        return super()._replaced(name, value)


class Tabulated(MaterialModel):
    """
    eps(i xi) interpolated from precomputed samples. `zero_frequency` tags
    which metallic limit applies at xi = 0 ("drude" or "plasma").
    """

    def __init__(self, xi: Sequence[float], eps: Sequence[float], zero_frequency: str = "drude",
                 omega_p: Optional[float] = None, high_frequency: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 mu0: float = 1.0, name: Optional[str] = None, digest: Optional[str] = None):
        super().__init__(MaterialType.TABULATED, name, mu0)
        xi = np.asarray(xi, dtype=float)
        eps = np.asarray(eps, dtype=float)
        if xi.ndim != 1 or xi.shape != eps.shape or len(xi) < 2:
            raise ConfigurationError("tabulated material needs at least two (xi, eps) samples")
        if np.any(np.diff(xi) <= 0) or xi[0] <= 0:
            raise ConfigurationError("tabulated xi must be positive and strictly increasing")
        if zero_frequency not in ("drude", "plasma"):
            raise ConfigurationError(f"zero_frequency must be 'drude' or 'plasma', got {zero_frequency!r}")
        if zero_frequency == "plasma" and not (omega_p and omega_p > 0):
            raise ConfigurationError("plasma-tagged tabulated material needs omega_p")
        self.xi = xi
        self.values = eps
        self.zero_frequency = zero_frequency
        self.omega_p = omega_p
        self.digest = digest
        self._high = high_frequency
        self._low_power = 1.0 if zero_frequency == "drude" else 2.0
        chi = np.maximum(eps - 1.0, 1e-300)
        self._spline = PchipInterpolator(np.log(xi), np.log(chi), extrapolate=False)

    def eps(self, xi, temperature):
        shape = np.shape(xi)
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.empty_like(xi)
        lo, hi = self.xi[0], self.xi[-1]
        below = xi < lo
        above = xi > hi
        inside = ~(below | above)
        out[inside] = 1.0 + np.exp(self._spline(np.log(xi[inside])))
        out[below] = 1.0 + (self.values[0] - 1.0) * (lo / xi[below]) ** self._low_power
        if np.any(above):
            if self._high is not None:
                out[above] = self._high(xi[above])
            else:
                out[above] = 1.0 + (self.values[-1] - 1.0) * (hi / xi[above]) ** 2
        return out.reshape(shape)


def _check_positive_xi(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi > 0)):
        raise DomainError("xi must be > 0; zero frequency is handled by zero_freq_coeffs")
    return xi


def _as_output(value: np.ndarray, like):
    return float(value) if np.ndim(like) == 0 else value


def eps_imag_freq(model: MaterialModel, xi, temperature: float):
    """Dimensionless eps(i xi) for a local model, xi in eV."""
    arr = _check_positive_xi(xi)
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    return _as_output(model.eps(arr, temperature), xi)


def eps_nonlocal_imag_freq(params: NonlocalDrudeParams, xi, k_perp, temperature: float):
    """
    Transverse and longitudinal permittivities at imaginary frequency.
    k_perp is hbar*c*k in eV.
    """
    xi_arr = _check_positive_xi(xi)
    k_arr = np.asarray(k_perp, dtype=float)
    if np.any(k_arr < 0):
        raise DomainError("k_perp must be >= 0")
    base = _drude_term(params.drude.omega_p, gamma_at_temperature(params.drude, temperature), xi_arr)
    spatial_t = velocity_ratio(params.v_t) * k_arr / xi_arr
    spatial_l = velocity_ratio(params.v_l) * k_arr / xi_arr
    eps_t = 1.0 + base * (1.0 + spatial_t)
    eps_l = 1.0 + base / (1.0 + spatial_l)
    if np.ndim(xi) == 0 and np.ndim(k_perp) == 0:
        return float(eps_t), float(eps_l)
    return eps_t, eps_l


def mu_at_matsubara(model: MaterialModel, l: int) -> float:
    if l < 0:
        raise DomainError(f"Matsubara index must be >= 0, got {l}")
    return model.mu0 if l == 0 else 1.0
