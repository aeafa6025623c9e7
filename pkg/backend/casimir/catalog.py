"""
Built-in named materials and loading of user material files.

Names accept parameter overrides, e.g. `drude:au@omega_p=6.85,gamma=0.04`.
`cache:<path>` loads a tabulated material from an optics cache file.
"""
import configparser
import logging
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional

from .constants import (FERMI_VELOCITY_M_S, GOLD_GAMMA_EV, GOLD_GAMMA_RESIDUAL_EV, GOLD_OMEGA_P_EV, T_ROOM_K)
from .errors import ConfigurationError
from .materials import (ConductivityLaw, ConductivityMode, Drude, DrudeParams, GeneralizedPlasma, IdealDielectric,
                        IdealMetal, MaterialModel, NonlocalDrude, NonlocalDrudeParams, OscillatorSet, Plasma,
                        RealDielectric, Tabulated)

logger = logging.getLogger(__name__)

NICKEL_OMEGA_P_EV = 4.89
NICKEL_GAMMA_EV = 0.0436
NICKEL_MU0 = 110.0

# Two-oscillator silica surrogate: (g/omega^2, omega eV, gamma eV); static permittivity 3.81
SILICA_OSCILLATORS = ((1.703, 0.1237, 0.01), (1.107, 13.2, 0.0))
SILICA_SIGMA0_INVS = 29.7
SILICA_GAP_EV = 9.0

# Single interband oscillator for gold (g eV^2, omega eV, gamma eV)
GOLD_INTERBAND = ((7.091, 3.05, 0.7555),)


def silica_oscillators() -> OscillatorSet:
    return OscillatorSet.from_triples([(c * w ** 2, w, g) for c, w, g in SILICA_OSCILLATORS])


def _gold(residual: float = 0.0) -> DrudeParams:
    return DrudeParams(GOLD_OMEGA_P_EV, GOLD_GAMMA_EV, residual, T_ROOM_K)


BUILTIN: Dict[str, Callable[[], MaterialModel]] = {
    "ideal-metal": lambda: IdealMetal(),
    "drude:au": lambda: Drude(_gold(), name="drude:au"),
    "drude:au-perfect": lambda: Drude(_gold(), name="drude:au-perfect"),
    "drude:au-impurity": lambda: Drude(_gold(GOLD_GAMMA_RESIDUAL_EV), name="drude:au-impurity"),
    "plasma:au": lambda: Plasma(GOLD_OMEGA_P_EV, name="plasma:au"),
    "generalized-plasma:au": lambda: GeneralizedPlasma(GOLD_OMEGA_P_EV, OscillatorSet.from_triples(GOLD_INTERBAND),
                                                       name="generalized-plasma:au"),
    "nonlocal:au": lambda: NonlocalDrude(NonlocalDrudeParams(_gold(), FERMI_VELOCITY_M_S, FERMI_VELOCITY_M_S),
                                         name="nonlocal:au"),
    "nonlocal:au-impurity": lambda: NonlocalDrude(
        NonlocalDrudeParams(_gold(GOLD_GAMMA_RESIDUAL_EV), FERMI_VELOCITY_M_S, FERMI_VELOCITY_M_S),
        name="nonlocal:au-impurity"),
    "drude:ni": lambda: Drude(DrudeParams(NICKEL_OMEGA_P_EV, NICKEL_GAMMA_EV), mu0=NICKEL_MU0, name="drude:ni"),
    "plasma:ni": lambda: Plasma(NICKEL_OMEGA_P_EV, mu0=NICKEL_MU0, name="plasma:ni"),
    "ideal-dielectric:silica": lambda: IdealDielectric(silica_oscillators(), name="ideal-dielectric:silica"),
    "real-dielectric:silica": lambda: RealDielectric(
        silica_oscillators(),
        ConductivityLaw(SILICA_SIGMA0_INVS, SILICA_GAP_EV, T_ROOM_K, ConductivityMode.ACTIVATED),
        name="real-dielectric:silica"),
}


def builtin_names() -> List[str]:
    return sorted(BUILTIN)


def _apply_overrides(model: MaterialModel, overrides: str) -> MaterialModel:
    for item in filter(None, (part.strip() for part in overrides.split(","))):
        if "=" not in item:
            raise ConfigurationError(f"override '{item}' must look like key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        try:
            model = model.with_param(key, float(value))
        except ValueError:
            raise ConfigurationError(f"override value '{value}' is not a number") from None
    return model


def resolve_material(spec: str, custom: Optional[Mapping[str, MaterialModel]] = None) -> MaterialModel:
    """Looks a material up by name in user definitions, then the built-in catalog."""
    base, _, overrides = spec.partition("@")
    base = base.strip()
    if base.startswith("cache:"):
        from .optics import load_cache
        model = load_cache(base[len("cache:"):])
    elif custom and base in custom:
        model = custom[base]
    elif base in BUILTIN:
        model = BUILTIN[base]()
    else:
        raise ConfigurationError(f"unknown material '{base}'; known: {', '.join(builtin_names())}")
    return _apply_overrides(model, overrides) if overrides else model


def _float(section: configparser.SectionProxy, key: str, default: Optional[float] = None) -> Optional[float]:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"[{section.name}] {key} = {raw!r} is not a number") from None


def _required(section: configparser.SectionProxy, key: str) -> float:
    value = _float(section, key)
    if value is None:
        raise ConfigurationError(f"[{section.name}] missing '{key}'")
    return value


def _oscillators(section: configparser.SectionProxy) -> OscillatorSet:
    """`oscillators = g:omega:gamma; g:omega:gamma` with g in eV^2."""
    raw = section.get("oscillators", "")
    triples = []
    for chunk in filter(None, (c.strip() for c in raw.split(";"))):
        parts = chunk.split(":")
        if len(parts) not in (2, 3):
            raise ConfigurationError(f"[{section.name}] oscillator '{chunk}' must be g:omega[:gamma]")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise ConfigurationError(f"[{section.name}] oscillator '{chunk}' is not numeric") from None
        triples.append((values[0], values[1], values[2] if len(values) == 3 else 0.0))
    return OscillatorSet.from_triples(triples)


def _drude_params(section: configparser.SectionProxy) -> DrudeParams:
    return DrudeParams(_required(section, "omega_p_ev"), _float(section, "gamma_ev", 0.0),
                       _float(section, "gamma_residual_ev", 0.0), _float(section, "t_room_k", T_ROOM_K))


def _section_to_model(section: configparser.SectionProxy, base_dir: Path) -> MaterialModel:
    variant = section.get("variant", "").strip().replace("-", "_")
    name = section.name
    mu0 = _float(section, "mu0", 1.0)
    kappa = _float(section, "kappa_ev")

    if variant == "ideal_metal":
        return IdealMetal(name)
    if variant == "drude":
        return Drude(_drude_params(section), mu0, name)
    if variant == "plasma":
        return Plasma(_required(section, "omega_p_ev"), mu0, name)
    if variant == "generalized_plasma":
        return GeneralizedPlasma(_required(section, "omega_p_ev"), _oscillators(section), mu0, name)
    if variant == "ideal_dielectric":
        return IdealDielectric(_oscillators(section), mu0, kappa, name)
    if variant == "real_dielectric":
        try:
            mode = ConductivityMode(section.get("conductivity_mode", "activated").strip())
        except ValueError:
            raise ConfigurationError(f"[{name}] conductivity_mode must be 'activated' or 'constant'") from None
        law = ConductivityLaw(_required(section, "sigma0_invs"), _float(section, "delta_gap_ev", 0.0),
                              _float(section, "t_ref_k", T_ROOM_K), mode)
        return RealDielectric(_oscillators(section), law, mu0, kappa, name)
    if variant == "nonlocal_drude":
        params = NonlocalDrudeParams(_drude_params(section), _float(section, "v_t_ms", FERMI_VELOCITY_M_S),
                                     _float(section, "v_l_ms", FERMI_VELOCITY_M_S))
        return NonlocalDrude(params, mu0, name)
    if variant == "tabulated":
        from .optics import load_cache
        cache = section.get("cache_path")
        if not cache:
            raise ConfigurationError(f"[{name}] tabulated material needs cache_path")
        path = Path(cache)
        model: Tabulated = load_cache(path if path.is_absolute() else base_dir / path, name=name)
        return model.with_param("mu0", mu0) if mu0 != 1.0 else model
    raise ConfigurationError(f"[{name}] unknown variant '{section.get('variant')}'")


def load_materials_file(path) -> Dict[str, MaterialModel]:
    """One material per INI section; numeric keys carry their unit as a suffix."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as e:
        raise ConfigurationError(f"cannot read materials file {path}: {e}") from e
    models = {name: _section_to_model(parser[name], path.parent) for name in parser.sections()}
    logger.info("Loaded %d materials from %s", len(models), path)
    return models
