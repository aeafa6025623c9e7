import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigurationError

logger = logging.getLogger(__name__)


class MatsubaraConfig(BaseModel):
    """
    Controls one evaluation of the Matsubara sum or of its zero-temperature
    integral. `temperature` is also the temperature at which material
    parameters (relaxation, dc conductivity) are evaluated.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    temperature: float = Field(300.0, ge=0.0, description="K")
    rel_tol: float = Field(1e-9, gt=0.0, le=1e-3)
    y_max_offset: float = Field(50.0, ge=30.0)
    l_max_cap: int = Field(1_000_000, ge=1)
    # Direct summation stops here and the remainder is taken by Euler-Maclaurin; 0 disables
    euler_maclaurin_from: int = Field(4096, ge=0)
    block_size: int = Field(64, ge=1, le=4096)

    def at(self, temperature: float) -> "MatsubaraConfig":
        return self.model_copy(update={"temperature": temperature})

    def tightened(self, rel_tol: float) -> "MatsubaraConfig":
        return self.model_copy(update={"rel_tol": min(self.rel_tol, rel_tol)})


def make_config(**values: Any) -> MatsubaraConfig:
    """Builds a config, turning validation failures into ConfigurationError."""
    try:
        return MatsubaraConfig(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        raise ConfigurationError(str(e)) from e


CONFIG_KEYS = tuple(MatsubaraConfig.model_fields)


def load_config_file(path) -> Dict[str, str]:
    """
    Reads a plain `key = value` file. Blank lines, `#` comments and
    `[section]` headers are skipped; later keys override earlier ones.
    """
    values: Dict[str, str] = {}
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    logger.debug("Loaded %d keys from %s", len(values), path)
    return values


def resolve_config(flags: Mapping[str, Any], file_values: Optional[Mapping[str, Any]] = None,
                   defaults: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Merges settings with precedence flags > config file > defaults. None means unset."""
    merged: Dict[str, Any] = dict(defaults or {})
    for source in (file_values or {}, flags):
        for key, value in source.items():
            if value is not None:
                merged[key] = value
    return merged
