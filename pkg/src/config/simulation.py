import json
from pathlib import Path
from typing import Iterable

from schemas.simulation import SimConfig
from config.settings import get_settings


class UnknownConfigKeyError(ValueError):
    def __init__(self, key: str) -> None:
        super().__init__(f"Unknown config key '{key}'")
        self.key = key


class ConfigValueError(ValueError):
    def __init__(self, key: str, raw: str) -> None:
        super().__init__(f"Malformed value for '{key}': {raw!r}")
        self.key = key


def load_sim_config(path: str | Path | None = None) -> SimConfig:
    """
    Read a SimConfig JSON document; the shipped defaults are used when no path is given.

    :raises pydantic.ValidationError: if the document violates a SimConfig invariant.
    """
    if path is None:
        path = get_settings().PATH_TO_DEFAULT_CONFIG
    return SimConfig.model_validate_json(Path(path).read_text())


def _coerce(key: str, raw: str) -> object:
    field = SimConfig.model_fields[key]
    if field.annotation is str or key == "color_choice":
        return raw
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        raise ConfigValueError(key, raw) from None


def apply_overrides(config: SimConfig, overrides: Iterable[str]) -> SimConfig:
    """
    Apply `key=value` overrides and re-validate the merged config.

    :raises UnknownConfigKeyError: if a key is not a SimConfig field.
    :raises ConfigValueError: if a value is not a JSON scalar.
    :raises pydantic.ValidationError: if the merged config breaks an invariant.
    """
    data = config.model_dump()
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigValueError(key, item)
        if key not in SimConfig.model_fields:
            raise UnknownConfigKeyError(key)
        data[key] = _coerce(key, raw.strip())
    return SimConfig.model_validate(data)


def with_updates(config: SimConfig, **updates: object) -> SimConfig:
    """Return a validated copy; unlike `model_copy(update=...)` invariants are re-checked."""
    return SimConfig.model_validate({**config.model_dump(), **updates})
