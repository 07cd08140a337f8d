"""Pipeline configuration: flat key=value file, env overrides, CLI flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

ENV_PREFIX = "CLAIMCRED_"

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


@dataclass
class PipelineConfig:
    pages_glob: str = "fixtures/pages/*.json"
    cache_dir: str = "fixtures/cache"
    offline: bool = False
    rate_ms: int = 1000
    parallel: int = 4
    lexicon_path: str | None = None
    lo: float = -0.6
    hi: float = 0.6
    output_dir: str = "out"

    def validate(self):
        if not self.lo < self.hi:
            raise ConfigError("thresholds need lo < hi (got lo=%r hi=%r)" % (self.lo, self.hi))
        if self.parallel < 1:
            raise ConfigError("parallel must be >= 1 (got %r)" % self.parallel)
        if self.rate_ms < 0:
            raise ConfigError("rate_ms must be >= 0 (got %r)" % self.rate_ms)
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def parse_bool(raw, key):
    value = raw.strip().lower()
    if value in _BOOL_TRUE:
        return True
    if value in _BOOL_FALSE:
        return False
    raise ConfigError("%s: %r is not a boolean" % (key, raw))


def _coerce(key, raw):
    if key in ("offline",):
        return parse_bool(raw, key)
    if key in ("rate_ms", "parallel"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError("%s: %r is not an integer" % (key, raw)) from None
    if key in ("lo", "hi"):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError("%s: %r is not a number" % (key, raw)) from None
    return raw


def load_config_file(path):
    """Flat UTF-8 "key = value" lines; '#' comments; unknown keys rejected."""
    values = {}
    text = Path(path).read_text("utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected key = value" % (path, lineno))
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
        values[key] = _coerce(key, raw.strip())
    return values


def env_overrides(environ=None):
    if environ is None:
        environ = os.environ
    values = {}
    for key in _FIELD_TYPES:
        raw = environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = _coerce(key, raw)
    return values


def resolve_config(file_values=None, env_values=None, flag_values=None):
    """Defaults < config file < environment < CLI flags."""
    merged = {}
    for layer in (file_values, env_values, flag_values):
        if layer:
            merged.update({k: v for k, v in layer.items() if v is not None})
    unknown = set(merged) - set(_FIELD_TYPES)
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    return PipelineConfig(**merged).validate()
