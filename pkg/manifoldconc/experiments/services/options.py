"""
Option resolution for the experiment runner.

Values are layered: built-in defaults, then Django settings (which read the
environment), then a flat JSON config file, then explicit command-line flags.
"""
import json
import logging
import math
from dataclasses import fields
from pathlib import Path

import numpy as np

from django.conf import settings

from core.constants import DEFAULT_CHUNK_SIZE, DEFAULT_PREPASS_SAMPLES, OPNORM_MAX_ITER, OPNORM_RESTARTS
from core.exceptions import ConfigError
from montecarlo.services import ExperimentConfig

logger = logging.getLogger(__name__)

BUILTIN_DEFAULTS = {
    'threads': None,
    'chunk_size': DEFAULT_CHUNK_SIZE,
    'prepass_samples': DEFAULT_PREPASS_SAMPLES,
    'opnorm_restarts': OPNORM_RESTARTS,
    'opnorm_max_iter': OPNORM_MAX_ITER,
    'out': 'runs',
}

# option name -> Django setting
SETTINGS_OPTIONS = {
    'threads': 'MANIFOLDCONC_THREADS',
    'chunk_size': 'MANIFOLDCONC_CHUNK_SIZE',
    'prepass_samples': 'MANIFOLDCONC_PREPASS_SAMPLES',
    'opnorm_restarts': 'MANIFOLDCONC_OPNORM_RESTARTS',
    'opnorm_max_iter': 'MANIFOLDCONC_OPNORM_MAX_ITER',
    'out': 'MANIFOLDCONC_OUTPUT_DIR',
}

REQUIRED_EXPERIMENT_OPTIONS = ('n', 'd', 'samples', 'seed')

EXPERIMENT_FIELDS = frozenset(field.name for field in fields(ExperimentConfig))


def parse_grid(text):
    """Expand ``start:stop:step`` into an increasing tuple, stop included when on the lattice."""
    if isinstance(text, (list, tuple)):
        return tuple(float(t) for t in text)
    parts = str(text).split(':')
    if len(parts) != 3:
        raise ConfigError(f'grid must look like start:stop:step, got {text!r}')
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError as exc:
        raise ConfigError(f'non-numeric grid {text!r}') from exc
    if not all(math.isfinite(value) for value in (start, stop, step)):
        raise ConfigError(f'grid bounds must be finite, got {text!r}')
    if step <= 0 or stop < start:
        raise ConfigError(f'grid needs step > 0 and stop >= start, got {text!r}')
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(t) for t in np.round(start + step * np.arange(count), 12))


def load_config_file(path):
    """A flat JSON object; nested values other than lists are rejected."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f'config file not found: {path}')
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f'config file {path} is not valid JSON: {exc}') from exc
    if not isinstance(data, dict):
        raise ConfigError(f'config file {path} must hold a JSON object')
    nested = sorted(key for key, value in data.items() if isinstance(value, dict))
    if nested:
        raise ConfigError(f'config file {path} must be flat; nested keys: {nested}')
    return {key.replace('-', '_'): value for key, value in data.items()}


def settings_layer():
    layer = {}
    for option, name in SETTINGS_OPTIONS.items():
        value = getattr(settings, name, None)
        if value is not None:
            layer[option] = value
    return layer


def resolve(flags, known, defaults=None, config_path=None):
    """Merge the four layers for the option names in ``known``.

    ``flags`` holds parsed command-line values, None meaning absent. Unknown
    keys in the config file are an error.
    """
    known = set(known)
    resolved = {key: None for key in known}
    for layer in (BUILTIN_DEFAULTS, defaults or {}, settings_layer()):
        resolved.update({key: value for key, value in layer.items() if key in known})
    if config_path is not None:
        from_file = load_config_file(config_path)
        unknown = sorted(set(from_file) - known)
        if unknown:
            raise ConfigError(f'unknown option(s) in {config_path}: {unknown}')
        resolved.update(from_file)
        logger.debug('Loaded %d option(s) from %s', len(from_file), config_path)
    resolved.update({key: value for key, value in flags.items() if key in known and value is not None})
    if resolved.get('grid') is not None:
        resolved['grid'] = parse_grid(resolved['grid'])
    return resolved


def require(values, names):
    missing = [name for name in names if values.get(name) is None]
    if missing:
        raise ConfigError(f"missing required option(s): {', '.join('--' + name.replace('_', '-') for name in missing)}")


def experiment_config(values):
    """The ExperimentConfig slice of resolved options; ExperimentConfig validates it."""
    require(values, REQUIRED_EXPERIMENT_OPTIONS)
    try:
        return ExperimentConfig(**{
            key: value for key, value in values.items() if key in EXPERIMENT_FIELDS and value is not None
        })
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
