import csv
import configparser
import json
import os
import sys

import daiquiri
import numpy as np

from .exceptions import ConfigError, InvalidExponentError

svie_dir = os.path.expanduser("~") + "/.svie"
config_filename = svie_dir + "/config"

profile = 'DEFAULT'
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = 'INFO'
DEFAULT_LOG_FILE = ''

# T = 1 with a 2^-8 reference grid and 500 paths
DEFAULTS = {
    'problem': 'paper-sin-cos',
    'alpha': 0.3,
    'beta': 0.1,
    'x0': 1.0,
    'levels': [16, 32, 64, 128],
    'ref': 256,
    'paths': 500,
    'seed': 20240601,
    'scheme': 'rmilstein',
    'compare': [],
    'metric': 'terminal',
    'n': 16,
    'refine': 1,
    'workers': DEFAULT_WORKERS,
    'out': None,
    'plot': None,
}
RUN_KEYS = tuple(sorted(DEFAULTS))


def set_config(profile=profile, filename=config_filename, workers=DEFAULT_WORKERS,
               log_level=DEFAULT_LOG_LEVEL, log_file=DEFAULT_LOG_FILE):
    '''Create the profile config file, other profiles are kept'''
    config = configparser.ConfigParser()
    if os.path.exists(filename):
        config.read(filename)

    config[profile] = {
        'workers': str(workers),
        'log_level': log_level,
        'log_file': log_file,
    }

    os.makedirs(os.path.dirname(filename) or '.', exist_ok=True)

    with open(filename, 'w') as configfile:
        config.write(configfile)
    return 'Config file set'


def get_config(profile=profile, filename=config_filename):
    '''Obtain profile settings from file, defaults when file or profile is missing'''
    config = configparser.ConfigParser()
    svieconfig = {
        'workers': DEFAULT_WORKERS,
        'log_level': DEFAULT_LOG_LEVEL,
        'log_file': DEFAULT_LOG_FILE,
    }
    if filename and os.path.exists(filename):
        config.read(filename)

    # DEFAULT is always present in a ConfigParser
    if profile in config:
        section = config[profile]
        svieconfig = {
            'workers': section.getint('workers', DEFAULT_WORKERS),
            'log_level': section.get('log_level', DEFAULT_LOG_LEVEL),
            'log_file': section.get('log_file', DEFAULT_LOG_FILE),
        }

    return svieconfig


def setup_logging(level=None, logfile=None, profile_settings=None):
    '''Stream logs to stderr, and as JSON lines to ``logfile`` when given'''
    profile_settings = profile_settings or {}
    level = level or os.environ.get("LOGLEVEL") or profile_settings.get('log_level') or DEFAULT_LOG_LEVEL
    logfile = logfile or profile_settings.get('log_file')

    outputs = [daiquiri.output.Stream(sys.stderr)]
    if logfile:
        outputs.append(daiquiri.output.File(logfile, formatter=daiquiri.formatter.JSON_FORMATTER))

    daiquiri.setup(level=level.upper(), outputs=outputs)


def _parse_levels(value):
    if isinstance(value, str):
        value = [part for part in value.split(',') if part.strip()]
    try:
        levels = [int(level) for level in value]
    except (TypeError, ValueError):
        raise ConfigError(f'levels must be a list of integers, got {value!r}', key='levels') from None
    if not levels or min(levels) < 1:
        raise ConfigError('levels must be positive integers', key='levels')
    return levels


def _parse_names(value, key):
    if isinstance(value, str):
        return [part.strip() for part in value.split(',') if part.strip()]
    if isinstance(value, (list, tuple)):
        return [str(part) for part in value]
    raise ConfigError(f'{key} must be a list or a comma separated string', key=key)


def _number(settings, name, kind):
    '''settings[name] as ``kind``; null, booleans and non-numeric strings are config errors'''
    value = settings[name]
    if value is None or isinstance(value, bool):
        raise ConfigError(f'{name} must be a number, got {value!r}', key=name)
    try:
        number = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f'{name} must be a number, got {value!r}', key=name) from None
    if kind is int and isinstance(value, float) and not value.is_integer():
        raise ConfigError(f'{name} must be an integer, got {value!r}', key=name)
    return number


def _check_settings(settings):
    for name in ('alpha', 'beta'):
        settings[name] = _number(settings, name, float)
        if not 0.0 < settings[name] < 0.5:
            raise InvalidExponentError(f'{name} must lie in (0, 0.5)')
    settings['x0'] = _number(settings, 'x0', float)
    settings['levels'] = _parse_levels(settings['levels'])
    settings['compare'] = _parse_names(settings['compare'], 'compare')
    for name in ('ref', 'n', 'refine', 'workers'):
        settings[name] = _number(settings, name, int)
        if settings[name] < 1:
            raise ConfigError(f'{name} must be >= 1', key=name)
    settings['paths'] = _number(settings, 'paths', int)
    if settings['paths'] < 2:
        raise ConfigError('paths must be >= 2', key='paths')
    settings['seed'] = _number(settings, 'seed', int)
    if not 0 <= settings['seed'] <= 2 ** 64 - 1:
        raise ConfigError('seed must be an unsigned 64-bit integer', key='seed')
    for name in ('problem', 'scheme', 'metric'):
        if not isinstance(settings[name], str):
            raise ConfigError(f'{name} must be a name, got {settings[name]!r}', key=name)
    if settings['metric'] not in ('terminal', 'max'):
        raise ConfigError(f'metric must be terminal or max, got {settings["metric"]!r}', key='metric')
    return settings


def read_run_config(path):
    '''JSON run config as a dict; unknown keys are rejected'''
    try:
        with open(path) as handle:
            document = json.load(handle)
    except json.JSONDecodeError as error:
        raise ConfigError(f'malformed JSON in {path}: {error}') from None
    if not isinstance(document, dict):
        raise ConfigError(f'{path} must hold a JSON object')
    for key in document:
        if key not in DEFAULTS:
            raise ConfigError(f'unknown config key {key!r}', key=key)
    return document


def load_config(path=None, overrides=None, profile_settings=None):
    '''Resolve run settings

    Precedence, lowest first: defaults, profile, JSON file at ``path``,
    ``overrides`` (command-line flags, None meaning "not given").
    '''
    settings = dict(DEFAULTS)
    if profile_settings:
        settings['workers'] = profile_settings.get('workers', settings['workers'])
    if path:
        settings.update(read_run_config(path))
    for key, value in (overrides or {}).items():
        if key not in DEFAULTS:
            raise ConfigError(f'unknown config key {key!r}', key=key)
        if value is not None:
            settings[key] = value
    return _check_settings(settings)


def dump_settings(settings):
    return json.dumps(settings, sort_keys=True)


def format_decimal(value, digits=10):
    '''Decimal (never scientific) notation with ``digits`` significant digits'''
    return np.format_float_positional(float(value), precision=digits, unique=False, fractional=False, trim='-')


def write_csv(path, header, rows):
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
