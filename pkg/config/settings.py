"""
Runtime settings for multmaps.

Everything here is read from the environment (a `.env` file at the repo root
is loaded first), so classification and fuzzing defaults can be pinned per
machine without touching code. See .env.example for the full list.

Env vars:
- MULTMAPS_SEED (default 0)
- MULTMAPS_VERIFY_INVERTIBLE / MULTMAPS_VERIFY_SINGULAR (default 50 / 10)
- MULTMAPS_MAX_CHAR_POWER (default 6)
- MULTMAPS_FUZZ_PAIRS (default 50)
- MULTMAPS_SLWORD_LENGTH (default 20)
- MULTMAPS_LOG_LEVEL (default INFO), MULTMAPS_DEBUG, MULTMAPS_LOG_FILE

DJANGO is the minimal configuration handed to django.conf.settings.configure().
"""
import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')


def _int_env(name, default, minimum=0):
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


DEBUG = os.getenv('MULTMAPS_DEBUG', 'False') == 'True'

SEED = _int_env('MULTMAPS_SEED', 0)

# Fresh samples used to verify a classification result
VERIFY_INVERTIBLE = _int_env('MULTMAPS_VERIFY_INVERTIBLE', 50)
VERIFY_SINGULAR = _int_env('MULTMAPS_VERIFY_SINGULAR', 10)

# Largest |power| tried when fitting a scalar character
MAX_CHAR_POWER = _int_env('MULTMAPS_MAX_CHAR_POWER', 6)

FUZZ_PAIRS = _int_env('MULTMAPS_FUZZ_PAIRS', 50, minimum=1)
SLWORD_LENGTH = _int_env('MULTMAPS_SLWORD_LENGTH', 20)

LOG_LEVEL = os.getenv('MULTMAPS_LOG_LEVEL', 'DEBUG' if DEBUG else 'INFO').upper()
LOG_FILE = os.getenv('MULTMAPS_LOG_FILE')


def build_logging(level=LOG_LEVEL):
    """Logging Configuration, ready for logging.config.dictConfig."""
    handlers = {
        'console': {
            'level': level,
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'simple',
        },
    }
    if LOG_FILE:
        handlers['file'] = {
            'level': 'WARNING',
            'class': 'logging.FileHandler',
            'filename': LOG_FILE,
            'formatter': 'verbose',
        }
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'verbose': {
                'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
                'style': '{',
            },
            'simple': {
                'format': '{levelname} {name} {message}',
                'style': '{',
            },
        },
        'handlers': handlers,
        'loggers': {
            'multmaps': {
                'handlers': list(handlers),
                'level': level,
                'propagate': False,
            },
            'multmaps.classify': {
                'handlers': list(handlers),
                'level': 'DEBUG' if DEBUG else level,
                'propagate': False,
            },
        },
    }


LOGGING = build_logging()

# Django only hosts rest_framework's serializers here: no database, no models.
# LOGGING_CONFIG is None so django.setup() leaves LOGGING above in charge.
DJANGO = {
    'INSTALLED_APPS': ['rest_framework'],
    'USE_I18N': False,
    'USE_TZ': True,
    'LOGGING_CONFIG': None,
}
