"""
Base settings for the manifoldconc project.
All shared settings, Monte Carlo defaults and logging configuration.
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'change-me-in-production')

DEBUG = False

ALLOWED_HOSTS = []

# Application definition
LOCAL_APPS = [
    'core',
    'matcalc',
    'stiefel',
    'grassmann',
    'functionals',
    'bounds',
    'montecarlo',
    'experiments',
]

INSTALLED_APPS = [*LOCAL_APPS]

# No models anywhere; tests run on SimpleTestCase.
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = os.environ.get('TZ', 'UTC')
USE_I18N = False
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# ─── Monte Carlo Engine ──────────────────────────────────────────────────────
# Empty means "all available cores"; --threads overrides.
MANIFOLDCONC_THREADS = int(os.environ['MANIFOLDCONC_THREADS']) if os.environ.get('MANIFOLDCONC_THREADS') else None
MANIFOLDCONC_CHUNK_SIZE = int(os.environ.get('MANIFOLDCONC_CHUNK_SIZE', '4096'))
MANIFOLDCONC_PREPASS_SAMPLES = int(os.environ.get('MANIFOLDCONC_PREPASS_SAMPLES', '2000'))

# ─── Tensor Operator Norm ────────────────────────────────────────────────────
MANIFOLDCONC_OPNORM_RESTARTS = int(os.environ.get('MANIFOLDCONC_OPNORM_RESTARTS', '20'))
MANIFOLDCONC_OPNORM_MAX_ITER = int(os.environ.get('MANIFOLDCONC_OPNORM_MAX_ITER', '200'))

# ─── Outputs ─────────────────────────────────────────────────────────────────
MANIFOLDCONC_OUTPUT_DIR = os.environ.get('MANIFOLDCONC_OUTPUT_DIR', 'runs')

# ─── Logging ─────────────────────────────────────────────────────────────────
MANIFOLDCONC_LOG_LEVEL = os.environ.get('MANIFOLDCONC_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        **{
            app: {
                'handlers': ['console'],
                'level': MANIFOLDCONC_LOG_LEVEL,
                'propagate': False,
            }
            for app in LOCAL_APPS
        },
    },
}
