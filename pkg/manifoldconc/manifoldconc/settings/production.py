"""Production settings for long batch runs."""
import os

from .base import *  # noqa: F401, F403
from .base import LOGGING, LOCAL_APPS

DEBUG = False

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'batch-runs-have-no-secrets')

# Batch runs only report warnings (violations, resamples) unless asked otherwise
for _app in LOCAL_APPS:
    LOGGING['loggers'][_app]['level'] = os.environ.get('MANIFOLDCONC_LOG_LEVEL', 'WARNING')
