"""
Django settings for trialab_project.

trialab is a command-line toolkit: binary functions and their mu-transforms,
alternating dimaps with triality and reductions, and the verification suites
that tie the two together. There is no web surface, so only the pieces of
Django the management commands and the run log need are configured here.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

from pathlib import Path
import os

import dj_database_url

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals (signing); no sessions or auth are served.
SECRET_KEY = os.environ.get('TRIALAB_SECRET_KEY', 'trialab-local-only-not-a-secret')

DEBUG = os.environ.get('TRIALAB_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'binary_functions',
    'dimaps',
    'representations',
    'verification',
]


# Database
# Verification runs are stored here. DATABASE_URL wins when it is set.

DATABASES = {
    'default': dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'trialab.sqlite3'}",
        conn_max_age=600,
    ),
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Numerical tolerances
# TRIALAB_TOL overrides the absolute tolerance used by every comparison
# that is not given an explicit tol.

TRIALAB_TOLERANCE = float(os.environ.get('TRIALAB_TOL', '1e-9'))

# Degeneracy on floating data: relative to the largest entry magnitude.
TRIALAB_DEGENERACY_RTOL = 1e-8

# Distance from 3+2*sqrt(2) at which a minor parameter counts as the pole.
TRIALAB_POLE_TOLERANCE = 1e-12

# Ground sets larger than this are refused (dense vectors of length 2^m).
TRIALAB_MAX_GROUND_SET = 24


# Enumeration and claim checking limits

TRIALAB_ENUMERATION_CAP = int(os.environ.get('TRIALAB_ENUMERATION_CAP', '4'))

TRIALAB_CLAIM2_CAP = 3

# Unit-circle samples used when a representation fails and nu is searched.
TRIALAB_NU_SEARCH_SAMPLES = 720


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
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
        app: {
            'handlers': ['console'],
            'level': os.environ.get('TRIALAB_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        }
        for app in ('binary_functions', 'dimaps', 'representations', 'verification')
    },
}
