"""
Django settings for the starproof project.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv()

# Only management commands run; the key never signs anything user-facing.
SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "django-insecure-starproof-local-only")

DEBUG = os.environ.get("DJANGO_DEBUG", "False").lower() == "true"

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'rest_framework',
    'charts',
]

# No persistent state: charts, witnesses and certificates live in files.
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Star-expression pipeline configuration
STAREXPR = {
    # Per-vertex cap on entry-set subsets tried by loop elimination (2**12)
    'SUBSET_SEARCH_LIMIT': int(os.environ.get("STAREXPR_SUBSET_SEARCH_LIMIT", 4096)),
    # Upper bound on distinct runs enumerated by elimination_runs
    'ELIMINATION_RUN_LIMIT': int(os.environ.get("STAREXPR_ELIMINATION_RUN_LIMIT", 64)),
    'DEFAULT_SEED': int(os.environ.get("STAREXPR_SEED", 0)),
    'SUITE_CASES': int(os.environ.get("STAREXPR_SUITE_CASES", 500)),
    'PROOF_CASES': int(os.environ.get("STAREXPR_PROOF_CASES", 200)),
    'MAX_SIZE': int(os.environ.get("STAREXPR_MAX_SIZE", 12)),
    'ALPHABET_SIZE': int(os.environ.get("STAREXPR_ALPHABET_SIZE", 3)),
    'COLLAPSE_STRATEGY': os.environ.get("STAREXPR_COLLAPSE_STRATEGY", "canonical"),
}

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'charts': {
            'handlers': ['console'],
            'level': os.environ.get("STAREXPR_LOG_LEVEL", "WARNING").upper(),
            'propagate': False,
        },
    },
}
