"""
Django settings for the fraudscope project.

fraudscope is a batch toolchain: every entry point is a management command,
so there is no URL configuration, middleware or database.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'FRAUDSCOPE_SECRET_KEY',
    'fraudscope-batch-only-key-no-sessions-or-signing',
)

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'core',
    'claims',
    'triggers',
    'gbm',
    'metrics',
    'stats',
    'synthgen',
]


# Database
# Files in, files out: no persistence layer.

DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging
# Data goes to stdout or files; diagnostics go to stderr.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('FRAUDSCOPE_LOG_LEVEL', 'INFO'),
    },
}


# Analytics configuration, read through core.conf.fraud_settings()

FRAUDSCOPE = {
    'POPULATION': int(os.environ.get('FRAUDSCOPE_POPULATION', 3000000)),
    'REGION': os.environ.get('FRAUDSCOPE_REGION', 'study-region'),
    'SEED': int(os.environ.get('FRAUDSCOPE_SEED', 42)),
    'TRAIN_FRACTION': 0.7,
    'GBM': {
        'n_trees': 100,
        'max_depth': 3,
        'learning_rate': 0.1,
        'min_leaf': 20,
    },
    'BASELINE_WINDOW': ('2019-08', '2020-02'),
    'UTILIZATION_K': 2.0,
    'EXCLUDED_STATUSES': (),
    'REPORT_DIGITS': 6,
    'CATEGORICAL_ONE_HOT_LIMIT': 32,
}
