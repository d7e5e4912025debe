"""
Django settings for the yangbaxter project.
"""

from pathlib import Path
import environ
import os

env = environ.Env(
    DJANGO_DEBUG=(bool, False),
    YBE_FLOAT_TOLERANCE=(float, 1e-12),
    YBE_FLOAT_DROP_THRESHOLD=(float, 1e-300),
    YBE_BRAID_STATE_LIMIT=(int, 4096),
    YBE_WORKERS=(int, 1),
    YBE_WITNESS_TRIALS=(int, 64),
    YBE_LOG_LEVEL=(str, 'WARNING'),
)

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Take environment variables from .env file
environ.Env.read_env(os.path.join(BASE_DIR, '.env'))

# No web surface; the key only satisfies Django's startup checks.
SECRET_KEY = env('DJANGO_SECRET_KEY', default='django-insecure-yangbaxter-development-key')

DEBUG = env('DJANGO_DEBUG')

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'yangbaxter',
]

# Nothing is persisted
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging goes to stderr; stdout carries the JSON reports
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'yangbaxter': {
            'handlers': ['console'],
            'level': env('YBE_LOG_LEVEL'),
            'propagate': False,
        },
    },
}

# Yang-Baxter engine
YBE_FLOAT_TOLERANCE = env('YBE_FLOAT_TOLERANCE')
YBE_FLOAT_DROP_THRESHOLD = env('YBE_FLOAT_DROP_THRESHOLD')
YBE_BRAID_STATE_LIMIT = env('YBE_BRAID_STATE_LIMIT')
YBE_WORKERS = env('YBE_WORKERS')
YBE_WITNESS_TRIALS = env('YBE_WITNESS_TRIALS')
