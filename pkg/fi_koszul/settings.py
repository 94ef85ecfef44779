"""Standalone settings for the ``fi-koszul`` command line."""
import os

SECRET_KEY = os.environ.get("FI_KOSZUL_SECRET_KEY", "fi-koszul-has-no-secrets")
DEBUG = False
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "fi_koszul.FIKoszulApp",
]

DATABASES = {}
USE_I18N = True
USE_TZ = True
LANGUAGE_CODE = "en"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "APP_DIRS": True,
        "OPTIONS": {"autoescape": False},
    },
]

FI_KOSZUL_WINDOW = 6
FI_KOSZUL_AMAX = 3
FI_KOSZUL_DIMENSION_CEILING = 4000
FI_KOSZUL_WORKERS = int(os.environ.get("FI_KOSZUL_WORKERS", "1"))
FI_KOSZUL_COVER_STRATEGY = "orbit"

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "fi_koszul": {
            "handlers": ["console"],
            "level": os.environ.get("FI_KOSZUL_LOG_LEVEL", "WARNING"),
        },
    },
}
