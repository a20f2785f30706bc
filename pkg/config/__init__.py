import logging.config

import django
from django.conf import settings as django_settings

from . import settings


def configure_logging(level=None):
    """Apply settings.LOGGING. Only entry points call this; library modules never do."""
    config = settings.build_logging(level or settings.LOG_LEVEL)
    logging.config.dictConfig(config)


def configure_django():
    """Configure Django from settings.DJANGO once, so serializers can validate documents."""
    if not django_settings.configured:
        django_settings.configure(**settings.DJANGO)
        django.setup()
