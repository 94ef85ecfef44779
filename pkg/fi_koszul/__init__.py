from django.apps import AppConfig
from django.utils.translation import gettext_lazy

__version__ = "0.1.0"


class FIKoszulApp(AppConfig):
    name = "fi_koszul"
    verbose_name = gettext_lazy("Koszul complexes and FI-homology")

    def ready(self):
        from .templatetags import fi_filters  # NOQA
