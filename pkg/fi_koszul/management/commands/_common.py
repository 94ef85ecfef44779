import logging
from functools import wraps

from django.core.management.base import BaseCommand, CommandError

from ...exceptions import (
    BuilderSyntaxError,
    FIKoszulError,
    InputError,
    ModuleFormatError,
    ModuleValidationError,
    NonTorsionError,
    ResourceCeilingExceeded,
    WindowTooSmallError,
)
from ...forms import WindowForm
from ...reports import OutputFormat
from ...serialization import load_module_file

logger = logging.getLogger(__name__)

MISMATCH = 1
USAGE = 2

USAGE_ERRORS = (
    InputError,
    ModuleFormatError,
    BuilderSyntaxError,
    FIKoszulError,
    WindowTooSmallError,
    NonTorsionError,
    ResourceCeilingExceeded,
    OSError,
)


def translate_errors(wrapped):
    """Turn library errors into :class:`CommandError` with the documented exit codes."""
    @wraps(wrapped)
    def f(*args, **kwargs):
        try:
            return wrapped(*args, **kwargs)
        except ModuleValidationError as e:
            raise CommandError(str(e), returncode=MISMATCH) from e
        except USAGE_ERRORS as e:
            raise CommandError(str(e), returncode=USAGE) from e
        except FIKoszulError as e:
            logger.error("%s: %s", type(e).__name__, e)
            raise CommandError(str(e), returncode=MISMATCH) from e

    return f


class FIKoszulCommand(BaseCommand):
    requires_system_checks = []
    window_options = ("amax", "nmax", "ceiling", "workers")

    def add_window_arguments(self, parser):
        if "N" in self.window_options:
            parser.add_argument("--N", type=int, dest="N", help="Truncation bound N")
        if "field" in self.window_options:
            parser.add_argument("--field", help="Q or Fp:<p>")
        if "amax" in self.window_options:
            parser.add_argument("--amax", type=int, help="Largest homological degree")
        if "nmax" in self.window_options:
            parser.add_argument("--nmax", type=int, help="Largest evaluation degree")
        if "ceiling" in self.window_options:
            parser.add_argument("--ceiling", type=int, help="Largest allowed dimension of a resolution term")
        if "workers" in self.window_options:
            parser.add_argument("--workers", type=int, help="Threads for per-degree evaluation")
        if "cover" in self.window_options:
            parser.add_argument("--cover", choices=["basis", "orbit"], help="Free cover strategy")
        if "sign_convention" in self.window_options:
            parser.add_argument("--sign-convention", dest="sign_convention", choices=["paper", "shifted"])

    def add_output_arguments(self, parser, formats=("text", "json", "csv")):
        parser.add_argument("--format", choices=formats, default="text", dest="output_format")
        parser.add_argument("--out", help="Write to this file instead of stdout")

    def window(self, options) -> dict:
        data = {name: options.get(name) for name in WindowForm.base_fields if options.get(name) is not None}
        form = WindowForm(data)
        if not form.is_valid():
            raise CommandError(form.error_text(), returncode=USAGE)
        return form.cleaned_data

    def load(self, path: str):
        V = load_module_file(path)
        logger.debug("Loaded %r from %s", V, path)
        return V

    def emit(self, text: str, options):
        if options.get("out"):
            with open(options["out"], "w", encoding="utf-8") as f:
                f.write(text)
        else:
            self.stdout.write(text, ending="")

    def output_format(self, options) -> OutputFormat:
        return OutputFormat(options.get("output_format") or "text")
