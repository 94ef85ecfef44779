from django.core.management.base import CommandError

from ...builders import build
from ...exactla import RATIONALS
from ...ficore import validate_module
from ...serialization import save_module_file
from ._common import MISMATCH, FIKoszulCommand, translate_errors


class Command(FIKoszulCommand):
    help = "Build a module from a builder expression and write it to a module file"
    window_options = ("N", "field")

    def add_arguments(self, parser):
        parser.add_argument("expression", nargs="+", help='e.g. "truncate 1 (free 0)"')
        self.add_window_arguments(parser)
        parser.add_argument("--note", default=None, help="Provenance note stored in the file")
        parser.add_argument("--out", required=True, help="Module file to write")

    @translate_errors
    def handle(self, *args, **options):
        window = self.window(options)
        V = build(options["expression"], window["N"], window["field"] or RATIONALS)
        report = validate_module(V)
        if not report.ok:
            raise CommandError("Refusing to write an invalid module: {}".format(report.first_failure),
                               returncode=MISMATCH)
        V = V.with_note(options["note"] if options["note"] is not None else " ".join(options["expression"]))
        save_module_file(V, options["out"])
        self.stdout.write("Wrote {} to {}".format(V, options["out"]))
