from django.core.management.base import CommandError

from ...fihom import compare_koszul_with_tor
from ...limits import ceiling
from ...reports import render_comparison
from ...serialization import load_table_file
from ._common import MISMATCH, FIKoszulCommand, translate_errors


class Command(FIKoszulCommand):
    help = "Compare Koszul homology with FI-homology cell by cell; exit 1 on any difference"
    window_options = ("amax", "nmax", "ceiling", "workers", "cover", "sign_convention")

    def add_arguments(self, parser):
        parser.add_argument("path", help="Module file")
        self.add_window_arguments(parser)
        parser.add_argument("--expected", help="Table file that the Koszul table must also match")
        self.add_output_arguments(parser, formats=("text", "json"))

    @translate_errors
    def handle(self, *args, **options):
        window = self.window(options)
        V = self.load(options["path"])
        expected = load_table_file(options["expected"]) if options.get("expected") else None
        with ceiling(window["ceiling"]):
            report = compare_koszul_with_tor(
                V,
                a_max=window["amax"],
                n_max=window["nmax"],
                strategy=window["cover"],
                convention=window["sign_convention"],
                workers=window["workers"],
            )
        expected_mismatches = report.koszul.differences(expected) if expected is not None else None
        self.emit(render_comparison(report, self.output_format(options), expected_mismatches), options)
        if not report.ok:
            raise CommandError("Koszul and FI-homology tables differ in {} cells".format(len(report.mismatches)),
                               returncode=MISMATCH)
        if expected_mismatches:
            raise CommandError("Expected table differs in {} cells".format(len(expected_mismatches)),
                               returncode=MISMATCH)
