from django.core.management.base import CommandError

from ...fihom import Verdict, regularity_report
from ...ficore import extend_window
from ...reports import render_regularity
from ._common import MISMATCH, FIKoszulCommand, translate_errors


class Command(FIKoszulCommand):
    help = "Compare the regularity of a torsion module with its degree over the window"
    window_options = ("amax", "workers", "sign_convention")

    def add_arguments(self, parser):
        parser.add_argument("path", help="Module file")
        self.add_window_arguments(parser)
        parser.add_argument("--N", type=int, dest="N",
                            help="Pad the window with zero degrees up to N (top stored degree must vanish)")
        self.add_output_arguments(parser)

    @translate_errors
    def handle(self, *args, **options):
        window = self.window(options)
        V = self.load(options["path"])
        if options.get("N") is not None:
            V = extend_window(V, options["N"])
        report = regularity_report(V, window["amax"], window["sign_convention"], window["workers"])
        self.emit(render_regularity(report, self.output_format(options)), options)
        if report.verdict is Verdict.BOUND_VIOLATED:
            raise CommandError("deg H_a exceeds deg V + a for a in {}".format(report.violations),
                               returncode=MISMATCH)
