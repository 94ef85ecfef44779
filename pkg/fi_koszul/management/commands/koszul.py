from ...koszul import koszul_homology_table
from ...reports import render_table
from ._common import FIKoszulCommand, translate_errors


class Command(FIKoszulCommand):
    help = "Tabulate the homology of the Koszul complex of a module"
    window_options = ("amax", "nmax", "workers", "sign_convention")

    def add_arguments(self, parser):
        parser.add_argument("path", help="Module file")
        self.add_window_arguments(parser)
        self.add_output_arguments(parser)

    @translate_errors
    def handle(self, *args, **options):
        window = self.window(options)
        V = self.load(options["path"])
        table = koszul_homology_table(
            V,
            n_max=window["nmax"],
            a_max=window["amax"],
            convention=window["sign_convention"],
            workers=window["workers"],
        )
        self.emit(render_table(table, self.output_format(options)), options)
