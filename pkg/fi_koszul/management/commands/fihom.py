from ...fihom import tor_table
from ...limits import ceiling
from ...reports import render_table
from ._common import FIKoszulCommand, translate_errors


class Command(FIKoszulCommand):
    help = "Tabulate FI-homology of a module through a free resolution"
    window_options = ("amax", "nmax", "ceiling", "workers", "cover")

    def add_arguments(self, parser):
        parser.add_argument("path", help="Module file")
        self.add_window_arguments(parser)
        parser.add_argument("--seed", type=int, default=None, help="Shuffle cover generators with this seed")
        self.add_output_arguments(parser)

    @translate_errors
    def handle(self, *args, **options):
        window = self.window(options)
        V = self.load(options["path"])
        with ceiling(window["ceiling"]):
            table = tor_table(
                V,
                a_max=window["amax"],
                n_max=window["nmax"],
                strategy=window["cover"],
                shuffle_seed=options["seed"],
                workers=window["workers"],
            )
        self.emit(render_table(table, self.output_format(options)), options)
