from django.core.management.base import CommandError

from ...ficore import MODULE_RELATIONS, Relation
from ...selftest import first_failure, run_selftest
from ._common import MISMATCH, FIKoszulCommand, translate_errors


class Command(FIKoszulCommand):
    help = "Run the acceptance suite; exit 1 naming the first failing criterion"
    window_options = ("field", "workers", "cover", "sign_convention")

    def add_arguments(self, parser):
        self.add_window_arguments(parser)
        parser.add_argument(
            "--skip-relation", action="append", default=[], dest="skip_relation",
            choices=sorted(r.value for r in MODULE_RELATIONS),
            help="Leave this relation out of module validation (repeatable)",
        )
        parser.add_argument("--quick", action="store_true", help="Smaller windows and corpus")
        parser.add_argument("--seed", type=int, default=0, help="Seed for random injections and shuffles")

    @translate_errors
    def handle(self, *args, **options):
        window = self.window(options)
        skipped = {Relation(value) for value in options["skip_relation"]}
        kwargs = dict(
            convention=window["sign_convention"],
            relations=[r for r in MODULE_RELATIONS if r not in skipped],
            quick=options["quick"],
            strategy=window["cover"],
            workers=window["workers"],
            seed=options["seed"],
        )
        if window["field"] is not None:
            kwargs["field"] = window["field"]
        results = run_selftest(**kwargs)
        for result in results:
            self.stdout.write(str(result))
        failure = first_failure(results)
        if failure is not None:
            raise CommandError("Criterion {} failed: {}".format(failure.number, failure.name), returncode=MISMATCH)
