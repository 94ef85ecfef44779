"""Module and table files.

Module files are JSON objects with the keys ``version``, ``field``, ``N``,
``dims``, ``transpositions`` (keyed by n, then i), ``inclusions`` (keyed by
n) and ``note``. Matrices are lists of rows. Rational entries are strings
``"p/q"`` or ``"n"``; prime field entries are integer residues.
"""
import csv
import io
import json
import logging
from typing import Any, Dict

from .exactla import Field, Matrix
from .exceptions import FIKoszulError, ModuleFormatError
from .fihom import ComparisonReport, RegularityReport
from .ficore import TruncatedFIModule
from .koszul import HomologyTable, Provenance

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class unix_csv(csv.excel):
    lineterminator = "\n"


def _matrix_to_json(m: Matrix):
    return [[m.field.format_scalar(v) for v in row] for row in m.to_rows()]


def _matrix_from_json(data, rows: int, cols: int, field: Field, what: str) -> Matrix:
    if not isinstance(data, list) or len(data) != rows or any(
            not isinstance(row, list) or len(row) != cols for row in data):
        raise ModuleFormatError("{} must be a {}x{} list of rows".format(what, rows, cols))
    try:
        return Matrix.from_rows([[field.parse_scalar(str(v)) for v in row] for row in data], field, cols=cols)
    except FIKoszulError as e:
        raise ModuleFormatError("{}: {}".format(what, e)) from e


def module_to_dict(V: TruncatedFIModule) -> Dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "field": str(V.field),
        "N": V.N,
        "dims": list(V.dims),
        "transpositions": {
            str(n): {str(i): _matrix_to_json(t) for i, t in enumerate(gens, start=1)}
            for n, gens in enumerate(V.transpositions) if gens
        },
        "inclusions": {str(n): _matrix_to_json(phi) for n, phi in enumerate(V.inclusions)},
        "note": V.note,
    }


def module_from_dict(data: Dict[str, Any]) -> TruncatedFIModule:
    if not isinstance(data, dict):
        raise ModuleFormatError("A module file holds a JSON object")
    if data.get("version") != FORMAT_VERSION:
        raise ModuleFormatError("Unsupported module file version {!r}".format(data.get("version")))
    try:
        field = Field.parse(data["field"])
        N = int(data["N"])
        dims = [int(d) for d in data["dims"]]
        transpositions = data.get("transpositions", {})
        inclusions = data.get("inclusions", {})
    except KeyError as e:
        raise ModuleFormatError("Module file lacks the key {}".format(e)) from e
    except (TypeError, ValueError) as e:
        raise ModuleFormatError(str(e)) from e
    if len(dims) != N + 1 or any(d < 0 for d in dims):
        raise ModuleFormatError("dims must list N + 1 = {} nonnegative dimensions".format(N + 1))
    try:
        gens = tuple(
            tuple(
                _matrix_from_json(transpositions[str(n)][str(i)], dims[n], dims[n], field, "s_{} on degree {}".format(i, n))
                for i in range(1, n)
            )
            for n in range(N + 1)
        )
        phis = tuple(
            _matrix_from_json(inclusions[str(n)], dims[n + 1], dims[n], field, "φ_{}".format(n)) for n in range(N)
        )
    except (KeyError, TypeError) as e:
        raise ModuleFormatError("Missing structure matrix {}".format(e)) from e
    return TruncatedFIModule(field, tuple(dims), gens, phis, note=str(data.get("note", "")))


def dump_module(V: TruncatedFIModule, stream):
    json.dump(module_to_dict(V), stream, indent=1, sort_keys=True)
    stream.write("\n")


def load_module(stream) -> TruncatedFIModule:
    try:
        data = json.load(stream)
    except json.JSONDecodeError as e:
        raise ModuleFormatError("Not a JSON module file: {}".format(e)) from e
    V = module_from_dict(data)
    logger.debug("Loaded %r", V)
    return V


def save_module_file(V: TruncatedFIModule, path: str):
    with open(path, "w", encoding="utf-8") as f:
        dump_module(V, f)


def load_module_file(path: str) -> TruncatedFIModule:
    with open(path, encoding="utf-8") as f:
        return load_module(f)


def table_to_dict(table: HomologyTable) -> Dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "kind": table.provenance.value,
        "field": str(table.field),
        "a_max": table.a_max,
        "n_max": table.n_max,
        "entries": [list(row) for row in table.dims],
    }


def table_from_dict(data: Dict[str, Any]) -> HomologyTable:
    """Read a koszul or tor table. A compare file yields its Koszul side."""
    if not isinstance(data, dict) or data.get("version") != FORMAT_VERSION:
        raise ModuleFormatError("Unsupported table file")
    kind = data.get("kind")
    if kind == "compare":
        kind = Provenance.KOSZUL.value
    try:
        return HomologyTable(
            provenance=Provenance(kind),
            field=Field.parse(data["field"]),
            a_max=int(data["a_max"]),
            n_max=int(data["n_max"]),
            dims=tuple(tuple(int(v) for v in row) for row in data["entries"]),
        )
    except KeyError as e:
        raise ModuleFormatError("Table file lacks the key {}".format(e)) from e
    except (TypeError, ValueError, FIKoszulError) as e:
        raise ModuleFormatError("Malformed table file: {}".format(e)) from e


def load_table_file(path: str) -> HomologyTable:
    with open(path, encoding="utf-8") as f:
        try:
            return table_from_dict(json.load(f))
        except json.JSONDecodeError as e:
            raise ModuleFormatError("Not a JSON table file: {}".format(e)) from e


def comparison_to_dict(report: ComparisonReport) -> Dict[str, Any]:
    result = table_to_dict(report.koszul)
    result.update({
        "kind": "compare",
        "tor_entries": [list(row) for row in report.tor.dims],
        "verdicts": {
            "equal": report.ok,
            "mismatches": [
                {"a": a, "n": n, "koszul": mine, "tor": theirs} for a, n, mine, theirs in report.mismatches
            ],
        },
    })
    return result


def regularity_to_dict(report: RegularityReport) -> Dict[str, Any]:
    result = {
        "version": FORMAT_VERSION,
        "kind": "regularity",
        "a_max": report.a_max,
        "deg": str(report.deg_V),
        "degrees": {str(a): str(d) for a, d in enumerate(report.degrees, start=1)},
        "verdicts": {
            "reg_observed": str(report.reg_observed),
            "bound_ok": report.bound_ok,
            "verdict": report.verdict.value,
            "first_nonvanishing_a": report.first_nonvanishing_a,
            "certificate_a": report.certificate_a,
            "reg_certified": report.reg_certified,
        },
    }
    if report.table is not None:
        result.update({
            "field": str(report.table.field),
            "n_max": report.table.n_max,
            "entries": [list(row) for row in report.table.dims],
            "lower_bounds": {str(a): b for a, b in enumerate(report.lower_bounds, start=1)},
        })
    return result


def dumps_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def table_to_csv(table: HomologyTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, dialect=unix_csv)
    writer.writerow(["a"] + list(range(table.n_max + 1)))
    for a, row in enumerate(table.dims):
        writer.writerow([a] + list(row))
    return buffer.getvalue()
