"""Text, JSON and CSV renderings of tables and reports."""
from enum import Enum
from typing import List, Optional

from django.template.loader import render_to_string

from .fihom import ComparisonReport, RegularityReport
from .koszul import HomologyTable, Provenance
from .serialization import comparison_to_dict, dumps_json, regularity_to_dict, table_to_csv, table_to_dict


class OutputFormat(Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


TITLES = {
    Provenance.KOSZUL: "Koszul homology",
    Provenance.TOR: "FI-homology",
}


def _layout(table: HomologyTable):
    width = max([3] + [len(str(v)) for row in table.dims for v in row] + [len(str(table.n_max))])
    rows = [{"a": a, "cells": row} for a, row in enumerate(table.dims)]
    return width, rows


def render_table(table: HomologyTable, fmt: OutputFormat = OutputFormat.TEXT) -> str:
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        return dumps_json(table_to_dict(table))
    if fmt is OutputFormat.CSV:
        return table_to_csv(table)
    width, rows = _layout(table)
    return render_to_string("fi_koszul/homology_table.txt", {
        "title": TITLES[table.provenance],
        "table": table,
        "rows": rows,
        "width": width,
        "degrees": range(table.n_max + 1),
    })


def render_comparison(report: ComparisonReport, fmt: OutputFormat = OutputFormat.TEXT,
                      expected_mismatches: Optional[List] = None) -> str:
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        data = comparison_to_dict(report)
        if expected_mismatches is not None:
            data["verdicts"]["expected_equal"] = not expected_mismatches
        return dumps_json(data)
    if fmt is OutputFormat.CSV:
        return table_to_csv(report.koszul)
    width_k, koszul_rows = _layout(report.koszul)
    width_t, tor_rows = _layout(report.tor)
    return render_to_string("fi_koszul/comparison.txt", {
        "report": report,
        "koszul_rows": koszul_rows,
        "tor_rows": tor_rows,
        "width": max(width_k, width_t),
        "degrees": range(report.koszul.n_max + 1),
        "expected_mismatches": expected_mismatches,
    })


def render_regularity(report: RegularityReport, fmt: OutputFormat = OutputFormat.TEXT) -> str:
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        return dumps_json(regularity_to_dict(report))
    if fmt is OutputFormat.CSV:
        if report.table is None:
            return "a\n"
        return table_to_csv(report.table)
    return render_to_string("fi_koszul/regularity.txt", {
        "report": report,
        "degrees": list(enumerate(report.degrees, start=1)),
    })
