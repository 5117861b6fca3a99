# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Turn computed reports into documents and plain-text tables.
"""

from __future__ import annotations

import csv
import io
import sys
from collections.abc import Iterable, Mapping

from jinja2 import Environment, PackageLoader, StrictUndefined, select_autoescape

from .census import CensusReport, Check
from .classifier import ClassificationResult
from .field import Field
from .quadspace import AlternatingForm, QuadraticSpace
from .schemas import (
    CensusDoc,
    CheckDoc,
    ClassificationDoc,
    FieldDoc,
    FiltrationDoc,
    FormDoc,
    ProfileCountDoc,
    ReportDoc,
    TraceRecordDoc,
    dump_document,
)

jinja_env = Environment(
    loader=PackageLoader(__package__, "data"),
    autoescape=select_autoescape(),
    trim_blocks=True,
    undefined=StrictUndefined,
)


def check_docs(checks: Iterable[Check]) -> list[CheckDoc]:
    return [
        CheckDoc(
            name=check.name,
            expected=check.expected,
            actual=check.actual,
            passed=check.passed,
        )
        for check in checks
    ]


def _check_rows(checks: Iterable[Check]) -> list[dict[str, object]]:
    return [
        {
            "mark": "ok" if check.passed else "FAIL",
            "name": check.name,
            "expected": check.expected,
            "actual": check.actual,
            "detail": (
                "" if check.passed else f": expected {check.expected}, got {check.actual}"
            ),
        }
        for check in checks
    ]


def demo_form(field: Field) -> AlternatingForm:
    """
    The regular form on the standard 3-dimensional space:
    ``B(e_{-1}, e_0) = 1`` and every other pairing of basis vectors zero.
    """
    space = QuadraticSpace.standard(field, 1)
    return AlternatingForm.from_pairs(space, {(0, 1): 1})


def form_document(form: AlternatingForm) -> FormDoc:
    space = form.space
    return FormDoc(
        schema_="nilpiece/1",
        field=FieldDoc.from_field(space.field),
        N=space.rank,
        lower=form.lower().tolist(),
    )


def classification_document(
    form: AlternatingForm, result: ClassificationResult, explain: bool = False
) -> ClassificationDoc:
    space = form.space
    return ClassificationDoc(
        field=FieldDoc.from_field(space.field),
        N=space.rank if space.rank is not None else (space.dim - 1) // 2,
        lower=form.lower().tolist(),
        profile=list(result.profile.values),
        label=result.profile.label,
        filtration=FiltrationDoc.from_filtration(result.filtration),
        trace=(
            [TraceRecordDoc(**record) for record in result.trace] if explain else None
        ),
    )


def census_document(report: CensusReport, timing: bool = False) -> CensusDoc:
    return CensusDoc(
        field=FieldDoc.from_field(report.field),
        N=report.N,
        total=report.total,
        tally=[
            ProfileCountDoc(label=profile.label, profile=list(profile.values), count=count)
            for profile, count in report.sorted_tally()
        ],
        checks=check_docs(report.checks),
        elapsed=report.elapsed if timing else None,
    )


def census_table(report: CensusReport, timing: bool = False) -> str:
    rows = [
        {"label": profile.label, "count": count}
        for profile, count in report.sorted_tally()
    ]
    width = max([len("profile"), len("total")] + [len(row["label"]) for row in rows])
    count_width = max([len("count"), len(str(report.total))])
    return jinja_env.get_template("census-table.j2").render(
        dim=2 * report.N + 1,
        field=str(report.field),
        N=report.N,
        rows=rows,
        width=width,
        count_width=count_width,
        total=report.total,
        checks=_check_rows(report.checks),
        elapsed=report.elapsed if timing else None,
    ) + "\n"


def census_csv(report: CensusReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["profile", "count"])
    for profile, count in report.sorted_tally():
        writer.writerow([profile.label, count])
    return buffer.getvalue()


def verification_document(
    command: str,
    parameters: Mapping[str, int | str | list[int]],
    checks: Iterable[Check] = (),
    mismatches: Iterable[str] = (),
    details: Mapping[str, str] | None = None,
    elapsed: float | None = None,
) -> ReportDoc:
    check_list = check_docs(checks)
    mismatch_list = sorted(mismatches)
    return ReportDoc(
        command=command,
        parameters=dict(parameters),
        checks=check_list,
        mismatches=mismatch_list,
        details=dict(sorted(details.items())) if details is not None else None,
        passed=not mismatch_list and all(check.passed for check in check_list),
        elapsed=elapsed,
    )


def selftest_text(checks: list[Check]) -> str:
    return jinja_env.get_template("selftest.j2").render(
        checks=_check_rows(checks),
        passed=sum(1 for check in checks if check.passed),
    ) + "\n"


def emit(text: str, output: str | None = None) -> None:
    """Write ``text`` to ``output``, or to stdout when no file is given."""
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8") as f:
        f.write(text)


def emit_document(
    document: ReportDoc | CensusDoc | ClassificationDoc | FormDoc,
    output: str | None = None,
) -> None:
    emit(dump_document(document), output)


__all__ = (
    "census_csv",
    "census_document",
    "census_table",
    "check_docs",
    "classification_document",
    "demo_form",
    "emit",
    "emit_document",
    "form_document",
    "selftest_text",
    "verification_document",
)
