# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Subcommands of the nilpiece tool.  Each reads its parameters from the
application context and returns an exit code.
"""

from __future__ import annotations

import random
import sys
import time
from functools import partial

from antsibull_core import app_context
from antsibull_core.logging import get_module_logger

from .census import (
    Check,
    fiber_check,
    format_polynomial,
    master_identity,
    nilpotent_census,
    sm_count,
    springer_count,
    universality_check,
    xn_identity,
)
from .classifier import classify, verify_bijection
from .constants import GROUP_MAX_DIM, GROUP_MAX_ORDER
from .exceptions import NotNilpotent
from .field import Field, field_create
from .group_oracle import enumerate_isometries, verify_prop2_all
from .quadspace import QuadraticSpace
from .reports import (
    census_csv,
    census_document,
    census_table,
    classification_document,
    demo_form,
    emit,
    emit_document,
    form_document,
    verification_document,
)
from .schemas import read_form
from .selftest import run_selftest

mlog = get_module_logger(__name__)

eprint = partial(print, file=sys.stderr)


def _field() -> Field:
    app_ctx = app_context.app_ctx.get()
    return field_create(app_ctx.extra["p"], app_ctx.extra["k"])


def _parameters(field: Field, N: int) -> dict[str, int | str | list[int]]:  # pylint: disable=invalid-name
    return {"p": field.p, "k": field.k, "q": field.q, "N": N}


def _finish(
    command: str,
    parameters: dict[str, int | str | list[int]],
    checks: list[Check],
    mismatches: list[str],
    started: float,
    details: dict[str, str] | None = None,
) -> int:
    app_ctx = app_context.app_ctx.get()
    timing: bool = app_ctx.extra["timing"]
    doc = verification_document(
        command,
        parameters,
        checks=checks,
        mismatches=mismatches,
        details=details,
        elapsed=time.perf_counter() - started if timing else None,
    )
    emit_document(doc, app_ctx.extra["output"])
    return 0 if doc.passed else 1


def classify_command() -> int:
    """Classify one form given as a document, or print the demo form."""
    flog = mlog.fields(func="classify_command")
    app_ctx = app_context.app_ctx.get()
    output: str | None = app_ctx.extra["output"]
    field = _field()

    if app_ctx.extra["demo"]:
        emit_document(form_document(demo_form(field)), output)
        return 0

    space = QuadraticSpace.standard(field, app_ctx.extra["N"])
    form = read_form(app_ctx.extra["input"], space)
    rng = random.Random(app_ctx.extra["seed"])
    try:
        result = classify(form, rng)
    except NotNilpotent as exc:
        eprint(f"nilpiece: {exc.diagnostic}: {exc}")
        return 1
    flog.fields(profile=result.profile.label).info("Classified")
    emit_document(classification_document(form, result, app_ctx.extra["explain"]), output)
    return 0


def census_command() -> int:
    """Tally the nilpotent pieces of every form on the standard space."""
    app_ctx = app_context.app_ctx.get()
    output: str | None = app_ctx.extra["output"]
    timing: bool = app_ctx.extra["timing"]
    report = nilpotent_census(
        _field(),
        app_ctx.extra["N"],
        jobs=app_ctx.extra["jobs"],
        force=app_ctx.extra["force"],
    )
    if app_ctx.extra["csv"]:
        emit(census_csv(report), output)
    elif app_ctx.extra["table"]:
        emit(census_table(report, timing), output)
    else:
        emit_document(census_document(report, timing), output)
    return 0 if report.passed else 1


def verify_prop2_command() -> int:
    """Compare centralizers with the open graded forms of every profile."""
    app_ctx = app_context.app_ctx.get()
    started = time.perf_counter()
    field = _field()
    N: int = app_ctx.extra["N"]  # pylint: disable=invalid-name
    force: bool = app_ctx.extra["force"]
    space = QuadraticSpace.standard(field, N)
    group = enumerate_isometries(
        space,
        max_dim=None if force else GROUP_MAX_DIM,
        max_order=None if force else GROUP_MAX_ORDER,
        jobs=app_ctx.extra["jobs"],
        cache_dir=app_ctx.extra["group_cache"],
    )
    rng = random.Random(app_ctx.extra["seed"])
    checks = [Check("group-closure", True, group.check_closure(rng))]
    mismatches: list[str] = []
    for report in verify_prop2_all(space, group):
        mismatches.extend(report.mismatches)
        checks.append(
            Check(f"mismatches({report.filtration.profile()})", 0, len(report.mismatches))
        )
    parameters = _parameters(field, N)
    parameters["group_order"] = group.order
    return _finish("verify-prop2", parameters, checks, mismatches, started)


def verify_bijection_command() -> int:
    """Check that every nilpotent form lies in exactly one piece."""
    app_ctx = app_context.app_ctx.get()
    started = time.perf_counter()
    field = _field()
    N: int = app_ctx.extra["N"]  # pylint: disable=invalid-name
    report = verify_bijection(
        QuadraticSpace.standard(field, N), force=app_ctx.extra["force"]
    )
    checks = [
        Check("filtrations", True, report.filtrations > 0),
        Check("nilpotent-forms", field.q ** (2 * N * N), report.nilpotent),
    ]
    return _finish(
        "verify-bijection", _parameters(field, N), checks, report.mismatches, started
    )


def verify_fibers_command() -> int:
    """Compare the fibers of the pair map with their predicted sizes."""
    app_ctx = app_context.app_ctx.get()
    started = time.perf_counter()
    field = _field()
    N: int = app_ctx.extra["N"]  # pylint: disable=invalid-name
    report = fiber_check(field, N, force=app_ctx.extra["force"])
    return _finish("verify-fibers", _parameters(field, N), report.checks, [], started)


def verify_counts_command() -> int:
    """
    Count isotropic sequences and nilpotent reductions by enumeration and
    evaluate the point count identities.
    """
    app_ctx = app_context.app_ctx.get()
    started = time.perf_counter()
    field = _field()
    N: int = app_ctx.extra["N"]  # pylint: disable=invalid-name
    force: bool = app_ctx.extra["force"]
    n_max: int = app_ctx.extra["n_max"]
    q_list: list[int] = app_ctx.extra["q_list"]
    checks = [sm_count(field, N, m, force=force) for m in range(1, N + 1)]
    if field.p == 2 and (field.q == 2 or force):
        checks.extend(springer_count(field, N, m, force=force) for m in range(N + 1))
    checks.extend(xn_identity(n_max, q_list))
    checks.extend(master_identity(n_max, q_list))
    parameters = _parameters(field, N)
    parameters["n_max"] = n_max
    parameters["q_list"] = q_list
    return _finish("verify-counts", parameters, checks, [], started)


def universality_command() -> int:
    """Interpolate the piece counts over several fields."""
    app_ctx = app_context.app_ctx.get()
    started = time.perf_counter()
    N: int = app_ctx.extra["N"]  # pylint: disable=invalid-name
    q_list: list[int] = app_ctx.extra["q_list"]
    report = universality_check(
        N, q_list, jobs=app_ctx.extra["jobs"], force=app_ctx.extra["force"]
    )
    details = {
        profile.label: format_polynomial(coefficients)
        for profile, coefficients in report.polynomials.items()
    }
    return _finish(
        "universality",
        {"N": N, "q_list": q_list},
        report.checks,
        [],
        started,
        details=details,
    )


def selftest_command() -> int:
    app_ctx = app_context.app_ctx.get()
    return run_selftest(app_ctx.extra["output"])


__all__ = (
    "census_command",
    "classify_command",
    "selftest_command",
    "universality_command",
    "verify_bijection_command",
    "verify_counts_command",
    "verify_fibers_command",
    "verify_prop2_command",
)
