# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
The smallest instance of every acceptance check, rendered as a checklist.
"""

from __future__ import annotations

import dataclasses
import random
from collections.abc import Callable

import numpy as np
from antsibull_core.logging import get_module_logger

from .census import (
    Check,
    eta_count_check,
    fiber_check,
    master_identity,
    nilpotent_census,
    sm_count,
    springer_count,
    universality_check,
    xn_identity,
)
from .classifier import classify, verify_bijection
from .exceptions import NilpieceError
from .field import field_create
from .grading import Profile, standard_filtration
from .group_oracle import enumerate_isometries, verify_prop2_all
from .properties import (
    chain_uniqueness_mismatches,
    condition_a_mismatches,
    condition_b_mismatches,
    equivariance_mismatches,
    grading_independence_mismatches,
    oracle_mismatches,
    u0_independence_mismatches,
)
from .quadspace import QuadraticSpace
from .reports import demo_form, emit, selftest_text

mlog = get_module_logger(__name__)

#: (p, k) of the fields whose arithmetic is checked exhaustively.
SELFTEST_FIELDS = ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1))


def _prefixed(prefix: str, checks: list[Check]) -> list[Check]:
    return [dataclasses.replace(check, name=f"{prefix}: {check.name}") for check in checks]


def _field_checks() -> list[Check]:
    checks = []
    for p, k in SELFTEST_FIELDS:
        field = field_create(p, k)
        elements = field.elements()
        nonzero = elements[1:]
        inverses_ok = bool(np.all(field.mul(nonzero, field.inv(nonzero)) == 1))
        checks.append(Check(f"{field} inverses", True, inverses_ok))
        if p == 2:
            roots = field.sqrt(elements)
            squares_ok = bool(np.all(field.mul(roots, roots) == elements))
            checks.append(Check(f"{field} square roots", True, squares_ok))
        order = field.multiplicative_order(field.primitive_element().value)
        checks.append(Check(f"{field} primitive element order", field.q - 1, order))
    return checks


def _census_checks() -> list[Check]:
    checks = []
    for p, k, N in ((2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2)):  # pylint: disable=invalid-name
        report = nilpotent_census(field_create(p, k), N, jobs=1)
        checks.extend(_prefixed(f"census N={N} q={p**k}", report.checks))
    return checks


def _classify_checks() -> list[Check]:
    result = classify(demo_form(field_create(2)))
    return [Check("regular form of dim 3 over GF(2)", "0:1,2:1", result.profile.label)]


def _bijection_checks() -> list[Check]:
    checks = []
    for p in (2, 3):
        report = verify_bijection(QuadraticSpace.standard(field_create(p), 1))
        checks.append(
            Check(f"bijection dim 3 over GF({p}) mismatches", 0, len(report.mismatches))
        )
    return checks


def _dim3(p: int) -> QuadraticSpace:
    return QuadraticSpace.standard(field_create(p), 1)


def _prop2_checks() -> list[Check]:
    checks = []
    for p, so_order in ((2, 6), (3, 24)):
        space = _dim3(p)
        group = enumerate_isometries(space, jobs=1)
        mismatches = sum(len(report.mismatches) for report in verify_prop2_all(space, group))
        checks.append(Check(f"|SO(3)| over GF({p})", so_order, int(group.special.sum())))
        checks.append(
            Check(f"centralizer criterion dim 3 over GF({p}) mismatches", 0, mismatches)
        )
    return checks


def _oracle_checks() -> list[Check]:
    return [
        Check(f"oracle equivalence: dim 3 over GF({p})", 0, len(oracle_mismatches(_dim3(p))))
        for p in (2, 3)
    ]


def _grading_checks() -> list[Check]:
    return [
        Check(
            f"grading independence: dim 3 over GF({p})",
            0,
            len(grading_independence_mismatches(_dim3(p), random.Random(7))),
        )
        for p in (2, 3)
    ]


def _condition_checks() -> list[Check]:
    checks = [
        Check(f"condition (a): dim 3 over GF({p})", 0, len(condition_a_mismatches(_dim3(p))))
        for p in (2, 3)
    ]
    space5 = QuadraticSpace.standard(field_create(2), 2)
    mismatches = condition_b_mismatches(space5)
    checks.append(Check("condition (b): dim 5 over GF(2)", 0, len(mismatches)))
    return checks


def _equivariance_checks() -> list[Check]:
    return [
        Check(f"equivariance: dim 3 over GF({p})", 0, len(equivariance_mismatches(_dim3(p))))
        for p in (2, 3)
    ]


def _chain_checks() -> list[Check]:
    return [
        Check(
            "chain uniqueness: dim 3 over GF(2)",
            0,
            len(chain_uniqueness_mismatches(_dim3(2))),
        ),
        Check(
            "u0 independence: dim 3 over GF(2)",
            0,
            len(u0_independence_mismatches(_dim3(2), random.Random(5))),
        ),
    ]


def _count_checks() -> list[Check]:
    gf2 = field_create(2)
    checks = [
        sm_count(gf2, 1, 1),
        springer_count(gf2, 1, 0),
        *fiber_check(gf2, 1).checks,
        *xn_identity(3, (2, 3)),
        *master_identity(4, (2, 3, 4, 5, 8)),
    ]
    space = QuadraticSpace.standard(gf2, 1)
    filtration = standard_filtration(space, Profile.from_mapping({0: 1, 2: 1}))
    checks.append(eta_count_check(space, filtration))
    return checks


def _universality_checks() -> list[Check]:
    report = universality_check(1, jobs=1)
    return _prefixed("universality N=1", report.checks)


SELFTEST_GROUPS: tuple[tuple[str, Callable[[], list[Check]]], ...] = (
    ("field arithmetic", _field_checks),
    ("nilpotent census", _census_checks),
    ("classification", _classify_checks),
    ("bijection", _bijection_checks),
    ("centralizer criterion", _prop2_checks),
    ("oracle equivalence", _oracle_checks),
    ("grading independence", _grading_checks),
    ("condition equivalences", _condition_checks),
    ("equivariance", _equivariance_checks),
    ("chains", _chain_checks),
    ("counting identities", _count_checks),
    ("universality", _universality_checks),
)


def collect_checks() -> list[Check]:
    """
    Run every check group.  A library error inside a group becomes one
    failed check carrying the diagnostic.
    """
    flog = mlog.fields(func="collect_checks")
    checks: list[Check] = []
    for name, group in SELFTEST_GROUPS:
        try:
            found = group()
        except NilpieceError as exc:
            flog.fields(group=name, error=str(exc)).warning("Check group failed")
            found = [Check(name, "no error", f"{exc.diagnostic}: {exc.message}")]
        flog.fields(group=name, checks=len(found)).debug("Ran check group")
        checks.extend(found)
    return checks


def run_selftest(output: str | None = None) -> int:
    checks = collect_checks()
    emit(selftest_text(checks), output)
    return 0 if all(check.passed for check in checks) else 1


__all__ = ("SELFTEST_GROUPS", "collect_checks", "run_selftest")
