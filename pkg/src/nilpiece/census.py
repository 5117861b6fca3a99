# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Exhaustive counts over small fields and the point count identities they are
compared with.
"""

from __future__ import annotations

import time
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from antsibull_core.logging import get_module_logger

from .classifier import classify
from .constants import (
    CENSUS_MAX_ORDER,
    CENSUS_STREAMED_ORDERS,
    FIBER_MAX_N,
    SM_COUNT_MAX_N,
    SM_COUNT_MAX_ORDER,
    SPRINGER_MAX_RANK,
    UNIVERSALITY_ORDERS,
)
from .exceptions import CharacteristicError, SizeError
from .field import Array, Field, field_create
from .grading import (
    Profile,
    QFiltration,
    graded_forms,
    in_eta,
    in_S2_0,
    split_filtration,
)
from .linalg import is_nilpotent_matrix, quotient
from .nilcone import adjoint_map, is_nilpotent, v_star_pair
from .quadspace import (
    QuadraticSpace,
    all_vectors,
    form_count,
    iter_forms,
    vector_indices,
)
from .utils.parallel import resolve_jobs, run_partitions

mlog = get_module_logger(__name__)

#: Forms classified per partition of the census.
CENSUS_CHUNK = 512


@dataclass(frozen=True)
class Check:
    """A computed value next to the value a formula predicts."""

    name: str
    expected: int | str | bool
    actual: int | str | bool

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class CensusReport:
    field: Field
    N: int
    total: int
    tally: dict[Profile, int]
    checks: list[Check] = dc_field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def sorted_tally(self) -> list[tuple[Profile, int]]:
        return sorted(self.tally.items(), key=lambda item: (item[0].top, item[0].values))


def nilpotent_count(field: Field, N: int) -> int:  # pylint: disable=invalid-name
    return field.q ** (2 * N * N)


def _census_guard(field: Field, N: int, force: bool) -> bool:  # pylint: disable=invalid-name
    """
    Refuse a census beyond the size limits unless ``force`` is set.  Returns
    whether the census is one of the large runs that are only streamed.
    """
    if field.q <= CENSUS_MAX_ORDER.get(N, 0):
        return False
    if not force and field.q not in CENSUS_STREAMED_ORDERS.get(N, ()):
        raise SizeError(
            f"census for N={N} over {field} needs --force"
            f" (limits: {CENSUS_MAX_ORDER}, streamed: {CENSUS_STREAMED_ORDERS})",
            context="census",
        )
    return True


def _tally_range(space: QuadraticSpace, bounds: list[tuple[int, int]]) -> Counter[Profile]:
    tally: Counter[Profile] = Counter()
    for start, stop in bounds:
        for form in iter_forms(space, start, stop):
            if is_nilpotent(form):
                tally[classify(form).profile] += 1
    return tally


def nilpotent_census(
    field: Field, N: int, jobs: int | None = None, force: bool = False
) -> CensusReport:  # pylint: disable=invalid-name
    """
    Classify every nilpotent alternating form on the standard space of rank
    ``N`` and tally the pieces.
    """
    flog = mlog.fields(func="nilpotent_census")
    streamed = _census_guard(field, N, force)
    started = time.perf_counter()
    space = QuadraticSpace.standard(field, N)
    count = form_count(space)
    bounds = [
        (start, min(start + CENSUS_CHUNK, count)) for start in range(0, count, CENSUS_CHUNK)
    ]
    if streamed:
        flog.fields(N=N, q=field.q, forms=count, chunks=len(bounds)).info(
            "Streaming census"
        )
    jobs = resolve_jobs(jobs)
    parts = [bounds[i::jobs] for i in range(min(jobs, len(bounds)))]
    tally: Counter[Profile] = Counter()
    for partial in run_partitions(lambda part: _tally_range(space, part), parts, jobs=jobs):
        tally.update(partial)
    total = sum(tally.values())
    report = CensusReport(field, N, total, dict(tally))
    report.checks.append(Check("nilpotent-count", nilpotent_count(field, N), total))
    report.checks.append(
        Check(
            "admissible-profiles",
            True,
            all(profile.is_admissible(space.dim) for profile in tally),
        )
    )
    report.elapsed = time.perf_counter() - started
    flog.fields(N=N, q=field.q, total=total, elapsed=report.elapsed).info("Census done")
    return report


def sm_formula(q: int, N: int, m: int) -> int:  # pylint: disable=invalid-name
    """``(q^{2N} - 1) (q^{2N-2} - 1) ... (q^{2N-2m+2} - 1) q^{m(m-1)/2}``."""
    result = q ** (m * (m - 1) // 2)
    for i in range(m):
        result *= q ** (2 * N - 2 * i) - 1
    return result


def sm_count(field: Field, N: int, m: int, force: bool = False) -> Check:  # pylint: disable=invalid-name
    """
    Count sequences of ``m`` independent vectors spanning a subspace on which
    ``Q`` vanishes.
    """
    if not force and (N > SM_COUNT_MAX_N or field.q > SM_COUNT_MAX_ORDER):
        raise SizeError(f"S_m enumeration for N={N} over {field}", context="counts")
    space = QuadraticSpace.standard(field, N)
    vectors = all_vectors(space)
    singular = np.flatnonzero(space.q_rows(vectors) == 0)
    beta = space.pairing(vectors[singular], vectors[singular])
    sequences: list[list[int]] = [[]]
    for depth in range(m):
        combos = _coefficient_vectors(field, depth)
        grown = []
        for sequence in sequences:
            allowed = np.ones(singular.shape[0], dtype=bool)
            for position in sequence:
                allowed &= beta[position] == 0
            if sequence:
                span_rows = field.matmul(combos, vectors[singular[sequence]])
                allowed[np.isin(singular, vector_indices(space, span_rows))] = False
            else:
                allowed[singular == 0] = False
            grown.extend(sequence + [int(i)] for i in np.flatnonzero(allowed))
        sequences = grown
    return Check(f"S_{m}(N={N},q={field.q})", sm_formula(field.q, N, m), len(sequences))


def _coefficient_vectors(field: Field, length: int) -> Array:
    """All coefficient vectors of the given length over ``field``."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    q = field.q
    weights = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return (np.arange(q**length, dtype=np.int64)[:, None] // weights[None, :]) % q


def springer_formula(q: int, N: int, m: int) -> int:  # pylint: disable=invalid-name
    return q ** (2 * (N - m) * (N - m - 1))


def _reduced_space(space: QuadraticSpace, m: int) -> QuadraticSpace:
    """``L^perp / L`` for ``L`` spanned by ``e_{-N} .. e_{-N+m-1}`` and the radical."""
    eye = np.eye(space.dim, dtype=np.int64)
    rank_ = space.rank or 0
    span_l = space.span(np.concatenate([eye[:m], eye[rank_ : rank_ + 1]]))
    qmap = quotient(space.perp(span_l), span_l)
    return QuadraticSpace(space.field, qmap.descend_quadratic(space.upper))


def springer_count(field: Field, N: int, m: int, force: bool = False) -> Check:  # pylint: disable=invalid-name
    """
    Count the nilpotent ``T'`` on ``L^perp / L``, that is alternating forms
    whose map ``T'`` with ``beta(T' x, y) = B(x, y)`` is nilpotent.
    """
    if field.p != 2:
        raise CharacteristicError("the reduction to L^perp/L needs characteristic 2")
    if not force and (N - m > SPRINGER_MAX_RANK or field.q != 2):
        raise SizeError(f"Springer count for N={N}, m={m} over {field}", context="counts")
    reduced = _reduced_space(QuadraticSpace.standard(field, N), m)
    found = 0
    if reduced.dim == 0:
        found = 1
    else:
        for form in iter_forms(reduced):
            if is_nilpotent_matrix(field, adjoint_map(form)):
                found += 1
    return Check(f"springer(N={N},m={m},q={field.q})", springer_formula(field.q, N, m), found)


def fiber_size(q: int, N: int, m: int) -> int:  # pylint: disable=invalid-name
    return q ** (2 * m * (N - m) + m * (m - 1) // 2)


@dataclass
class FiberReport:
    field: Field
    N: int
    fibers: dict[int, int] = dc_field(default_factory=dict)
    checks: list[Check] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def fiber_check(field: Field, N: int, force: bool = False) -> FiberReport:  # pylint: disable=invalid-name
    """
    Group the nilpotent forms by ``(v_*, T')`` and compare fiber sizes and
    fiber counts with the formulas.
    """
    flog = mlog.fields(func="fiber_check")
    if field.p != 2:
        raise CharacteristicError("fibers over (v_*, T') need characteristic 2")
    if not force and (N > FIBER_MAX_N or field.q != 2):
        raise SizeError(f"fiber check for N={N} over {field}", context="fibers")
    space = QuadraticSpace.standard(field, N)
    fibers: Counter[tuple[int, bytes, bytes]] = Counter()
    for form in iter_forms(space):
        pair = v_star_pair(form)
        if pair is None or not is_nilpotent_matrix(field, pair.T):
            continue
        key = (pair.v_star.shape[0], pair.v_star.tobytes(), pair.T.tobytes())
        fibers[key] += 1
    report = FiberReport(field, N)
    for m in range(N + 1):
        sizes = sorted({size for (k, _, _), size in fibers.items() if k == m})
        count = sum(1 for (k, _, _) in fibers if k == m)
        report.fibers[m] = count
        actual: int | str = sizes[0] if len(sizes) == 1 else str(sizes)
        report.checks.append(Check(f"fiber-size(m={m})", fiber_size(field.q, N, m), actual))
        report.checks.append(
            Check(
                f"fiber-count(m={m})",
                sm_formula(field.q, N, m) * springer_formula(field.q, N, m),
                count,
            )
        )
    flog.fields(N=N, q=field.q, fibers=report.fibers).debug("Grouped fibers")
    return report


def xn_value(q: int, N: int) -> int:  # pylint: disable=invalid-name
    """``sum_m (1 - q^N) (1 - q^{N-1}) ... (1 - q^{N-m+1}) q^{N-m}``."""
    total = 0
    for m in range(N + 1):
        term = q ** (N - m)
        for i in range(m):
            term *= 1 - q ** (N - i)
        total += term
    return total


def xn_identity(N_max: int, q_list: Sequence[int]) -> list[Check]:  # pylint: disable=invalid-name
    """
    ``X_N`` by its defining sum and by ``X_{N+1} = q^{N+1} + (1 - q^{N+1}) X_N``.
    """
    checks = []
    for q in q_list:
        recurrence = 1
        for N in range(1, N_max + 1):  # pylint: disable=invalid-name
            if N > 1:
                recurrence = q**N + (1 - q**N) * recurrence
            checks.append(Check(f"X_{N}(q={q}) sum", 1, xn_value(q, N)))
            checks.append(Check(f"X_{N}(q={q}) recurrence", 1, recurrence))
    return checks


def master_identity(N_max: int, q_list: Sequence[int]) -> list[Check]:  # pylint: disable=invalid-name
    """
    ``sum_m |S_m| q^{2(N-m)(N-m-1)} q^{2m(N-m)+m(m-1)/2} = q^{2N^2}``.
    """
    checks = []
    for q in q_list:
        for N in range(1, N_max + 1):  # pylint: disable=invalid-name
            total = sum(
                sm_formula(q, N, m) * springer_formula(q, N, m) * fiber_size(q, N, m)
                for m in range(N + 1)
            )
            checks.append(Check(f"master(N={N},q={q})", q ** (2 * N * N), total))
    return checks


def _interpolate(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low to high) of the Lagrange polynomial through ``points``."""
    coefficients = [Fraction(0)] * len(points)
    for i, (x_i, y_i) in enumerate(points):
        basis = [Fraction(1)]
        denominator = Fraction(1)
        for j, (x_j, _) in enumerate(points):
            if i == j:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= x_j * basis[k + 1]
            denominator *= x_i - x_j
        for k, c in enumerate(basis):
            coefficients[k] += y_i * c / denominator
    return coefficients


def format_polynomial(coefficients: Sequence[Fraction | int]) -> str:
    terms = []
    for power in range(len(coefficients) - 1, -1, -1):
        c = coefficients[power]
        if not c:
            continue
        magnitude = abs(c)
        if power == 0:
            body = f"{magnitude}"
        else:
            head = "" if magnitude == 1 else f"{magnitude}*"
            body = f"{head}q" if power == 1 else f"{head}q^{power}"
        sign = "-" if c < 0 else "+"
        terms.append(f"{sign} {body}" if terms else ("-" if c < 0 else "") + body)
    return " ".join(terms) if terms else "0"


@dataclass
class UniversalityReport:
    N: int
    q_list: list[int]
    counts: dict[Profile, list[int]] = dc_field(default_factory=dict)
    polynomials: dict[Profile, list[Fraction]] = dc_field(default_factory=dict)
    checks: list[Check] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def universality_check(
    N: int,
    q_list: Sequence[int] = UNIVERSALITY_ORDERS,
    jobs: int | None = None,
    force: bool = False,
) -> UniversalityReport:  # pylint: disable=invalid-name
    """
    Interpolate per-piece counts over several fields (of possibly different
    characteristics) and check they are one integer polynomial in ``q`` of
    degree at most ``2 N^2``.
    """
    fields = []
    for q in q_list:
        p = next(d for d in range(2, q + 1) if q % d == 0)
        k = 1
        while p**k < q:
            k += 1
        fields.append(field_create(p, k))
    censuses = [nilpotent_census(field, N, jobs=jobs, force=force) for field in fields]
    profiles = sorted(
        {profile for census in censuses for profile in census.tally},
        key=lambda profile: (profile.top, profile.values),
    )
    report = UniversalityReport(N, list(q_list))
    degree = 2 * N * N
    for profile in profiles:
        counts = [census.tally.get(profile, 0) for census in censuses]
        coefficients = _interpolate(list(zip(q_list, counts)))
        report.counts[profile] = counts
        report.polynomials[profile] = coefficients[: degree + 1]
        report.checks.append(
            Check(
                f"integer-coefficients({profile})",
                True,
                all(c.denominator == 1 for c in coefficients),
            )
        )
        report.checks.append(
            Check(
                f"degree-at-most-{degree}({profile})",
                True,
                not any(coefficients[degree + 1 :]),
            )
        )
    totals = [census.total for census in censuses]
    total_poly = _interpolate(list(zip(q_list, totals)))
    report.checks.append(
        Check("total", format_polynomial([0] * degree + [1]), format_polynomial(total_poly))
    )
    return report


def eta_exponent(profile: Profile) -> int:
    """
    ``sum f_a f_b`` over degrees ``a < b`` with ``a + b <= -3`` plus
    ``sum f_a (f_a - 1) / 2`` over ``a <= -2``.
    """
    degrees = range(-profile.top, profile.top + 1)
    exponent = 0
    for a in degrees:
        for b in degrees:
            if a < b and a + b <= -3:
                exponent += profile[a] * profile[b]
        if a <= -2:
            exponent += profile[a] * (profile[a] - 1) // 2
    return exponent


def eta_count_check(
    space: QuadraticSpace, filtration: QFiltration, force: bool = False
) -> Check:
    """
    ``|eta(V_*)| = q^d |S(V)_2^0|`` for the grading splitting ``V_*``.
    """
    rank_ = (space.dim - 1) // 2
    if not force and space.field.q > CENSUS_MAX_ORDER.get(rank_, 0):
        raise SizeError(f"counting eta for dim {space.dim} over {space.field}", context="eta")
    grading = split_filtration(filtration)
    open_forms = sum(1 for form in graded_forms(grading) if in_S2_0(grading, form))
    expected = space.field.q ** eta_exponent(filtration.profile()) * open_forms
    found = sum(1 for form in iter_forms(space) if in_eta(filtration, form, grading))
    return Check(f"eta-count({filtration.profile()})", expected, found)


__all__ = (
    "CensusReport",
    "Check",
    "FiberReport",
    "UniversalityReport",
    "eta_count_check",
    "eta_exponent",
    "fiber_check",
    "fiber_size",
    "format_polynomial",
    "master_identity",
    "nilpotent_census",
    "nilpotent_count",
    "sm_count",
    "sm_formula",
    "springer_count",
    "springer_formula",
    "universality_check",
    "xn_identity",
    "xn_value",
)
