# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Find the piece of a nilpotent alternating form: the unique Q-filtration
``V_*`` whose set ``eta(V_*)`` contains the form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np
from antsibull_core.logging import get_module_logger
from typing_extensions import TypedDict

from .constants import CENSUS_MAX_ORDER
from .exceptions import (
    InternalInvariantViolation,
    NotNilpotent,
    NotOGood,
    SizeError,
    ZeroInput,
)
from .field import Array
from .grading import (
    OGoodGrading,
    Profile,
    QFiltration,
    enumerate_filtrations,
    in_eta,
    split_filtration,
)
from .linalg import Subspace, image, kernel, matrix_power, quotient, solve
from .nilcone import ChainData, adjoint_map, extract_chain, is_nilpotent
from .quadspace import AlternatingForm, QuadraticSpace, isotropic_kernel, iter_forms

mlog = get_module_logger(__name__)


class TraceRecord(TypedDict):
    """What the characteristic 2 recursion saw at one level."""

    dim: int
    m: int
    lambda1: int | None
    l1: int | None
    rho_zero: bool | None
    case: str
    n: int


@dataclass(frozen=True)
class ClassificationResult:
    filtration: QFiltration
    profile: Profile
    trace: list[TraceRecord] = dc_field(default_factory=list, compare=False)


def _lambda_subspace(chain: ChainData, restrict: bool) -> Subspace:
    """
    ``{x in W : Q(T^{l_1 - 1} x) = 0}``, inside ``ker T^{lambda_1 - 1}`` when
    ``restrict`` is set (the kernel of ``rho``).
    """
    space = chain.space
    field = space.field
    assert chain.lambda1 is not None and chain.l1 is not None
    if restrict:
        coefficients = kernel(field, matrix_power(field, chain.T, chain.lambda1 - 1))
    else:
        coefficients = np.eye(chain.W.dim, dtype=np.int64)
    rows = field.matmul(coefficients, chain.W.basis).reshape(-1, space.dim)
    images = chain.t_rows(chain.l1 - 1, coefficients)
    # the rows are independent, so they may stand in for a basis
    domain = Subspace(field, space.dim, rows)
    return isotropic_kernel(space, domain, images)


def _w_double_star(chain: ChainData) -> Array:
    """
    A vector ``w_**`` of ``W`` with ``T^{lambda_1 - 1} w_** = w_*``, where
    ``beta(w_*, w)^2 = Q(T^{l_1 - 1} w)`` for all ``w`` in ``W``.
    """
    space = chain.space
    field = space.field
    assert chain.lambda1 is not None and chain.l1 is not None
    gram_w = space.pairing(chain.W.basis, chain.W.basis)
    roots = field.sqrt(space.q_rows(chain.t_rows(chain.l1 - 1)))
    star = solve(field, gram_w, roots)
    if star is None:
        raise InternalInvariantViolation("no w_* represents Q o T^(l1-1)", context="H")
    double_star = solve(field, matrix_power(field, chain.T, chain.lambda1 - 1), star)
    if double_star is None:
        raise InternalInvariantViolation(
            "w_* is not in the image of T^(lambda1-1)", context="H"
        )
    return field.matmul(double_star[None, :], chain.W.basis)[0]


def compute_H(  # noqa: N802
    chain: ChainData, form: AlternatingForm
) -> tuple[Subspace, str, int]:
    """
    The subspace ``H`` that becomes ``V^{>=-n+1}``, a tag naming the case
    that produced it, and the top degree ``n``.
    """
    # pylint: disable=invalid-name
    if form.is_zero:
        raise ZeroInput("the zero form has no H", context="H")
    if not chain.t_nilpotent:
        raise InternalInvariantViolation("T is not nilpotent", context="H")
    space = chain.space
    m = chain.m
    lambda1, l1, rho_zero = chain.lambda1, chain.l1, chain.rho_zero
    assert lambda1 is not None and l1 is not None
    chain_part = space.span(np.concatenate([chain.v, chain.u[1:]]))

    if m == 0:
        h = space.span(chain.v) + _lambda_subspace(chain, restrict=True)
        return h, "m-zero", lambda1 - 1
    if m >= l1:
        return chain_part + chain.W, "m-large", 2 * m
    if lambda1 - l1 < m < l1:
        return chain_part + _lambda_subspace(chain, restrict=False), "window", l1 + m - 1
    if m == lambda1 - l1 == l1 - 1:
        return chain_part + _lambda_subspace(chain, restrict=True), "boundary", 2 * m
    if m == lambda1 - l1 < l1 - 1 and not rho_zero:
        h = chain_part + _lambda_subspace(chain, restrict=True)
        return h, "rho-nonzero", l1 + m - 1
    if m == lambda1 - l1 < l1 - 1:
        field = space.field
        shifted = field.add(chain.u[0], _w_double_star(chain))
        h = chain_part + space.span(shifted) + _lambda_subspace(chain, restrict=True)
        return h, "rho-zero", lambda1 - 1
    raise InternalInvariantViolation(
        f"no case applies to m={m}, lambda1={lambda1}, l1={l1}", context="H"
    )


def _classify_char2(
    form: AlternatingForm, rng: random.Random | None, trace: list[TraceRecord]
) -> QFiltration:
    flog = mlog.fields(func="_classify_char2")
    space = form.space
    if form.is_zero:
        return QFiltration.trivial(space)
    chain = extract_chain(form, rng)
    if chain is None:
        raise InternalInvariantViolation(
            "a nilpotent form has no chain decomposition", context="classify"
        )
    h, case, n = compute_H(chain, form)
    trace.append(
        TraceRecord(
            dim=space.dim,
            m=chain.m,
            lambda1=chain.lambda1,
            l1=chain.l1,
            rho_zero=chain.rho_zero,
            case=case,
            n=n,
        )
    )
    flog.fields(dim=space.dim, case=case, n=n, h_dim=h.dim).debug("Computed H")

    top_level = isotropic_kernel(space, space.perp(h))
    if np.any(form.pairing(top_level.basis, np.eye(space.dim, dtype=np.int64))):
        raise InternalInvariantViolation("B(L, V) is not zero", context="classify")
    qmap = quotient(h, top_level)
    inner_space = QuadraticSpace(space.field, qmap.descend_quadratic(space.upper))
    inner_form = AlternatingForm(inner_space, qmap.descend_form(form.gram))
    inner = _classify_char2(inner_form, rng, trace)
    if inner.top >= n:
        raise InternalInvariantViolation(
            f"inner filtration reaches degree {inner.top}, not below {n}",
            context="classify",
        )
    levels = {a: qmap.lift_subspace(inner.at(a)) for a in range(-n + 1, n + 1)}
    filtration = QFiltration.from_levels(space, levels)
    if filtration.top != n:
        raise InternalInvariantViolation(
            f"top degree {filtration.top} differs from n={n}", context="classify"
        )
    return filtration


def weight_filtration(space: QuadraticSpace, endomorphism: Array) -> QFiltration:
    """
    The filtration of a nilpotent ``A`` with ``A V^{>=a}`` inside
    ``V^{>=a+2}`` and ``A^a`` identifying opposite graded pieces:
    ``V^{>=a}`` is the sum of ``im A^i & ker A^j`` over ``i - j + 1 >= a``.
    """
    field = space.field
    dim = space.dim
    powers = [matrix_power(field, endomorphism, e) for e in range(dim + 1)]
    images = [image(field, power) for power in powers]
    kernels = [Subspace(field, dim, kernel(field, power)) for power in powers]
    blocks = {
        (i, j): images[i] & kernels[j] for i in range(dim + 1) for j in range(dim + 1)
    }
    levels = {}
    for a in range(-dim, dim + 2):
        level = space.zero()
        for (i, j), block in blocks.items():
            if i - j + 1 >= a:
                level = level + block
        levels[a] = level
    return QFiltration.from_levels(space, levels)


def classify(form: AlternatingForm, rng: random.Random | None = None) -> ClassificationResult:
    """
    The Q-filtration ``V_*`` with ``form`` in ``eta(V_*)``.

    In characteristic 2 the top levels ``V^{>=-n+1} = H`` and ``V^{>=n}`` are
    computed from the chain data and the rest comes from the induced form on
    their quotient.  Otherwise the weight filtration of ``A`` with
    ``beta(A v, w) = B(v, w)`` is returned.  ``rng`` randomizes the choices
    that must not affect the answer.
    """
    flog = mlog.fields(func="classify")
    space = form.space
    if form.is_zero:
        return ClassificationResult(QFiltration.trivial(space), Profile.trivial(space.dim))
    if not is_nilpotent(form):
        raise NotNilpotent("the form is not in the nilpotent cone", context="classify")
    trace: list[TraceRecord] = []
    if space.field.p == 2:
        filtration = _classify_char2(form, rng, trace)
    else:
        filtration = weight_filtration(space, adjoint_map(form))
    if not in_eta(filtration, form):
        raise InternalInvariantViolation(
            "the form is not in eta of its filtration", context="classify"
        )
    profile = filtration.profile()
    if not profile.is_admissible(space.dim):
        raise InternalInvariantViolation(
            f"profile {profile} is not admissible", context="classify"
        )
    flog.fields(profile=str(profile), levels=len(trace)).debug("Classified form")
    return ClassificationResult(filtration, profile, trace)


def piece_label(result: ClassificationResult) -> Profile:
    return result.filtration.profile()


@dataclass
class BijectionReport:
    """Outcome of checking that every nilpotent form lies in exactly one ``eta``."""

    filtrations: int = 0
    forms: int = 0
    nilpotent: int = 0
    mismatches: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def verify_bijection(space: QuadraticSpace, force: bool = False) -> BijectionReport:
    """
    Compare :func:`classify` with a search over every Q-filtration.
    """
    flog = mlog.fields(func="verify_bijection")
    field = space.field
    rank_ = (space.dim - 1) // 2
    if not force and field.q > CENSUS_MAX_ORDER.get(rank_, 0):
        raise SizeError(
            f"checking every form of a {space.dim}-dimensional space over {field}",
            context="bijection",
        )
    filtrations = enumerate_filtrations(space)
    splittings: list[tuple[QFiltration, OGoodGrading]] = []
    for filtration in filtrations:
        try:
            splittings.append((filtration, split_filtration(filtration)))
        except NotOGood as exc:
            raise InternalInvariantViolation(str(exc), context="bijection") from exc
    report = BijectionReport(filtrations=len(filtrations))
    for form in iter_forms(space):
        report.forms += 1
        if not is_nilpotent(form):
            continue
        report.nilpotent += 1
        hits = [f for f, grading in splittings if in_eta(f, form, grading)]
        answer = classify(form).filtration
        if len(hits) != 1 or hits[0] != answer:
            report.mismatches.append(
                f"form {form.lower().tolist()}: {len(hits)} filtrations contain it,"
                f" classify gives {answer.profile()}"
            )
    flog.fields(
        forms=report.forms, nilpotent=report.nilpotent, mismatches=len(report.mismatches)
    ).info("Checked bijection")
    return report


__all__ = (
    "BijectionReport",
    "ClassificationResult",
    "TraceRecord",
    "classify",
    "compute_H",
    "piece_label",
    "verify_bijection",
    "weight_filtration",
)
