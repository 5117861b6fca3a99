# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Properties that must hold on every input of a small space, checked by
enumeration.

Each ``*_mismatches`` function returns the counterexamples it found as
strings, so an empty list means the property holds.  The test suite and the
selftest share them.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator

import numpy as np
from antsibull_core.logging import get_module_logger

from .classifier import ClassificationResult, classify, piece_label
from .exceptions import InternalInvariantViolation
from .field import Array
from .grading import (
    admissible_profiles,
    bar_conditions,
    bar_decomposition,
    bar_form,
    condition_a,
    condition_a_prime,
    condition_b_kernel_form,
    condition_b_prime,
    eta_vanishing,
    graded_forms,
    in_S2_0,
    split_filtration,
    standard_filtration,
    standard_grading,
)
from .group_oracle import IsometryGroup, enumerate_isometries
from .linalg import rank
from .nilcone import extract_chain, good_basis_oracle, is_nilpotent, v_chain
from .quadspace import AlternatingForm, QuadraticSpace, all_vectors, iter_forms

mlog = get_module_logger(__name__)


def _describe(form: AlternatingForm) -> str:
    return f"form {form.lower().tolist()}"


def nilpotent_forms(space: QuadraticSpace) -> Iterator[AlternatingForm]:
    return (form for form in iter_forms(space) if is_nilpotent(form))


def _log(name: str, space: QuadraticSpace, mismatches: list[str]) -> list[str]:
    mlog.fields(
        func=name, dim=space.dim, q=space.field.q, mismatches=len(mismatches)
    ).debug("Checked property")
    return mismatches


def equivariance_mismatches(
    space: QuadraticSpace,
    group: IsometryGroup | None = None,
    rng: random.Random | None = None,
    samples: int | None = None,
) -> list[str]:
    """
    ``classify(g . B)`` against ``g`` applied to ``classify(B)``, and the
    piece labels of ``B`` and ``g . B``.

    Every pair of a group element and a nilpotent form is checked, unless
    ``samples`` is given: then that many pairs are drawn with ``rng``.
    """
    if group is None:
        group = enumerate_isometries(space, jobs=1)
    forms = list(nilpotent_forms(space))
    pairs: Iterator[tuple[int, int]]
    if samples is None:
        pairs = itertools.product(range(group.order), range(len(forms)))
    else:
        rng = rng or random.Random(0)
        pairs = iter(
            [(rng.randrange(group.order), rng.randrange(len(forms))) for _ in range(samples)]
        )
    known: dict[int, ClassificationResult] = {}
    mismatches = []
    for g_index, f_index in pairs:
        g = group.elements[g_index]
        form = forms[f_index]
        if f_index not in known:
            known[f_index] = classify(form)
        base = known[f_index]
        moved = classify(form.transport(g))
        if moved.filtration != base.filtration.transport(g):
            mismatches.append(
                f"{_describe(form)}, element {g_index}: the filtration does not move with g"
            )
        if piece_label(moved) != piece_label(base):
            mismatches.append(
                f"{_describe(form)}, element {g_index}: piece {piece_label(moved)}"
                f" instead of {piece_label(base)}"
            )
    return _log("equivariance_mismatches", space, mismatches)


def grading_independence_mismatches(
    space: QuadraticSpace, rng: random.Random, splits: int = 2
) -> list[str]:
    """
    Whether ``in_S2_0`` of the graded form depends on the grading chosen to
    split a filtration.  The deterministic splitting and ``splits`` random
    ones are compared on every form vanishing where ``eta`` requires it.
    """
    mismatches = []
    for profile in admissible_profiles(space.dim):
        filtration = standard_filtration(space, profile)
        gradings = [split_filtration(filtration)]
        gradings += [split_filtration(filtration, rng) for _ in range(splits)]
        for form in iter_forms(space):
            if not eta_vanishing(filtration, form):
                continue
            verdicts = [
                in_S2_0(grading, bar_form(filtration, grading, form)) for grading in gradings
            ]
            if len(set(verdicts)) > 1:
                mismatches.append(f"{profile}, {_describe(form)}: verdicts {verdicts}")
    return _log("grading_independence_mismatches", space, mismatches)


def condition_a_mismatches(space: QuadraticSpace) -> list[str]:
    """
    Condition (a) against its reformulation on every graded form of every
    admissible profile: the two bar conditions in characteristic 2, the
    isomorphisms ``A^{2n}: V^{-2n} -> V^{2n}`` otherwise.
    """
    mismatches = []
    for profile in admissible_profiles(space.dim):
        grading = standard_grading(space, profile)
        for form in graded_forms(grading):
            expected = condition_a(grading, form)
            if space.field.p == 2:
                try:
                    found = all(bar_conditions(bar_decomposition(grading, form), space))
                except InternalInvariantViolation as exc:
                    mismatches.append(f"{profile}, {_describe(form)}: {exc.message}")
                    continue
            else:
                found = condition_a_prime(grading, form)
            if found != expected:
                mismatches.append(f"{profile}, {_describe(form)}: (a) is {expected}")
    return _log("condition_a_mismatches", space, mismatches)


def condition_b_mismatches(space: QuadraticSpace) -> list[str]:
    """
    The kernel form version of condition (b) against the isomorphisms
    ``A^{2n-1}: V^{-2n+1} -> V^{2n-1}``.
    """
    mismatches = []
    for profile in admissible_profiles(space.dim):
        grading = standard_grading(space, profile)
        for form in graded_forms(grading):
            expected = condition_b_prime(grading, form)
            if condition_b_kernel_form(grading, form) != expected:
                mismatches.append(f"{profile}, {_describe(form)}: (b') is {expected}")
    return _log("condition_b_mismatches", space, mismatches)


def oracle_mismatches(space: QuadraticSpace) -> list[str]:
    """The good basis search against :func:`is_nilpotent` on every form."""
    mismatches = [
        f"{_describe(form)}: nilpotent is {is_nilpotent(form)}"
        for form in iter_forms(space)
        if good_basis_oracle(form) != is_nilpotent(form)
    ]
    return _log("oracle_mismatches", space, mismatches)


def chain_sequences(form: AlternatingForm) -> list[Array]:
    """
    Every linearly independent ``v_0 .. v_m`` with ``beta(v_m, -) = 0``,
    ``Q(v_m) = 1``, ``B(v_i, -) = beta(v_{i-1}, -)``, ``B(v_0, -) = 0`` and
    ``Q(v_i) = 0`` for ``i < m``, found by trying every vector at every step.
    """
    space = form.space
    field = space.field
    vectors = all_vectors(space)
    polar_rows = field.matmul(vectors, space.gram)
    form_rows = field.matmul(vectors, form.gram)
    q_values = space.q_rows(vectors)
    found: list[Array] = []

    def extend(chain: list[int]) -> None:
        last = form_rows[chain[-1]]
        if not np.any(last):
            found.append(vectors[chain[::-1]])
            return
        matches = np.flatnonzero(np.all(polar_rows == last, axis=1) & (q_values == 0))
        for index in matches.tolist():
            candidate = chain + [index]
            if rank(field, vectors[candidate]) == len(candidate):
                extend(candidate)

    starts = np.flatnonzero(~np.any(polar_rows, axis=1) & (q_values == 1))
    for start in starts.tolist():
        extend([start])
    return found


def chain_uniqueness_mismatches(space: QuadraticSpace) -> list[str]:
    """:func:`v_chain` against the exhaustive :func:`chain_sequences`."""
    mismatches = []
    for form in iter_forms(space):
        expected = v_chain(form)
        found = chain_sequences(form)
        if expected is None:
            if found:
                mismatches.append(f"{_describe(form)}: {len(found)} chains, none expected")
        elif len(found) != 1 or not np.array_equal(found[0], expected):
            mismatches.append(f"{_describe(form)}: {len(found)} chains")
    return _log("chain_uniqueness_mismatches", space, mismatches)


def u0_independence_mismatches(
    space: QuadraticSpace, rng: random.Random, rounds: int = 2
) -> list[str]:
    """
    Whether a random admissible ``u_0`` changes ``m``, ``lambda_1``, ``l_1``,
    the ``rho`` flag or the filtration (characteristic 2).
    """
    mismatches = []
    for form in nilpotent_forms(space):
        plain = extract_chain(form)
        base = classify(form).filtration
        if plain is None:
            mismatches.append(f"{_describe(form)}: no chain")
            continue
        invariants = (plain.m, plain.lambda1, plain.l1, plain.rho_zero)
        for _ in range(rounds):
            perturbed = extract_chain(form, rng)
            if perturbed is None or invariants != (
                perturbed.m,
                perturbed.lambda1,
                perturbed.l1,
                perturbed.rho_zero,
            ):
                mismatches.append(f"{_describe(form)}: chain invariants change")
            if classify(form, rng).filtration != base:
                mismatches.append(f"{_describe(form)}: filtration changes")
    return _log("u0_independence_mismatches", space, mismatches)


def bar_chain_lengths(form: AlternatingForm) -> tuple[int, int]:
    """
    ``m_bar`` of the graded form on the split filtration of ``form`` next to
    the chain length ``m`` of ``form`` itself (characteristic 2).
    """
    filtration = classify(form).filtration
    grading = split_filtration(filtration)
    data = bar_decomposition(grading, bar_form(filtration, grading, form))
    chain = extract_chain(form)
    if chain is None:
        raise InternalInvariantViolation("a nilpotent form has no chain", context="bar")
    return data.m_bar, chain.m


def bar_length_mismatches(space: QuadraticSpace) -> list[str]:
    """Nilpotent forms whose graded chain is longer than their own chain."""
    mismatches = []
    for form in nilpotent_forms(space):
        m_bar, m = bar_chain_lengths(form)
        if m_bar > m:
            mismatches.append(f"{_describe(form)}: m_bar={m_bar} exceeds m={m}")
    return _log("bar_length_mismatches", space, mismatches)


__all__ = (
    "bar_chain_lengths",
    "bar_length_mismatches",
    "chain_sequences",
    "chain_uniqueness_mismatches",
    "condition_a_mismatches",
    "condition_b_mismatches",
    "equivariance_mismatches",
    "grading_independence_mismatches",
    "nilpotent_forms",
    "oracle_mismatches",
    "u0_independence_mismatches",
)
