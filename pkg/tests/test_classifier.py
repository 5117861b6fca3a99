# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import random
from collections import Counter

import pytest

from nilpiece.classifier import (
    classify,
    compute_H,
    piece_label,
    verify_bijection,
    weight_filtration,
)
from nilpiece.exceptions import NotNilpotent, SizeError, ZeroInput
from nilpiece.field import Field, field_create
from nilpiece.grading import Profile, QFiltration, in_eta, standard_filtration
from nilpiece.nilcone import adjoint_map, extract_chain, is_nilpotent
from nilpiece.properties import equivariance_mismatches, u0_independence_mismatches
from nilpiece.quadspace import AlternatingForm, QuadraticSpace, iter_forms

REGULAR = Profile.from_mapping({0: 1, 2: 1})


def test_classify_regular(space3: QuadraticSpace, regular_form: AlternatingForm):
    result = classify(regular_form)
    assert result.profile.label == "0:1,2:1"
    assert result.profile.pairs() == [[0, 1], [2, 1]]
    assert result.filtration == standard_filtration(space3, REGULAR)
    assert piece_label(result) == REGULAR
    assert result.trace == [
        {
            "case": "m-large",
            "dim": 3,
            "m": 1,
            "lambda1": 0,
            "l1": 0,
            "rho_zero": True,
            "n": 2,
        }
    ]


def test_classify_zero(space3: QuadraticSpace):
    result = classify(AlternatingForm.zero(space3))
    assert result.filtration == QFiltration.trivial(space3)
    assert result.profile.label == "0:3"
    assert result.trace == []


def test_classify_not_nilpotent(space3: QuadraticSpace):
    with pytest.raises(NotNilpotent):
        classify(AlternatingForm.from_lower(space3, [0, 1, 0]))


def test_compute_h_regular(space3: QuadraticSpace, regular_form: AlternatingForm):
    h, case, n = compute_H(extract_chain(regular_form), regular_form)
    assert (case, n) == ("m-large", 2)
    assert h == space3.span([[0, 1, 0], [0, 0, 1]])


def test_compute_h_zero(space3: QuadraticSpace):
    zero = AlternatingForm.zero(space3)
    with pytest.raises(ZeroInput):
        compute_H(extract_chain(zero), zero)


# Forms on the standard space of rank N over GF(2), given by their nonzero
# entries B(x_i, x_j).  Apart from the m = 0 form, e_0 pairs with e_{-N} only,
# so v = (e_N, e_0) and m = 1, and the rest is B(w, w') = beta(T w, w') for a
# nilpotent T on the span of e_{+-1} .. e_{+-(N-1)}.
@pytest.mark.parametrize(
    "N, pairs, invariants, case, n",
    [
        pytest.param(2, {(0, 3): 1}, (0, 2, 2), "m-zero", 1, id="m-zero"),
        pytest.param(3, {(3, 0): 1, (1, 4): 1}, (1, 2, 1), "m-large", 2, id="m-large"),
        # T e_-2 = e_-1 + e_1 with Q(e_-1 + e_1) = 1
        pytest.param(
            3, {(3, 0): 1, (1, 4): 1, (1, 2): 1}, (1, 2, 2), "window", 2, id="window"
        ),
        pytest.param(
            4,
            {(4, 0): 1, (1, 6): 1, (2, 5): 1, (2, 3): 1},
            (1, 3, 3),
            "window",
            3,
            id="window-odd-top",
        ),
        pytest.param(
            4, {(4, 0): 1, (1, 6): 1, (2, 5): 1}, (1, 3, 2), "boundary", 2, id="boundary"
        ),
        pytest.param(
            5,
            {(5, 0): 1, (1, 8): 1, (2, 7): 1, (3, 6): 1},
            (1, 4, 3),
            "rho-zero",
            3,
            id="rho-zero",
        ),
        # Jordan blocks 4, 4, 3, 3 with T^2 e_-3 = e_-1 + e_1
        pytest.param(
            8,
            {(8, 0): 1, (1, 14): 1, (2, 13): 1, (3, 12): 1, (5, 10): 1, (6, 9): 1, (6, 7): 1},
            (1, 4, 3),
            "rho-nonzero",
            3,
            id="rho-nonzero",
        ),
    ],
)
def test_compute_h_cases(gf2: Field, N, pairs, invariants, case, n):
    space = QuadraticSpace.standard(gf2, N)
    form = AlternatingForm.from_pairs(space, pairs)
    assert is_nilpotent(form)
    chain = extract_chain(form)
    assert (chain.m, chain.lambda1, chain.l1) == invariants
    assert chain.rho_zero == (case != "rho-nonzero")
    _, found_case, found_n = compute_H(chain, form)
    assert (found_case, found_n) == (case, n)
    result = classify(form)
    assert result.filtration.top == n
    assert result.trace[0]["case"] == case


def test_weight_filtration_odd(gf3: Field):
    space = QuadraticSpace.standard(gf3, 1)
    form = AlternatingForm.from_pairs(space, {(0, 1): 1})
    filtration = weight_filtration(space, adjoint_map(form))
    assert filtration == standard_filtration(space, REGULAR)
    assert classify(form).profile == REGULAR


@pytest.mark.parametrize(
    "p, k, N, expected",
    [
        pytest.param(2, 1, 1, {"0:3": 1, "0:1,2:1": 3}, id="gf2-dim3"),
        pytest.param(3, 1, 1, {"0:3": 1, "0:1,2:1": 8}, id="gf3-dim3"),
        pytest.param(2, 2, 1, {"0:3": 1, "0:1,2:1": 15}, id="gf4-dim3"),
    ],
)
def test_classification_tally(p, k, N, expected):
    space = QuadraticSpace.standard(field_create(p, k), N)
    tally = Counter(
        classify(form).profile.label for form in iter_forms(space) if is_nilpotent(form)
    )
    assert dict(tally) == expected


def test_classification_ignores_random_choices(space5: QuadraticSpace):
    rng = random.Random(2024)
    for form in iter_forms(space5):
        if not is_nilpotent(form):
            continue
        plain = classify(form)
        assert classify(form, rng).filtration == plain.filtration
        assert in_eta(plain.filtration, form)


@pytest.mark.parametrize("seed", [3, 17])
def test_chain_choices_keep_invariants(space5: QuadraticSpace, seed: int):
    assert u0_independence_mismatches(space5, random.Random(seed)) == []


@pytest.mark.parametrize("p", [2, 3])
def test_classify_is_equivariant_dim3(p: int):
    space = QuadraticSpace.standard(field_create(p), 1)
    assert equivariance_mismatches(space) == []


def test_classify_is_equivariant_dim5(space5: QuadraticSpace):
    rng = random.Random(31)
    assert equivariance_mismatches(space5, rng=rng, samples=40) == []


@pytest.mark.parametrize("p", [2, 3])
def test_verify_bijection_dim3(p: int):
    space = QuadraticSpace.standard(field_create(p), 1)
    report = verify_bijection(space)
    assert report.passed
    assert report.forms == p**3
    assert report.nilpotent == p**2
    assert report.filtrations == p + 2


@pytest.mark.slow
def test_verify_bijection_dim5(space5: QuadraticSpace):
    report = verify_bijection(space5)
    assert report.mismatches == []
    assert report.nilpotent == 256


def test_verify_bijection_size_guard():
    space = QuadraticSpace.standard(field_create(2, 5), 1)
    with pytest.raises(SizeError):
        verify_bijection(space)
