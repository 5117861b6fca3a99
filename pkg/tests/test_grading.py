# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import random

import pytest

from nilpiece.classifier import classify
from nilpiece.exceptions import CharacteristicError, NotGraded, NotInEta, NotOGood, SizeError
from nilpiece.field import Field, field_create
from nilpiece.grading import (
    Profile,
    QFiltration,
    admissible_profiles,
    bar_conditions,
    bar_decomposition,
    bar_form,
    condition_a,
    condition_a_prime,
    condition_b_kernel_form,
    condition_b_prime,
    enumerate_filtrations,
    eta_vanishing,
    graded_form_count,
    graded_forms,
    in_eta,
    in_S2_0,
    is_graded,
    split_filtration,
    standard_filtration,
    standard_grading,
)
from nilpiece.properties import (
    bar_chain_lengths,
    bar_length_mismatches,
    condition_a_mismatches,
    condition_b_mismatches,
    grading_independence_mismatches,
)
from nilpiece.quadspace import AlternatingForm, QuadraticSpace, iter_forms

REGULAR = Profile.from_mapping({0: 1, 2: 1})


def test_profile_basics():
    assert REGULAR.label == "0:1,2:1"
    assert REGULAR.pairs() == [[0, 1], [2, 1]]
    assert REGULAR.top == 2
    assert REGULAR.dim == 3
    assert REGULAR[-2] == 1
    assert REGULAR[1] == 0
    assert Profile.trivial(5).label == "0:5"
    assert Profile.from_mapping({0: 3, 2: 0}) == Profile.trivial(3)


@pytest.mark.parametrize(
    "mapping, dim, expected",
    [
        pytest.param({0: 1, 2: 1}, 3, True, id="regular"),
        pytest.param({0: 1, 1: 1}, 3, False, id="odd-multiplicity"),
        pytest.param({0: 1, 1: 2}, 5, True, id="even-multiplicity"),
        pytest.param({0: 1, 2: 2}, 5, False, id="not-decreasing"),
        pytest.param({0: 3}, 5, False, id="wrong-dim"),
    ],
)
def test_profile_admissible(mapping, dim, expected):
    assert Profile.from_mapping(mapping).is_admissible(dim) is expected


@pytest.mark.parametrize(
    "dim, labels",
    [
        pytest.param(3, ["0:3", "0:1,2:1"], id="dim3"),
        pytest.param(5, ["0:5", "0:1,1:2", "0:3,2:1", "0:1,2:1,4:1"], id="dim5"),
    ],
)
def test_admissible_profiles(dim, labels):
    assert [profile.label for profile in admissible_profiles(dim)] == labels


def test_standard_filtration(space3: QuadraticSpace):
    filtration = standard_filtration(space3, REGULAR)
    assert filtration.top == 2
    assert filtration.at(2) == space3.span([[0, 0, 1]])
    assert filtration.at(1) == filtration.at(2)
    assert filtration.at(0) == space3.span([[0, 1, 0], [0, 0, 1]])
    assert filtration.at(-1) == filtration.at(0)
    assert filtration.at(-2) == space3.whole()
    assert filtration.at(3).dim == 0
    assert filtration.profile() == REGULAR
    filtration.validate()


def test_trivial_filtration(space3: QuadraticSpace):
    trivial = QFiltration.trivial(space3)
    assert trivial.top == 0
    assert trivial.profile() == Profile.trivial(3)
    assert trivial == QFiltration.from_levels(space3, {})


def test_from_levels_rejects_non_isotropic(space3: QuadraticSpace):
    filtration = QFiltration.from_levels(
        space3, {1: space3.span([[0, 1, 0]]), 0: space3.whole()}
    )
    with pytest.raises(NotOGood, match="Q does not vanish"):
        filtration.validate()


def test_standard_grading_dim5(space5: QuadraticSpace):
    grading = standard_grading(space5, Profile.from_mapping({0: 1, 1: 2}))
    grading.validate()
    assert grading.piece(1) == space5.span([[0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    assert grading.piece(-1) == space5.span([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
    assert grading.piece(0) == space5.span([[0, 0, 1, 0, 0]])
    with pytest.raises(NotOGood):
        standard_grading(space5, Profile.from_mapping({0: 1, 2: 2}))


@pytest.mark.parametrize("seed", [None, 1, 2, 3])
def test_split_filtration(space5: QuadraticSpace, seed):
    rng = None if seed is None else random.Random(seed)
    for profile in admissible_profiles(5):
        filtration = standard_filtration(space5, profile)
        grading = split_filtration(filtration, rng)
        assert grading.profile() == profile
        assert grading.filtration() == filtration


def test_transport_filtration(space3: QuadraticSpace):
    filtration = standard_filtration(space3, REGULAR)
    # swaps e_-1 and e_1; an isometry of the standard space
    g = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    moved = filtration.transport(g)
    moved.validate()
    assert moved.at(2) == space3.span([[1, 0, 0]])
    assert moved.profile() == REGULAR


def test_regular_form_in_eta(space3: QuadraticSpace, regular_form: AlternatingForm):
    filtration = standard_filtration(space3, REGULAR)
    grading = split_filtration(filtration)
    assert eta_vanishing(filtration, regular_form)
    assert is_graded(grading, regular_form)
    assert bar_form(filtration, grading, regular_form) == regular_form
    assert condition_a(grading, regular_form)
    assert condition_b_prime(grading, regular_form)
    assert condition_b_kernel_form(grading, regular_form)
    assert in_S2_0(grading, regular_form)
    assert in_eta(filtration, regular_form)
    assert not in_eta(QFiltration.trivial(space3), regular_form)


def test_zero_form_in_trivial_eta(space3: QuadraticSpace):
    assert in_eta(QFiltration.trivial(space3), AlternatingForm.zero(space3))
    assert not in_eta(
        standard_filtration(space3, REGULAR), AlternatingForm.zero(space3)
    )


def test_eta_size(space3: QuadraticSpace):
    filtration = standard_filtration(space3, REGULAR)
    members = [form for form in iter_forms(space3) if in_eta(filtration, form)]
    assert len(members) == 1


def test_bar_form_outside_eta(space3: QuadraticSpace):
    filtration = QFiltration.trivial(space3)
    grading = split_filtration(filtration)
    form = AlternatingForm.from_lower(space3, [1, 0, 0])
    with pytest.raises(NotInEta):
        bar_form(filtration, grading, form)


def test_not_graded(space3: QuadraticSpace):
    grading = standard_grading(space3, REGULAR)
    form = AlternatingForm.from_lower(space3, [0, 1, 0])
    assert not is_graded(grading, form)
    with pytest.raises(NotGraded):
        condition_a(grading, form)


def test_graded_forms(space3: QuadraticSpace):
    grading = standard_grading(space3, REGULAR)
    assert graded_form_count(grading) == 2
    forms = list(graded_forms(grading))
    assert len(forms) == 2
    assert all(is_graded(grading, form) for form in forms)
    assert sum(in_S2_0(grading, form) for form in forms) == 1


def test_odd_characteristic_conditions(gf3: Field):
    space = QuadraticSpace.standard(gf3, 1)
    form = AlternatingForm.from_pairs(space, {(0, 1): 1})
    grading = standard_grading(space, REGULAR)
    assert condition_a_prime(grading, form)
    assert in_S2_0(grading, form)
    assert in_eta(standard_filtration(space, REGULAR), form)
    with pytest.raises(CharacteristicError):
        bar_decomposition(grading, form)


def test_condition_a_prime_char2(space3: QuadraticSpace, regular_form: AlternatingForm):
    with pytest.raises(CharacteristicError):
        condition_a_prime(standard_grading(space3, REGULAR), regular_form)


def test_bar_decomposition(space3: QuadraticSpace, regular_form: AlternatingForm):
    data = bar_decomposition(standard_grading(space3, REGULAR), regular_form)
    assert data.m_bar == 1
    assert data.v.tolist() == [[0, 0, 1], [0, 1, 0]]
    assert data.u.tolist() == [[1, 0, 0]]
    assert all(piece.dim == 0 for _, piece in data.w_pieces)
    assert bar_conditions(data, space3) == (True, True)


@pytest.mark.parametrize(
    "p, N",
    [
        pytest.param(2, 1, id="gf2-dim3"),
        pytest.param(2, 2, id="gf2-dim5"),
        pytest.param(3, 1, id="gf3-dim3"),
    ],
)
def test_open_condition_ignores_grading_choice(p: int, N: int):
    space = QuadraticSpace.standard(field_create(p), N)
    assert grading_independence_mismatches(space, random.Random(7)) == []


@pytest.mark.parametrize(
    "p, N",
    [
        pytest.param(2, 1, id="gf2-dim3"),
        pytest.param(2, 2, id="gf2-dim5"),
        pytest.param(3, 1, id="gf3-dim3"),
        pytest.param(3, 2, id="gf3-dim5"),
    ],
)
def test_condition_a_reformulations(p: int, N: int):
    assert condition_a_mismatches(QuadraticSpace.standard(field_create(p), N)) == []


@pytest.mark.parametrize("p", [2, 3])
def test_condition_b_kernel_form(p: int):
    space = QuadraticSpace.standard(field_create(p), 2)
    grading = standard_grading(space, Profile.from_mapping({0: 1, 1: 2}))
    # only B on V^-1 x V^-1 is free, and (b') asks for it to be nonzero
    verdicts = [condition_b_prime(grading, form) for form in graded_forms(grading)]
    assert len(verdicts) == p
    assert sum(verdicts) == p - 1
    assert condition_b_mismatches(space) == []


def test_bar_chain_shorter_than_chain(gf2: Field, space5: QuadraticSpace):
    assert bar_length_mismatches(space5) == []
    # Jordan blocks 3, 3 beside v = (e_4, e_0)
    space = QuadraticSpace.standard(gf2, 4)
    form = AlternatingForm.from_pairs(space, {(4, 0): 1, (1, 6): 1, (2, 5): 1, (2, 3): 1})
    assert bar_chain_lengths(form) == (0, 1)
    assert classify(form).profile.label == "0:1,1:2,3:2"


@pytest.mark.parametrize(
    "p, expected",
    [
        pytest.param(2, 4, id="gf2"),
        pytest.param(3, 5, id="gf3"),
    ],
)
def test_enumerate_filtrations(p: int, expected: int):
    space = QuadraticSpace.standard(field_create(p), 1)
    filtrations = enumerate_filtrations(space)
    assert len(filtrations) == expected
    assert filtrations[0] == QFiltration.trivial(space)
    assert {f.profile().label for f in filtrations[1:]} == {"0:1,2:1"}


def test_enumerate_filtrations_size_guard(gf2: Field):
    with pytest.raises(SizeError):
        enumerate_filtrations(QuadraticSpace.standard(gf2, 4))
