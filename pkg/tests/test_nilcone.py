# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import random

import numpy as np
import pytest

from nilpiece.exceptions import CharacteristicError
from nilpiece.field import Field, field_create
from nilpiece.nilcone import (
    adjoint_map,
    extract_chain,
    induced_pair,
    is_nilpotent,
    v_chain,
    v_star_pair,
)
from nilpiece.properties import chain_sequences, chain_uniqueness_mismatches, oracle_mismatches
from nilpiece.quadspace import AlternatingForm, QuadraticSpace, iter_forms


def test_v_chain_regular(regular_form: AlternatingForm):
    assert v_chain(regular_form).tolist() == [[0, 0, 1], [0, 1, 0]]


def test_v_chain_zero(space3: QuadraticSpace):
    assert v_chain(AlternatingForm.zero(space3)).tolist() == [[0, 1, 0]]


def test_v_chain_breaks_off(space3: QuadraticSpace):
    # B(e_1, e_-1) = 1 sends the chain outside the image of beta
    form = AlternatingForm.from_lower(space3, [0, 1, 0])
    assert not is_nilpotent(form)


def test_v_chain_odd_characteristic(gf3: Field):
    space = QuadraticSpace.standard(gf3, 1)
    with pytest.raises(CharacteristicError):
        v_chain(AlternatingForm.zero(space))
    with pytest.raises(CharacteristicError):
        v_star_pair(AlternatingForm.zero(space))


def test_extract_chain_regular(regular_form: AlternatingForm):
    chain = extract_chain(regular_form)
    assert chain is not None
    assert chain.m == 1
    assert chain.W.dim == 0
    assert chain.u.tolist() == [[1, 0, 0]]
    assert (chain.lambda1, chain.l1, chain.rho_zero) == (0, 0, True)
    assert chain.t_nilpotent


def test_extract_chain_zero(space3: QuadraticSpace):
    chain = extract_chain(AlternatingForm.zero(space3))
    assert chain is not None
    assert chain.m == 0
    assert chain.W.dim == 2
    assert (chain.lambda1, chain.f, chain.l1, chain.rho_zero) == (1, 1, 1, True)
    assert chain.t_rows(1).shape == (2, 3)
    assert not np.any(chain.t_rows(1))


def test_extract_chain_with_rng(space5: QuadraticSpace):
    rng = random.Random(11)
    for form in iter_forms(space5, 0, 256):
        plain = extract_chain(form)
        perturbed = extract_chain(form, rng)
        if plain is not None and perturbed is not None:
            assert plain.m == perturbed.m
            assert plain.lambda1 == perturbed.lambda1
            assert plain.l1 == perturbed.l1
            assert plain.rho_zero == perturbed.rho_zero


def test_induced_pair_regular(regular_form: AlternatingForm):
    chain = extract_chain(regular_form)
    pair = induced_pair(chain, regular_form)
    assert pair.quotient.dim == 0
    assert pair.v_star.tolist() == [[0, 0, 1]]
    assert pair.T.shape == (0, 0)
    assert v_star_pair(regular_form).quotient.dim == 0


@pytest.mark.parametrize(
    "p, k, N, expected",
    [
        pytest.param(2, 1, 1, 4, id="gf2-dim3"),
        pytest.param(3, 1, 1, 9, id="gf3-dim3"),
        pytest.param(2, 2, 1, 16, id="gf4-dim3"),
    ],
)
def test_nilpotent_count(p, k, N, expected):
    space = QuadraticSpace.standard(field_create(p, k), N)
    assert sum(is_nilpotent(form) for form in iter_forms(space)) == expected


def test_adjoint_map(gf3: Field):
    space = QuadraticSpace.standard(gf3, 1)
    form = AlternatingForm.from_lower(space, [1, 2, 0])
    a = adjoint_map(form)
    assert np.array_equal(gf3.matmul(a.T, space.gram), form.gram)


@pytest.mark.parametrize(
    "p, k, N",
    [
        pytest.param(2, 1, 1, id="gf2-dim3"),
        pytest.param(3, 1, 1, id="gf3-dim3"),
        pytest.param(2, 2, 1, id="gf4-dim3"),
        pytest.param(2, 1, 2, id="gf2-dim5", marks=pytest.mark.slow),
    ],
)
def test_good_basis_oracle_agrees(p: int, k: int, N: int):
    space = QuadraticSpace.standard(field_create(p, k), N)
    assert oracle_mismatches(space) == []


@pytest.mark.parametrize("k", [1, 2])
def test_v_chain_is_the_only_chain(k: int):
    space = QuadraticSpace.standard(field_create(2, k), 1)
    assert chain_uniqueness_mismatches(space) == []


def test_chain_sequences_regular(regular_form: AlternatingForm):
    (found,) = chain_sequences(regular_form)
    assert np.array_equal(found, v_chain(regular_form))
