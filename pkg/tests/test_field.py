# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import numpy as np
import pytest

from nilpiece.exceptions import (
    CharacteristicError,
    ConstructionError,
    DivideByZero,
    FieldMismatch,
    SizeError,
)
from nilpiece.field import Field, arith, field_create, is_irreducible, sqrt_char2

FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 8)]


@pytest.mark.parametrize("p, k", FIELDS)
def test_field_axioms(p: int, k: int):
    field = field_create(p, k)
    assert field.q == p**k
    elements = field.elements()
    # additive group
    assert np.all(field.add(elements, field.neg(elements)) == 0)
    assert np.all(field.add(elements[:, None], elements[None, :]) == field.add(
        elements[None, :], elements[:, None]
    ))
    # multiplicative inverses
    nonzero = elements[1:]
    assert np.all(field.mul(nonzero, field.inv(nonzero)) == 1)
    # distributivity on a sample
    a, b, c = elements[:, None, None], elements[None, :, None], elements[None, None, :]
    if field.q <= 9:
        left = field.mul(a, field.add(b, c))
        right = field.add(field.mul(a, b), field.mul(a, c))
        assert np.array_equal(left, right)


@pytest.mark.parametrize("p, k", FIELDS)
def test_primitive_element(p: int, k: int):
    field = field_create(p, k)
    generator = field.primitive_element()
    assert field.multiplicative_order(generator.value) == field.q - 1


def test_gf4_packing(gf4: Field):
    omega = gf4.element(2)
    assert omega.coefficients == (0, 1)
    assert gf4.element((0, 1)) == omega
    assert (omega * omega).value == 3
    assert omega * omega == omega + 1
    assert (omega**3).value == 1
    assert omega.inverse().value == 3
    assert (omega / omega).value == 1


def test_gf3_arithmetic(gf3: Field):
    two = gf3.element(2)
    assert (two * two).value == 1
    assert (two + two).value == 1
    assert (-two).value == 1
    assert two.inverse() == two
    assert (two**-1) == two


@pytest.mark.parametrize(
    "op, expected",
    [
        pytest.param("add", 1, id="add"),
        pytest.param("sub", 1, id="sub"),
        pytest.param("mul", 1, id="mul"),
        pytest.param("div", 3, id="div"),
    ],
)
def test_arith(gf4: Field, op: str, expected: int):
    assert arith(gf4.element(2), gf4.element(3), op).value == expected


def test_arith_unknown_operation(gf4: Field):
    with pytest.raises(ValueError, match="unknown field operation"):
        arith(gf4.element(1), gf4.element(1), "pow")


@pytest.mark.parametrize("p, k", [(2, 1), (2, 2), (2, 3), (2, 8)])
def test_sqrt_char2(p: int, k: int):
    field = field_create(p, k)
    elements = field.elements()
    roots = field.sqrt(elements)
    assert np.array_equal(field.mul(roots, roots), elements)
    assert sorted(roots.tolist()) == elements.tolist()


def test_sqrt_gf4(gf4: Field):
    assert sqrt_char2(gf4.element(2)).value == 3
    assert gf4.element(3).sqrt().value == 2


def test_sqrt_odd_characteristic(gf3: Field):
    with pytest.raises(CharacteristicError):
        gf3.element(2).sqrt()


def test_divide_by_zero(gf3: Field):
    with pytest.raises(DivideByZero):
        gf3.element(1) / gf3.element(0)
    with pytest.raises(DivideByZero):
        gf3.multiplicative_order(0)


def test_field_mismatch(gf2: Field, gf4: Field):
    with pytest.raises(FieldMismatch):
        gf2.element(1) + gf4.element(1)


@pytest.mark.parametrize(
    "p, k, modulus, error",
    [
        pytest.param(4, 1, None, ConstructionError, id="not-prime"),
        pytest.param(2, 0, None, ConstructionError, id="degree-zero"),
        pytest.param(2, 9, None, SizeError, id="too-large"),
        pytest.param(2, 2, (1, 0, 1), ConstructionError, id="reducible"),
        pytest.param(2, 2, (1, 1, 0), ConstructionError, id="not-monic"),
        pytest.param(3, 2, (1, 3, 1), ConstructionError, id="coefficient-range"),
        pytest.param(11, 2, None, ConstructionError, id="no-default"),
    ],
)
def test_bad_construction(p, k, modulus, error):
    with pytest.raises(error):
        field_create(p, k, modulus)


def test_element_out_of_range(gf4: Field):
    with pytest.raises(ConstructionError):
        gf4.element(4)
    with pytest.raises(ConstructionError):
        gf4.element((0, 2))


def test_equality_and_hash():
    assert field_create(2, 2) == field_create(2, 2, (1, 1, 1))
    assert hash(field_create(3, 2)) == hash(field_create(3, 2))
    assert field_create(2, 1) != field_create(2, 2)
    assert str(field_create(2, 3)) == "GF(8)"


def test_field_is_immutable(gf2: Field):
    with pytest.raises(AttributeError):
        gf2.p = 3  # type: ignore[misc]


@pytest.mark.parametrize(
    "modulus, p, expected",
    [
        pytest.param((1, 1, 1), 2, True, id="x2+x+1"),
        pytest.param((1, 0, 1), 2, False, id="x2+1"),
        pytest.param((1, 1, 0, 1), 2, True, id="x3+x+1"),
        pytest.param((1, 0, 1), 3, True, id="x2+1-mod3"),
        pytest.param((1, 0, 1), 5, False, id="x2+1-mod5"),
    ],
)
def test_is_irreducible(modulus, p, expected):
    assert is_irreducible(modulus, p) is expected


def test_matmul_gf4(gf4: Field):
    a = [[2, 1], [0, 3]]
    identity = [[1, 0], [0, 1]]
    assert np.array_equal(gf4.matmul(a, identity), np.asarray(a))
    assert gf4.matvec(a, [1, 1]).tolist() == [3, 3]
