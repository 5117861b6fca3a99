# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

from pathlib import Path

import pytest

from nilpiece.field import Field, field_create
from nilpiece.quadspace import AlternatingForm, QuadraticSpace

HERE = Path(__file__).resolve().parent
TEST_DATA = HERE / "test_data"


@pytest.fixture
def test_data_path() -> Path:
    return TEST_DATA


@pytest.fixture
def gf2() -> Field:
    return field_create(2)


@pytest.fixture
def gf3() -> Field:
    return field_create(3)


@pytest.fixture
def gf4() -> Field:
    return field_create(2, 2)


@pytest.fixture
def space3(gf2: Field) -> QuadraticSpace:
    """The standard 3-dimensional space over GF(2)."""
    return QuadraticSpace.standard(gf2, 1)


@pytest.fixture
def space5(gf2: Field) -> QuadraticSpace:
    return QuadraticSpace.standard(gf2, 2)


@pytest.fixture
def regular_form(space3: QuadraticSpace) -> AlternatingForm:
    """``B(e_{-1}, e_0) = 1``, the regular nilpotent form of dimension 3."""
    return AlternatingForm.from_lower(space3, [1, 0, 0])
