# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import random

import numpy as np
import pytest

from nilpiece.exceptions import DivideByZero, NotWellDefined, SubspaceError
from nilpiece.field import Field, field_create
from nilpiece.linalg import (
    Subspace,
    complement,
    determinant,
    determinants,
    image,
    inverse,
    is_nilpotent_matrix,
    kernel,
    perp,
    quotient,
    rank,
    rref,
    solve,
    subspace_ops,
    upper_triangular,
)


def test_rref_gf3(gf3: Field):
    reduced, r = rref(gf3, [[1, 2], [2, 1]])
    assert r == 1
    assert reduced.tolist() == [[1, 2], [0, 0]]


def test_rref_gf4(gf4: Field):
    # omega * (1, omega) = (omega, omega + 1)
    reduced, r = rref(gf4, [[1, 2], [2, 3]])
    assert r == 1
    assert reduced[0].tolist() == [1, 2]


@pytest.mark.parametrize(
    "p, matrix, expected",
    [
        pytest.param(2, [[1, 1], [1, 1]], 1, id="gf2-rank1"),
        pytest.param(2, [[1, 0, 1], [0, 1, 1], [1, 1, 0]], 2, id="gf2-dependent"),
        pytest.param(3, [[1, 1], [1, 2]], 2, id="gf3-full"),
        pytest.param(5, [[0, 0], [0, 0]], 0, id="zero"),
    ],
)
def test_rank(p: int, matrix, expected: int):
    assert rank(field_create(p), matrix) == expected


def test_kernel(gf2: Field):
    basis = kernel(gf2, [[1, 1, 0], [0, 1, 1]])
    assert basis.tolist() == [[1, 1, 1]]
    assert kernel(gf2, np.eye(3, dtype=np.int64)).shape == (0, 3)


def test_solve(gf2: Field, gf3: Field):
    assert solve(gf2, [[1, 1]], [1]).tolist() == [1, 0]
    assert solve(gf2, [[1, 1], [1, 1]], [1, 0]) is None
    x = solve(gf3, [[1, 1], [1, 2]], [0, 1])
    assert gf3.matvec([[1, 1], [1, 2]], x).tolist() == [0, 1]


@pytest.mark.parametrize("p, k", [(2, 1), (2, 2), (3, 1), (5, 1)])
def test_inverse(p: int, k: int):
    field = field_create(p, k)
    rng = random.Random(7)
    for _ in range(20):
        mat = np.array(
            [[rng.randrange(field.q) for _ in range(3)] for _ in range(3)], dtype=np.int64
        )
        if determinant(field, mat) == 0:
            with pytest.raises(DivideByZero):
                inverse(field, mat)
            continue
        inv = inverse(field, mat)
        assert np.array_equal(field.matmul(mat, inv), np.eye(3, dtype=np.int64))


def test_determinant(gf3: Field):
    assert determinant(gf3, [[1, 2], [1, 1]]) == 2
    assert determinant(gf3, [[0, 1], [1, 0]]) == 2
    assert determinant(gf3, [[1, 2], [2, 1]]) == 0


def test_determinants_match_elimination(gf4: Field):
    rng = random.Random(3)
    mats = np.array(
        [[[rng.randrange(4) for _ in range(3)] for _ in range(3)] for _ in range(25)],
        dtype=np.int64,
    )
    stacked = determinants(gf4, mats)
    assert stacked.tolist() == [determinant(gf4, m) for m in mats]


def test_is_nilpotent_matrix(gf2: Field):
    assert is_nilpotent_matrix(gf2, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert not is_nilpotent_matrix(gf2, [[1, 0], [0, 0]])


def test_subspace_lattice(gf2: Field):
    u = Subspace.span(gf2, 3, [[1, 0, 0], [0, 1, 0]])
    w = Subspace.span(gf2, 3, [[0, 1, 0], [0, 0, 1]])
    assert (u + w).dim == 3
    meet = u & w
    assert meet == Subspace.span(gf2, 3, [[0, 1, 0]])
    assert meet <= u
    assert not u <= w
    assert u.contains([1, 1, 0])
    assert not u.contains([0, 0, 1])
    assert subspace_ops(u, w, "sum") == Subspace.whole(gf2, 3)
    assert subspace_ops(u, w, "intersect") == meet
    assert subspace_ops(u, meet, "contains") is True
    assert subspace_ops(u, u, "equals") is True
    with pytest.raises(ValueError):
        subspace_ops(u, w, "union")


def test_subspace_equality_ignores_basis_choice(gf3: Field):
    a = Subspace.span(gf3, 2, [[1, 1]])
    b = Subspace.span(gf3, 2, [[2, 2]])
    assert a == b
    assert hash(a) == hash(b)


def test_subspace_ambient_mismatch(gf2: Field, gf3: Field):
    with pytest.raises(SubspaceError):
        Subspace.whole(gf2, 3) + Subspace.whole(gf2, 2)
    with pytest.raises(SubspaceError):
        Subspace.whole(gf2, 2) & Subspace.whole(gf3, 2)


def test_apply_and_coordinates(gf2: Field):
    line = Subspace.span(gf2, 3, [[1, 0, 0]])
    shift = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    assert line.apply(shift) == Subspace.span(gf2, 3, [[0, 1, 0]])
    plane = Subspace.span(gf2, 3, [[1, 0, 1], [0, 1, 1]])
    assert plane.coordinates([1, 1, 0]).tolist() == [1, 1]
    with pytest.raises(SubspaceError):
        plane.coordinates([0, 0, 1])


def test_image(gf2: Field):
    assert image(gf2, [[1, 1], [0, 0], [1, 1]]) == Subspace.span(gf2, 3, [[1, 0, 1]])


def test_perp(gf2: Field):
    gram = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    line = Subspace.span(gf2, 3, [[1, 0, 0]])
    assert perp(line, gram) == Subspace.span(gf2, 3, [[1, 0, 0], [0, 0, 1]])


def test_complement(gf3: Field):
    whole = Subspace.whole(gf3, 3)
    line = Subspace.span(gf3, 3, [[1, 1, 1]])
    for rng in (None, random.Random(5)):
        other = complement(line, whole, rng)
        assert other.dim == 2
        assert (other & line).dim == 0
    with pytest.raises(SubspaceError):
        complement(whole, line)


def test_complement_takes_echelon_rows(gf2: Field):
    plane = Subspace.span(gf2, 3, [[1, 1, 0], [0, 0, 1]])
    assert plane.basis.tolist() == [[1, 1, 0], [0, 0, 1]]
    line = Subspace.span(gf2, 3, [[1, 1, 1]])
    assert complement(line, plane) == Subspace.span(gf2, 3, [[1, 1, 0]])
    line = Subspace.span(gf2, 3, [[1, 1, 0]])
    assert complement(line, plane) == Subspace.span(gf2, 3, [[0, 0, 1]])
    whole = Subspace.whole(gf2, 3)
    assert complement(line, whole) == Subspace.span(gf2, 3, [[1, 0, 0], [0, 0, 1]])


def test_quotient(gf2: Field):
    whole = Subspace.whole(gf2, 3)
    radical = Subspace.span(gf2, 3, [[0, 0, 1]])
    quo = quotient(whole, radical)
    assert quo.dim == 2
    for vector in ([1, 0, 1], [0, 1, 0]):
        coords = quo.project(vector)
        lifted = quo.lift(coords)
        assert radical.contains(gf2.sub(lifted, vector))
    assert quo.lift_subspace(Subspace.zero(gf2, 2)) == radical
    assert quo.project_subspace(whole).dim == 2
    with pytest.raises(SubspaceError):
        quotient(radical, whole)


def test_descend_form(gf2: Field):
    whole = Subspace.whole(gf2, 3)
    radical = Subspace.span(gf2, 3, [[0, 0, 1]])
    quo = quotient(whole, radical)
    hyperbolic = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    descended = quo.descend_form(hyperbolic)
    assert rank(gf2, descended) == 2
    with pytest.raises(NotWellDefined):
        quo.descend_form([[0, 0, 1], [0, 0, 0], [1, 0, 0]])


def test_descend_quadratic(gf2: Field):
    whole = Subspace.whole(gf2, 3)
    radical = Subspace.span(gf2, 3, [[0, 0, 1]])
    quo = quotient(whole, radical)
    # x y + z^2 does not vanish on the radical
    with pytest.raises(NotWellDefined):
        quo.descend_quadratic([[0, 1, 0], [0, 0, 0], [0, 0, 1]])
    descended = quo.descend_quadratic([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    assert descended.shape == (2, 2)


def test_descend_map(gf2: Field):
    whole = Subspace.whole(gf2, 3)
    line = Subspace.span(gf2, 3, [[0, 0, 1]])
    quo = quotient(whole, line)
    lower_shift = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    with pytest.raises(NotWellDefined):
        quo.descend_map([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    induced = quo.descend_map(lower_shift)
    assert is_nilpotent_matrix(gf2, induced)


def test_upper_triangular(gf3: Field):
    folded = upper_triangular(gf3, [[1, 1], [2, 2]])
    assert folded.tolist() == [[1, 0], [0, 2]]
