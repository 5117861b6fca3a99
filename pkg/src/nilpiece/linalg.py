# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Exact dense linear algebra over a :class:`~nilpiece.field.Field`.

Matrices are numpy arrays of packed field elements.  Linear maps act on
column vectors; subspaces are stored by their reduced row echelon basis, so
equal subspaces have identical stored bases.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .exceptions import DivideByZero, NotWellDefined, SubspaceError
from .field import Array, ArrayLike, Field


def _rref(field: Field, matrix: ArrayLike) -> tuple[Array, tuple[int, ...]]:
    mat = field.asarray(matrix).copy()
    if mat.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {mat.shape}")
    rows, cols = mat.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(mat[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            mat[[r, pivot]] = mat[[pivot, r]]
        mat[r] = field.mul(mat[r], field.inv(mat[r, c]))
        factors = mat[:, c].copy()
        factors[r] = 0
        mat = field.sub(mat, field.mul(factors[:, None], mat[r][None, :]))
        pivots.append(c)
        r += 1
    return mat, tuple(pivots)


def rref(field: Field, matrix: ArrayLike) -> tuple[Array, int]:
    """
    Reduced row echelon form and rank.
    """
    reduced, pivots = _rref(field, matrix)
    return reduced, len(pivots)


def rank(field: Field, matrix: ArrayLike) -> int:
    return len(_rref(field, matrix)[1])


def kernel(field: Field, matrix: ArrayLike) -> Array:
    """
    Basis (rows, reduced echelon form) of ``{x : M x = 0}``.
    """
    mat = field.asarray(matrix)
    cols = mat.shape[1]
    reduced, pivots = _rref(field, mat)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = field.neg(reduced[r, f])
    reduced_basis, kernel_pivots = _rref(field, basis)
    return reduced_basis[: len(kernel_pivots)]


def solve(field: Field, matrix: ArrayLike, rhs: ArrayLike) -> Array | None:
    """
    One solution of ``M x = b`` with all free variables set to zero, or
    ``None`` if the system is inconsistent.
    """
    mat = field.asarray(matrix)
    rhs = field.asarray(rhs)
    cols = mat.shape[1]
    augmented = np.concatenate([mat, rhs.reshape(-1, 1)], axis=1)
    reduced, pivots = _rref(field, augmented)
    if cols in pivots:
        return None
    solution = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        solution[pc] = reduced[r, -1]
    return solution


def inverse(field: Field, matrix: ArrayLike) -> Array:
    mat = field.asarray(matrix)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError(f"cannot invert a {mat.shape} matrix")
    augmented = np.concatenate([mat, np.eye(n, dtype=np.int64)], axis=1)
    reduced, pivots = _rref(field, augmented)
    if pivots[:n] != tuple(range(n)):
        raise DivideByZero("matrix is singular")
    return reduced[:, n:]


def determinant(field: Field, matrix: ArrayLike) -> int:
    mat = field.asarray(matrix).copy()
    n = mat.shape[0]
    det = 1
    for c in range(n):
        nonzero = np.nonzero(mat[c:, c])[0]
        if nonzero.size == 0:
            return 0
        pivot = c + int(nonzero[0])
        if pivot != c:
            mat[[c, pivot]] = mat[[pivot, c]]
            det = int(field.neg(det))
        det = int(field.mul(det, mat[c, c]))
        factors = field.mul(mat[c + 1 :, c], field.inv(mat[c, c]))
        mat[c + 1 :] = field.sub(
            mat[c + 1 :], field.mul(factors[:, None], mat[c][None, :])
        )
    return det


def determinants(field: Field, matrices: ArrayLike) -> Array:
    """
    Determinants of a stack of square matrices by the Leibniz expansion.
    """
    mats = field.asarray(matrices)
    n = mats.shape[-1]
    total = np.zeros(mats.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = np.ones(mats.shape[:-2], dtype=np.int64)
        for row, col in enumerate(perm):
            term = field.mul(term, mats[..., row, col])
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        total = field.sub(total, term) if inversions % 2 else field.add(total, term)
    return total


def matrix_power(field: Field, matrix: ArrayLike, exponent: int) -> Array:
    mat = field.asarray(matrix)
    result = np.eye(mat.shape[0], dtype=np.int64)
    for _ in range(exponent):
        result = field.matmul(result, mat)
    return result


def is_nilpotent_matrix(field: Field, matrix: ArrayLike) -> bool:
    mat = field.asarray(matrix)
    return not np.any(matrix_power(field, mat, mat.shape[0]))


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    A subspace of ``field^ambient`` stored by its reduced row echelon basis.
    """

    field: Field
    ambient: int
    basis: Array

    @classmethod
    def span(
        cls, field: Field, ambient: int, vectors: ArrayLike | Iterable[ArrayLike]
    ) -> Subspace:
        rows = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient)
        reduced, pivots = _rref(field, rows)
        basis = reduced[: len(pivots)]
        basis.setflags(write=False)
        return cls(field, ambient, basis)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> Subspace:
        return cls.span(field, ambient, np.zeros((0, ambient), dtype=np.int64))

    @classmethod
    def whole(cls, field: Field, ambient: int) -> Subspace:
        return cls.span(field, ambient, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check(self, other: Subspace) -> None:
        if other.field != self.field or other.ambient != self.ambient:
            raise SubspaceError(
                f"ambient {other.field}^{other.ambient} differs from"
                f" {self.field}^{self.ambient}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient == other.ambient
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ambient, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={self.basis.tolist()})"

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.span(
            self.field, self.ambient, np.concatenate([self.basis, other.basis])
        )

    def __and__(self, other: Subspace) -> Subspace:
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        stacked = np.concatenate([self.basis, self.field.neg(other.basis)])
        relations = kernel(self.field, stacked.T)
        return Subspace.span(
            self.field,
            self.ambient,
            self.field.matmul(relations[:, : self.dim], self.basis),
        )

    def contains_vector(self, vector: ArrayLike) -> bool:
        vector = self.field.asarray(vector).reshape(1, self.ambient)
        return rank(self.field, np.concatenate([self.basis, vector])) == self.dim

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return (self + other).dim == other.dim

    def contains(self, other: Subspace | ArrayLike) -> bool:
        if isinstance(other, Subspace):
            return other <= self
        return self.contains_vector(other)

    def apply(self, matrix: ArrayLike) -> Subspace:
        """
        Image of this subspace under the linear map ``v -> M v``.
        """
        mat = self.field.asarray(matrix)
        return Subspace.span(
            self.field, mat.shape[0], self.field.matmul(self.basis, mat.T)
        )

    def coordinates(self, vector: ArrayLike) -> Array:
        """
        Coefficients ``c`` with ``vector = c @ basis``.
        """
        coords = solve(self.field, self.basis.T, vector)
        if coords is None:
            raise SubspaceError(f"{list(vector)} is not in {self!r}")  # type: ignore[arg-type]
        return coords


def subspace_ops(left: Subspace, right: Subspace, op: str) -> Subspace | bool:
    if op == "sum":
        return left + right
    if op == "intersect":
        return left & right
    if op == "contains":
        return left.contains(right)
    if op == "equals":
        left._check(right)  # pylint: disable=protected-access
        return left == right
    raise ValueError(f"unknown subspace operation {op!r}")


def image(field: Field, matrix: ArrayLike) -> Subspace:
    """Column space of ``matrix``."""
    mat = field.asarray(matrix)
    return Subspace.span(field, mat.shape[0], mat.T)


def perp(subspace: Subspace, form: ArrayLike) -> Subspace:
    """
    ``{v : F(v, u) = 0 for all u in U}`` for the bilinear form with Gram
    matrix ``form``.
    """
    field = subspace.field
    gram = field.asarray(form)
    return Subspace(
        field,
        subspace.ambient,
        kernel(field, field.matmul(subspace.basis, gram.T)),
    )


def complement(
    subspace: Subspace, inside: Subspace, rng: random.Random | None = None
) -> Subspace:
    """
    A complement of ``subspace`` in ``inside``.

    Deterministically, the rows of the reduced row echelon basis of
    ``inside`` are taken greedily in order whenever they enlarge the span.
    For ``inside`` the whole space these are the standard basis vectors in
    index order.  With ``rng``, random vectors of ``inside`` are used instead.
    """
    if not subspace <= inside:
        raise SubspaceError("the subspace is not contained in the enclosing space")
    field = subspace.field
    chosen: list[Array] = []
    current = subspace
    if rng is None:
        candidates: Iterable[Array] = iter(inside.basis)
    else:
        candidates = (
            field.matmul(
                np.array([[rng.randrange(field.q) for _ in range(inside.dim)]]),
                inside.basis.reshape(-1, subspace.ambient),
            )[0]
            for _ in iter(int, 1)
        )
    for row in candidates:
        if current.dim == inside.dim:
            break
        if not current.contains_vector(row):
            chosen.append(row)
            current = current + Subspace.span(field, subspace.ambient, row)
    return Subspace.span(
        field, subspace.ambient, np.array(chosen, dtype=np.int64).reshape(-1, subspace.ambient)
    )


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """
    The quotient ``ambient / kernel`` together with a section.

    Quotient coordinates ``y`` correspond to ``y @ section``; ``section``
    rows span a complement of ``kernel`` in ``ambient``.
    """

    ambient: Subspace
    kernel: Subspace
    section: Array

    @property
    def field(self) -> Field:
        return self.ambient.field

    @property
    def dim(self) -> int:
        return self.section.shape[0]

    def lift(self, coords: ArrayLike) -> Array:
        return self.field.matmul(self.field.asarray(coords), self.section)

    def project(self, vector: ArrayLike) -> Array:
        stacked = np.concatenate([self.section, self.kernel.basis])
        coords = solve(self.field, stacked.T, vector)
        if coords is None:
            raise NotWellDefined(
                f"{list(vector)} is outside the space being divided"  # type: ignore[arg-type]
            )
        return coords[: self.dim]

    def lift_subspace(self, subspace: Subspace) -> Subspace:
        lifted = Subspace.span(
            self.field, self.ambient.ambient, self.lift(subspace.basis)
        )
        return lifted + self.kernel

    def project_subspace(self, subspace: Subspace) -> Subspace:
        return Subspace.span(
            self.field,
            self.dim,
            np.array([self.project(v) for v in subspace.basis], dtype=np.int64),
        )

    def descend_form(self, form: ArrayLike) -> Array:
        """
        Gram matrix of the induced bilinear form on the quotient.
        """
        field = self.field
        gram = field.asarray(form)
        left = field.matmul(field.matmul(self.kernel.basis, gram), self.ambient.basis.T)
        right = field.matmul(field.matmul(self.ambient.basis, gram), self.kernel.basis.T)
        if np.any(left) or np.any(right):
            raise NotWellDefined("the form does not vanish on the kernel")
        return field.matmul(field.matmul(self.section, gram), self.section.T)

    def descend_quadratic(self, upper: ArrayLike) -> Array:
        """
        Upper triangular matrix of the induced quadratic form.
        """
        field = self.field
        upper = field.asarray(upper)
        polar = field.add(upper, upper.T)
        kernel_values = [
            field.dot(v, field.matvec(upper, v)) for v in self.kernel.basis
        ]
        pairing = field.matmul(
            field.matmul(self.kernel.basis, polar), self.ambient.basis.T
        )
        if any(kernel_values) or np.any(pairing):
            raise NotWellDefined("the quadratic form does not descend")
        full = field.matmul(field.matmul(self.section, upper), self.section.T)
        return upper_triangular(field, full)

    def descend_map(self, matrix: ArrayLike) -> Array:
        """
        Matrix (acting on quotient column vectors) of the induced map.
        """
        field = self.field
        mat = field.asarray(matrix)
        if not self.kernel.apply(mat) <= self.kernel or not (
            self.ambient.apply(mat) <= self.ambient
        ):
            raise NotWellDefined("the map does not preserve the kernel")
        images = [self.project(field.matvec(mat, c)) for c in self.section]
        return np.array(images, dtype=np.int64).reshape(self.dim, self.dim).T


def upper_triangular(field: Field, matrix: ArrayLike) -> Array:
    """
    The upper triangular matrix defining the same quadratic form
    ``v -> v^T M v``.
    """
    mat = field.asarray(matrix)
    folded = np.triu(field.add(mat, mat.T))
    np.fill_diagonal(folded, np.diagonal(mat))
    return folded


def quotient(ambient: Subspace, kernel_: Subspace) -> QuotientMap:
    if not kernel_ <= ambient:
        raise SubspaceError("the kernel is not contained in the ambient subspace")
    section = complement(kernel_, ambient).basis
    return QuotientMap(ambient, kernel_, section)


__all__ = (
    "QuotientMap",
    "Subspace",
    "complement",
    "determinant",
    "determinants",
    "image",
    "inverse",
    "is_nilpotent_matrix",
    "kernel",
    "matrix_power",
    "perp",
    "quotient",
    "rank",
    "rref",
    "solve",
    "subspace_ops",
    "upper_triangular",
)
