# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Quadratic spaces, alternating forms and good bases
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import ConstructionError, InternalInvariantViolation
from .field import Array, ArrayLike, Field
from .linalg import QuotientMap, Subspace, inverse, kernel, perp, solve


@dataclass(frozen=True, eq=False)
class QuadraticSpace:
    """
    ``field^dim`` with the quadratic form ``Q(v) = v^T U v`` for the upper
    triangular matrix ``upper``.

    ``rank`` is set for standard spaces, whose coordinate basis is the good
    basis ``e_{-N}, ..., e_N``.
    """

    field: Field
    upper: Array
    rank: int | None = None

    @classmethod
    def standard(cls, field: Field, rank: int) -> QuadraticSpace:
        if rank < 1:
            raise ConstructionError(f"N={rank} must be at least 1", context="space")
        dim = 2 * rank + 1
        upper = np.zeros((dim, dim), dtype=np.int64)
        for i in range(rank):
            upper[i, dim - 1 - i] = 1
        upper[rank, rank] = 1
        upper.setflags(write=False)
        return cls(field, upper, rank)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadraticSpace):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.upper, other.upper)

    def __hash__(self) -> int:
        return hash((self.field, self.upper.tobytes()))

    def __repr__(self) -> str:
        if self.rank is not None:
            return f"QuadraticSpace.standard({self.field}, N={self.rank})"
        return f"QuadraticSpace({self.field}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.upper.shape[0]

    @cached_property
    def gram(self) -> Array:
        """Gram matrix of the polar form ``beta``."""
        return self.field.add(self.upper, self.upper.T)

    @cached_property
    def radical(self) -> Subspace:
        return Subspace(self.field, self.dim, kernel(self.field, self.gram))

    def whole(self) -> Subspace:
        return Subspace.whole(self.field, self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def span(self, vectors: ArrayLike) -> Subspace:
        return Subspace.span(self.field, self.dim, vectors)

    def q(self, vector: ArrayLike) -> int:
        return self.field.dot(vector, self.field.matvec(self.upper, vector))

    def q_rows(self, rows: ArrayLike) -> Array:
        """Values of ``Q`` on every row of ``rows``."""
        rows = self.field.asarray(rows).reshape(-1, self.dim)
        return self.field.sum(
            self.field.mul(self.field.matmul(rows, self.upper), rows), axis=-1
        )

    def beta(self, x: ArrayLike, y: ArrayLike) -> int:
        return self.field.dot(x, self.field.matvec(self.gram, y))

    def pairing(self, rows_x: ArrayLike, rows_y: ArrayLike) -> Array:
        """Matrix of ``beta(x_i, y_j)``."""
        field = self.field
        return field.matmul(field.matmul(rows_x, self.gram), field.asarray(rows_y).T)

    def perp(self, subspace: Subspace) -> Subspace:
        return perp(subspace, self.gram)

    def is_nondegenerate(self) -> bool:
        return q_nondegenerate_on(self, self.whole())

    def quotient_space(self, quotient: QuotientMap) -> QuadraticSpace:
        return QuadraticSpace(self.field, quotient.descend_quadratic(self.upper))

    def label(self, index: int) -> str:
        if self.rank is None:
            return f"x{index}"
        return f"e{index - self.rank}"

    def normalized_radical_vector(self) -> Array:
        """
        The radical vector ``r`` with ``Q(r) = 1`` (characteristic 2).
        """
        if self.radical.dim != 1:
            raise InternalInvariantViolation(
                f"radical has dimension {self.radical.dim}, expected 1"
            )
        vector = self.radical.basis[0]
        scale = self.field.inv(self.field.sqrt(self.q(vector)))
        return self.field.mul(vector, scale)


@dataclass(frozen=True, eq=False)
class AlternatingForm:
    """
    An alternating bilinear form ``(x, y) -> x^T B y`` on a quadratic space.
    """

    space: QuadraticSpace
    gram: Array

    def __post_init__(self) -> None:
        field = self.space.field
        gram = field.asarray(self.gram)
        if gram.shape != (self.space.dim, self.space.dim):
            raise ConstructionError(
                f"form of shape {gram.shape} on a space of dimension {self.space.dim}",
                context="form",
            )
        if np.any(np.diagonal(gram)) or not np.array_equal(gram, field.neg(gram.T)):
            raise ConstructionError("matrix is not alternating", context="form")
        gram = gram.copy()
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)

    @classmethod
    def zero(cls, space: QuadraticSpace) -> AlternatingForm:
        return cls(space, np.zeros((space.dim, space.dim), dtype=np.int64))

    @classmethod
    def from_lower(cls, space: QuadraticSpace, entries: ArrayLike) -> AlternatingForm:
        """
        Build from the strictly lower triangle listed row by row.
        """
        field = space.field
        entries = field.asarray(entries).reshape(-1)
        rows, cols = np.tril_indices(space.dim, -1)
        if entries.shape[0] != rows.shape[0]:
            raise ConstructionError(
                f"expected {rows.shape[0]} lower-triangle entries, got {entries.shape[0]}",
                context="form",
            )
        gram = np.zeros((space.dim, space.dim), dtype=np.int64)
        gram[rows, cols] = entries
        gram[cols, rows] = field.neg(entries)
        return cls(space, gram)

    @classmethod
    def from_pairs(
        cls, space: QuadraticSpace, values: dict[tuple[int, int], int]
    ) -> AlternatingForm:
        """
        Build from ``{(i, j): B(x_i, x_j)}`` given on coordinate indices.
        """
        field = space.field
        gram = np.zeros((space.dim, space.dim), dtype=np.int64)
        for (i, j), value in values.items():
            gram[i, j] = value
            gram[j, i] = field.neg(value)
        return cls(space, gram)

    def lower(self) -> Array:
        rows, cols = np.tril_indices(self.space.dim, -1)
        return self.gram[rows, cols]

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def is_zero(self) -> bool:
        return not np.any(self.gram)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlternatingForm):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.gram, other.gram)

    def __hash__(self) -> int:
        return hash((self.space, self.gram.tobytes()))

    def __call__(self, x: ArrayLike, y: ArrayLike) -> int:
        return self.field.dot(x, self.field.matvec(self.gram, y))

    def pairing(self, rows_x: ArrayLike, rows_y: ArrayLike) -> Array:
        field = self.field
        return field.matmul(field.matmul(rows_x, self.gram), field.asarray(rows_y).T)

    def functional(self, vector: ArrayLike) -> Array:
        """The row vector of ``B(vector, -)``."""
        return self.field.matvec(self.gram.T, vector)

    def pullback(self, g: ArrayLike) -> Array:
        """Gram matrix of ``(v, w) -> B(g v, g w)``."""
        field = self.field
        g = field.asarray(g)
        return field.matmul(field.matmul(np.swapaxes(g, -1, -2), self.gram), g)

    def transport(self, g: ArrayLike) -> AlternatingForm:
        """``g . B``, that is ``(v, w) -> B(g^-1 v, g^-1 w)``."""
        return AlternatingForm(self.space, self.pullback(inverse(self.field, g)))


@dataclass(frozen=True, eq=False)
class GoodBasis:
    """Vectors ``e_{-N}, ..., e_N`` stored as rows."""

    vectors: Array

    def verify(self, space: QuadraticSpace) -> bool:
        field = space.field
        dim = space.dim
        rank = (dim - 1) // 2
        expected_beta = np.zeros((dim, dim), dtype=np.int64)
        for i in range(dim):
            expected_beta[i, dim - 1 - i] = 1
        expected_beta[rank, rank] = field.add(1, 1)
        expected_q = np.zeros(dim, dtype=np.int64)
        expected_q[rank] = 1
        return np.array_equal(
            space.pairing(self.vectors, self.vectors), expected_beta
        ) and np.array_equal(space.q_rows(self.vectors), expected_q)


def standard_space(field: Field, rank: int) -> QuadraticSpace:
    return QuadraticSpace.standard(field, rank)


def standard_good_basis(space: QuadraticSpace) -> GoodBasis:
    return GoodBasis(np.eye(space.dim, dtype=np.int64))


def xi_to_form(space: QuadraticSpace, endomorphism: ArrayLike) -> AlternatingForm:
    """
    The form ``(v, w) -> beta(X v, w) - beta(v, X w)``.
    """
    field = space.field
    x = field.asarray(endomorphism)
    return AlternatingForm(
        space,
        field.sub(field.matmul(x.T, space.gram), field.matmul(space.gram, x)),
    )


def form_to_xi(form: AlternatingForm) -> Array:
    """
    The endomorphism ``X`` with ``xi_to_form(X) = form`` found by the
    deterministic solver.
    """
    space = form.space
    dim = space.dim
    columns = []
    for index in range(dim * dim):
        unit = np.zeros(dim * dim, dtype=np.int64)
        unit[index] = 1
        columns.append(xi_to_form(space, unit.reshape(dim, dim)).lower())
    system = np.array(columns, dtype=np.int64).T.reshape(-1, dim * dim)
    solution = solve(space.field, system, form.lower())
    if solution is None:
        raise InternalInvariantViolation("alternating form outside the image of X")
    return solution.reshape(dim, dim)


def form_count(space: QuadraticSpace) -> int:
    """Number of alternating forms on ``space``."""
    return space.field.q ** (space.dim * (space.dim - 1) // 2)


def lower_entries(space: QuadraticSpace, start: int, stop: int) -> Array:
    """
    Lower triangles of the forms with indices ``start <= i < stop``, one per
    row.  Index ``i`` written in base ``q`` (most significant digit first)
    lists the lower triangle row by row.
    """
    size = space.dim * (space.dim - 1) // 2
    q = space.field.q
    indices = np.arange(start, stop, dtype=np.int64)
    weights = q ** np.arange(size - 1, -1, -1, dtype=np.int64)
    return (indices[:, None] // weights[None, :]) % q


def all_vectors(space: QuadraticSpace) -> Array:
    """Every vector of ``space`` as a row, in lexicographic order of coordinates."""
    q = space.field.q
    weights = q ** np.arange(space.dim - 1, -1, -1, dtype=np.int64)
    indices = np.arange(q**space.dim, dtype=np.int64)
    return (indices[:, None] // weights[None, :]) % q


def vector_indices(space: QuadraticSpace, rows: ArrayLike) -> Array:
    """Positions of ``rows`` in :func:`all_vectors`."""
    q = space.field.q
    weights = q ** np.arange(space.dim - 1, -1, -1, dtype=np.int64)
    return space.field.asarray(rows).reshape(-1, space.dim) @ weights


def iter_forms(
    space: QuadraticSpace, start: int = 0, stop: int | None = None
) -> Iterator[AlternatingForm]:
    stop = form_count(space) if stop is None else stop
    for begin in range(start, stop, 4096):
        for row in lower_entries(space, begin, min(begin + 4096, stop)):
            yield AlternatingForm.from_lower(space, row)


def q_vanishes_on(space: QuadraticSpace, subspace: Subspace) -> bool:
    """Whether ``Q`` is identically zero on ``subspace``."""
    return not np.any(space.q_rows(subspace.basis)) and not np.any(
        space.pairing(subspace.basis, subspace.basis)
    )


def isotropic_kernel(
    space: QuadraticSpace, domain: Subspace, images: ArrayLike | None = None
) -> Subspace:
    """
    ``{x in D : Q(L x) = 0}`` for a map ``L`` given by the images of the
    basis rows of ``D`` (the identity when ``images`` is omitted).

    ``beta`` must vanish on the image of ``L``, so that ``Q o L`` is additive.
    """
    field = space.field
    rows = domain.basis if images is None else field.asarray(images)
    rows = rows.reshape(-1, space.dim)
    if np.any(space.pairing(rows, rows)):
        raise InternalInvariantViolation("Q is not additive on the given subspace")
    if field.p != 2 or domain.dim == 0:
        # beta(x, x) = 2 Q(x) vanishes, so Q does as well.
        return domain
    roots = field.sqrt(space.q_rows(rows))
    coefficients = kernel(field, roots.reshape(1, -1))
    return Subspace.span(
        field, space.dim, field.matmul(coefficients, domain.basis)
    )


def q_nondegenerate_on(space: QuadraticSpace, subspace: Subspace) -> bool:
    """
    Whether ``{u in U : beta(u, U) = 0, Q(u) = 0}`` is zero.
    """
    radical = subspace & space.perp(subspace)
    return isotropic_kernel(space, radical).dim == 0


__all__ = (
    "AlternatingForm",
    "all_vectors",
    "GoodBasis",
    "QuadraticSpace",
    "form_count",
    "form_to_xi",
    "iter_forms",
    "lower_entries",
    "isotropic_kernel",
    "q_nondegenerate_on",
    "q_vanishes_on",
    "standard_good_basis",
    "standard_space",
    "vector_indices",
    "xi_to_form",
)
