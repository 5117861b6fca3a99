# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
O-good gradings, Q-filtrations, admissible profiles and the piece membership
predicates built on them.

Degree ``a`` pieces are subspaces of the ambient quadratic space.  A filtration
is stored by its levels ``V^{>=a}`` for ``-n < a <= n``, where ``n`` is the top
degree; lower levels are the whole space and higher levels are zero.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from antsibull_core.logging import get_module_logger

from .constants import FILTRATION_ENUM_MAX_DIM
from .exceptions import (
    CharacteristicError,
    InternalInvariantViolation,
    NotGraded,
    NotInEta,
    NotOGood,
    SizeError,
)
from .field import Array
from .linalg import Subspace, complement, inverse, kernel, rank, solve
from .quadspace import (
    AlternatingForm,
    QuadraticSpace,
    q_nondegenerate_on,
    q_vanishes_on,
)

mlog = get_module_logger(__name__)


@dataclass(frozen=True)
class Profile:
    """
    Dimensions ``f_a`` of the graded pieces, stored for ``a >= 0``.
    """

    values: tuple[tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> Profile:
        return cls(
            tuple(sorted((a, f) for a, f in mapping.items() if a >= 0 and f > 0))
        )

    @classmethod
    def trivial(cls, dim: int) -> Profile:
        return cls(((0, dim),))

    def __getitem__(self, degree: int) -> int:
        return dict(self.values).get(abs(degree), 0)

    @property
    def dim(self) -> int:
        return sum(f if a == 0 else 2 * f for a, f in self.values)

    @property
    def top(self) -> int:
        return max((a for a, _ in self.values), default=0)

    @property
    def label(self) -> str:
        return ",".join(f"{a}:{f}" for a, f in self.values)

    def __str__(self) -> str:
        return self.label

    def pairs(self) -> list[list[int]]:
        return [[a, f] for a, f in self.values]

    def is_admissible(self, dim: int | None = None) -> bool:
        if dim is not None and self.dim != dim:
            return False
        for a, f in self.values:
            if a % 2 == 1 and f % 2:
                return False
        return all(self[a] >= self[a + 2] for a in range(self.top + 1))


def admissible_profiles(dim: int) -> list[Profile]:
    """
    All admissible profiles with ``sum f_a = dim``, sorted by label.
    """

    def chains(budget: int, start: int, bound: int, step: int) -> Iterator[dict[int, int]]:
        # budget counts the dimension left for degrees >= start (both signs)
        yield {}
        for f in range(step, min(bound, budget // 2) + 1, step):
            for rest in chains(budget - 2 * f, start + 2, f, step):
                yield {start: f, **rest}

    found = []
    for f0 in range(dim % 2, dim + 1, 2):
        for even in chains(dim - f0, 2, f0, 1):
            used = f0 + 2 * sum(even.values())
            for odd in chains(dim - used, 1, dim, 2):
                if used + 2 * sum(odd.values()) == dim:
                    found.append(Profile.from_mapping({0: f0, **even, **odd}))
    return sorted(set(found), key=lambda profile: (profile.top, profile.values))


@dataclass(frozen=True, eq=False)
class QFiltration:
    space: QuadraticSpace
    top: int
    levels: tuple[Subspace, ...]

    @classmethod
    def trivial(cls, space: QuadraticSpace) -> QFiltration:
        return cls(space, 0, ())

    @classmethod
    def from_levels(
        cls, space: QuadraticSpace, mapping: Mapping[int, Subspace]
    ) -> QFiltration:
        """
        Build from ``{a: V^{>=a}}``; degrees below the smallest key give the
        whole space and degrees above the largest key give zero.
        """
        if not mapping:
            return cls.trivial(space)
        low, high = min(mapping), max(mapping)

        def level(a: int) -> Subspace:
            if a < low:
                return space.whole()
            if a > high:
                return space.zero()
            if a in mapping:
                return mapping[a]
            return level(a + 1)

        top = max((a for a in range(low, high + 1) if level(a).dim), default=low - 1)
        top = max(top, 0)
        if level(-top).dim != space.dim:
            raise NotOGood(
                f"V^{{>={-top}}} is not the whole space for top degree {top}",
                context="filtration",
            )
        return cls(space, top, tuple(level(a) for a in range(-top + 1, top + 1)))

    def at(self, degree: int) -> Subspace:
        if degree <= -self.top:
            return self.space.whole()
        if degree > self.top:
            return self.space.zero()
        return self.levels[degree + self.top - 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QFiltration):
            return NotImplemented
        return (
            self.space == other.space
            and self.top == other.top
            and self.levels == other.levels
        )

    def __hash__(self) -> int:
        return hash((self.space, self.top, self.levels))

    def __repr__(self) -> str:
        return f"QFiltration(top={self.top}, profile={self.profile()})"

    def degrees(self) -> range:
        return range(-self.top + 1, self.top + 1)

    def profile(self) -> Profile:
        return Profile.from_mapping(
            {a: self.at(a).dim - self.at(a + 1).dim for a in range(0, self.top + 1)}
        )

    def sort_key(self) -> tuple:
        return (
            self.top,
            tuple(tuple(level.basis.reshape(-1).tolist()) for level in self.levels),
        )

    def transport(self, g: Array) -> QFiltration:
        """The filtration ``g V^{>=a}``."""
        return QFiltration(
            self.space, self.top, tuple(level.apply(g) for level in self.levels)
        )

    def validate(self) -> None:
        """
        Check the Q-filtration conditions, raising :class:`NotOGood`.
        """
        space = self.space
        for a in range(-self.top, self.top + 1):
            if not self.at(a + 1) <= self.at(a):
                raise NotOGood(f"V^{{>={a + 1}}} is not inside V^{{>={a}}}")
        for a in range(1, self.top + 1):
            level = self.at(a)
            if not q_vanishes_on(space, level):
                raise NotOGood(f"Q does not vanish on V^{{>={a}}}")
            if self.at(1 - a) != space.perp(level):
                raise NotOGood(f"V^{{>={1 - a}}} is not the orthogonal of V^{{>={a}}}")


@dataclass(frozen=True, eq=False)
class OGoodGrading:
    space: QuadraticSpace
    pieces: tuple[tuple[int, Subspace], ...]

    @classmethod
    def from_mapping(
        cls, space: QuadraticSpace, mapping: Mapping[int, Subspace]
    ) -> OGoodGrading:
        return cls(
            space, tuple(sorted((a, s) for a, s in mapping.items() if s.dim))
        )

    def piece(self, degree: int) -> Subspace:
        return dict(self.pieces).get(degree, self.space.zero())

    @property
    def top(self) -> int:
        return max((abs(a) for a, _ in self.pieces), default=0)

    def profile(self) -> Profile:
        return Profile.from_mapping({a: s.dim for a, s in self.pieces})

    def filtration(self) -> QFiltration:
        mapping = {}
        for a in range(-self.top, self.top + 2):
            rows = [s.basis for b, s in self.pieces if b >= a]
            mapping[a] = self.space.span(
                np.concatenate(rows)
                if rows
                else np.zeros((0, self.space.dim), dtype=np.int64)
            )
        return QFiltration.from_levels(self.space, mapping)

    @cached_property
    def graded_basis(self) -> tuple[Array, Array]:
        """Stacked piece bases and the degree of every row."""
        rows = [s.basis for _, s in self.pieces]
        degrees = [np.full(s.dim, a, dtype=np.int64) for a, s in self.pieces]
        return np.concatenate(rows), np.concatenate(degrees)

    def validate(self) -> None:
        space = self.space
        basis, degrees = self.graded_basis
        if basis.shape[0] != space.dim or rank(space.field, basis) != space.dim:
            raise NotOGood("the pieces do not form a direct sum decomposition")
        profile = self.profile()
        for a, s in self.pieces:
            if s.dim != self.piece(-a).dim:
                raise NotOGood(f"dim V^{a} differs from dim V^{-a}")
        if not profile.is_admissible(space.dim):
            raise NotOGood(f"profile {profile} is not admissible")
        pairing = space.pairing(basis, basis)
        off_diagonal = degrees[:, None] + degrees[None, :] != 0
        if np.any(pairing[off_diagonal]):
            raise NotOGood("beta pairs pieces whose degrees do not cancel")
        if np.any(space.q_rows(basis[degrees != 0])):
            raise NotOGood("Q does not vanish on a piece of nonzero degree")


def _dual_slice(
    space: QuadraticSpace,
    upper: Subspace,
    lower: Subspace,
    inside: Subspace,
    rng: random.Random | None,
) -> Subspace:
    """
    A Q-isotropic complement of ``lower`` in ``inside`` paired dually with
    ``upper``.
    """
    field = space.field
    candidate = complement(lower, inside, rng)
    if candidate.dim != upper.dim:
        raise NotOGood(
            f"slice of dimension {candidate.dim} cannot pair with a piece of"
            f" dimension {upper.dim}"
        )
    pairing = space.pairing(candidate.basis, upper.basis)
    if rank(field, pairing) != upper.dim:
        raise NotOGood("opposite pieces do not pair nondegenerately")
    dual = field.matmul(inverse(field, pairing), candidate.basis)
    size = upper.dim
    shift = np.zeros((size, size), dtype=np.int64)
    for i in range(size):
        shift[i, i] = field.neg(space.q(dual[i]))
        for k in range(i + 1, size):
            target = field.neg(space.beta(dual[i], dual[k]))
            part = rng.randrange(field.q) if rng is not None else 0
            shift[k, i] = part
            shift[i, k] = field.sub(target, part)
    corrected = field.add(dual, field.matmul(shift, upper.basis))
    return space.span(corrected)


def split_filtration(
    filtration: QFiltration, rng: random.Random | None = None
) -> OGoodGrading:
    """
    An o-good grading with ``V^{>=a}`` the sum of the pieces of degree at
    least ``a``.

    Positive pieces are cut out of the filtration, their duals are solved for
    inside ``V^{>=-a}`` and the rest is split recursively in the orthogonal
    complement.  With ``rng`` the complements and the isotropy correction are
    chosen at random.
    """
    flog = mlog.fields(func="split_filtration")
    filtration.validate()
    space = filtration.space
    remaining = space.whole()
    pieces: dict[int, Subspace] = {}
    for a in range(filtration.top, 0, -1):
        upper = filtration.at(a) & remaining
        if not upper.dim:
            continue
        lower = filtration.at(1 - a) & remaining
        inside = filtration.at(-a) & remaining
        opposite = _dual_slice(space, upper, lower, inside, rng)
        pieces[a] = upper
        pieces[-a] = opposite
        remaining = remaining & space.perp(upper + opposite)
    pieces[0] = remaining
    grading = OGoodGrading.from_mapping(space, pieces)
    grading.validate()
    if grading.filtration() != filtration:
        raise NotOGood("the grading is not compatible with the filtration")
    flog.fields(profile=str(grading.profile())).debug("Split filtration")
    return grading


def eta_vanishing(filtration: QFiltration, form: AlternatingForm) -> bool:
    """Whether ``B(V^{>=a}, V^{>=b}) = 0`` whenever ``a + b >= -1``."""
    for a in range(-filtration.top - 1, filtration.top + 2):
        left = filtration.at(a)
        right = filtration.at(-1 - a)
        if left.dim and right.dim and np.any(form.pairing(left.basis, right.basis)):
            return False
    return True


def _from_graded_coordinates(
    grading: OGoodGrading, matrix: Array
) -> AlternatingForm:
    field = grading.space.field
    basis, _ = grading.graded_basis
    inv = inverse(field, basis)
    return AlternatingForm(
        grading.space, field.matmul(field.matmul(inv, matrix), inv.T)
    )


def bar_form(
    filtration: QFiltration, grading: OGoodGrading, form: AlternatingForm
) -> AlternatingForm:
    """
    The graded form ``(x, y) -> sum_a B(x^a, y^{-a-2})``.
    """
    if not eta_vanishing(filtration, form):
        raise NotInEta("B does not vanish on V^{>=a} x V^{>=b} for a + b >= -1")
    basis, degrees = grading.graded_basis
    graded = form.pairing(basis, basis)
    graded[degrees[:, None] + degrees[None, :] != -2] = 0
    return _from_graded_coordinates(grading, graded)


def is_graded(grading: OGoodGrading, form: AlternatingForm) -> bool:
    basis, degrees = grading.graded_basis
    graded = form.pairing(basis, basis)
    return not np.any(graded[degrees[:, None] + degrees[None, :] != -2])


def a_blocks(grading: OGoodGrading, form: AlternatingForm) -> dict[int, Array]:
    """
    Maps ``A: V^a -> V^{a+2}`` with ``beta(A x, y) = B(x, y)`` for ``y`` in
    ``V^{-a-2}``, as matrices acting on coefficient rows.

    ``A`` is defined on ``V^{-2}`` only in odd characteristic.
    """
    space = grading.space
    field = space.field
    blocks = {}
    for a in range(-grading.top - 2, grading.top + 1):
        if a == -2 and field.p == 2:
            continue
        source = grading.piece(a)
        target = grading.piece(a + 2)
        dual = grading.piece(-a - 2)
        if not target.dim:
            blocks[a] = np.zeros((source.dim, 0), dtype=np.int64)
            continue
        pairing = space.pairing(target.basis, dual.basis)
        values = form.pairing(source.basis, dual.basis)
        blocks[a] = field.matmul(values, inverse(field, pairing))
    return blocks


def _compose(grading: OGoodGrading, blocks: Mapping[int, Array], start: int, steps: int) -> Array:
    field = grading.space.field
    result = np.eye(grading.piece(start).dim, dtype=np.int64)
    for i in range(steps):
        a = start + 2 * i
        block = blocks.get(a)
        if block is None:
            if grading.piece(a).dim and grading.piece(a + 2).dim:
                raise InternalInvariantViolation(f"A is not defined on degree {a}")
            block = np.zeros((grading.piece(a).dim, grading.piece(a + 2).dim), dtype=np.int64)
        result = field.matmul(result, block)
    return result


def _require_graded(grading: OGoodGrading, form: AlternatingForm) -> None:
    if not is_graded(grading, form):
        raise NotGraded("the form pairs pieces whose degrees do not add to -2")


def condition_a(grading: OGoodGrading, form: AlternatingForm) -> bool:
    """
    ``V^0 -> V^2 -> ...`` surjective and ``Q`` nondegenerate on every
    ``ker(A^n: V^0 -> V^{2n})``.
    """
    _require_graded(grading, form)
    space = grading.space
    field = space.field
    blocks = a_blocks(grading, form)
    for k in range(0, grading.top + 1, 2):
        if rank(field, blocks[k]) != grading.piece(k + 2).dim:
            return False
    # kernels are constant once 2n passes the top degree
    zero_piece = grading.piece(0)
    for n in range(1, grading.top // 2 + 2):
        composite = _compose(grading, blocks, 0, n)
        coefficients = kernel(field, composite.T)
        kernel_space = space.span(field.matmul(coefficients, zero_piece.basis))
        if not q_nondegenerate_on(space, kernel_space):
            return False
    return True


def condition_b_prime(grading: OGoodGrading, form: AlternatingForm) -> bool:
    """``A^{2n-1}: V^{-2n+1} -> V^{2n-1}`` is an isomorphism for all n."""
    _require_graded(grading, form)
    field = grading.space.field
    blocks = a_blocks(grading, form)
    for n in range(1, (grading.top + 1) // 2 + 1):
        composite = _compose(grading, blocks, 1 - 2 * n, 2 * n - 1)
        if rank(field, composite) != grading.piece(2 * n - 1).dim:
            return False
    return True


def condition_b_kernel_form(grading: OGoodGrading, form: AlternatingForm) -> bool:
    """
    ``V^{-1} -> V^1 -> ...`` surjective and ``(x, y) -> beta(A x, y)``
    nondegenerate on every ``ker(A^n: V^{-1} -> V^{2n-1})``.
    """
    _require_graded(grading, form)
    space = grading.space
    field = space.field
    blocks = a_blocks(grading, form)
    for k in range(-1, grading.top + 1, 2):
        if rank(field, blocks[k]) != grading.piece(k + 2).dim:
            return False
    minus_one = grading.piece(-1)
    for n in range(1, (grading.top + 1) // 2 + 2):
        composite = _compose(grading, blocks, -1, n)
        coefficients = kernel(field, composite.T)
        vectors = field.matmul(coefficients, minus_one.basis)
        if rank(field, form.pairing(vectors, vectors)) != vectors.shape[0]:
            return False
    return True


def condition_a_prime(grading: OGoodGrading, form: AlternatingForm) -> bool:
    """``A^{2n}: V^{-2n} -> V^{2n}`` is an isomorphism (odd characteristic)."""
    _require_graded(grading, form)
    field = grading.space.field
    if field.p == 2:
        raise CharacteristicError("A is not defined on V^-2 in characteristic 2")
    blocks = a_blocks(grading, form)
    for n in range(1, grading.top // 2 + 1):
        composite = _compose(grading, blocks, -2 * n, 2 * n)
        if rank(field, composite) != grading.piece(2 * n).dim:
            return False
    return True


def in_S2_0(grading: OGoodGrading, form: AlternatingForm) -> bool:  # noqa: N802
    # pylint: disable=invalid-name
    result = condition_a(grading, form) and condition_b_prime(grading, form)
    if grading.space.field.p != 2:
        alternative = condition_a_prime(grading, form) and condition_b_prime(
            grading, form
        )
        if alternative != result:
            raise InternalInvariantViolation(
                "conditions (a) and (a') disagree", context="S2_0"
            )
    return result


def in_eta(
    filtration: QFiltration,
    form: AlternatingForm,
    grading: OGoodGrading | None = None,
) -> bool:
    """
    Whether ``form`` vanishes on ``V^{>=a} x V^{>=b}`` for ``a + b >= -1`` and
    its graded form lies in the open part of ``S(V)_2``.

    ``grading`` may pass a precomputed splitting of ``filtration``.
    """
    if grading is None:
        try:
            grading = split_filtration(filtration)
        except NotOGood:
            return False
    if not eta_vanishing(filtration, form):
        return False
    return in_S2_0(grading, bar_form(filtration, grading, form))


@dataclass(frozen=True, eq=False)
class BarData:
    """
    The chain ``v_i = A^{m-i} v_m`` from the radical, the vectors
    ``u_i = A^i u_0``, the pieces ``W^a`` and the maps ``A: W^a -> W^{a+2}``
    as matrices on coefficient rows of the ``W^a`` bases.
    """

    m_bar: int
    v: Array
    u: Array
    w_pieces: tuple[tuple[int, Subspace], ...]
    blocks: tuple[tuple[int, Array], ...]

    @property
    def top(self) -> int:
        return max((abs(a) for a, s in self.w_pieces if s.dim), default=0)


def _apply_a(grading: OGoodGrading, blocks: Mapping[int, Array], degree: int, vector: Array) -> Array:
    field = grading.space.field
    source = grading.piece(degree)
    coords = source.coordinates(vector)
    target = grading.piece(degree + 2)
    if not target.dim:
        return np.zeros(grading.space.dim, dtype=np.int64)
    return field.matmul(field.matmul(coords[None, :], blocks[degree]), target.basis)[0]


def bar_decomposition(grading: OGoodGrading, form: AlternatingForm) -> BarData:
    """
    Split off the part of ``V`` generated by the radical under ``A``
    (characteristic 2).
    """
    space = grading.space
    field = space.field
    if field.p != 2:
        raise CharacteristicError("the bar decomposition needs characteristic 2")
    _require_graded(grading, form)
    blocks = a_blocks(grading, form)
    radical = space.normalized_radical_vector()
    chain = [radical]
    while True:
        image = _apply_a(grading, blocks, 2 * (len(chain) - 1), chain[-1])
        if not np.any(image):
            break
        chain.append(image)
    m_bar = len(chain) - 1
    v = np.array(chain[::-1], dtype=np.int64)
    w: dict[int, Subspace] = {}
    degrees = range(-grading.top - 2, grading.top + 3)
    if m_bar == 0:
        u = np.zeros((0, space.dim), dtype=np.int64)
        for a in degrees:
            w[a] = grading.piece(a)
        w[0] = complement(space.span(v), grading.piece(0))
    else:
        low = grading.piece(-2 * m_bar)
        coeffs = solve(field, space.pairing(low.basis, v[:1]).T, [1])
        if coeffs is None:
            raise InternalInvariantViolation("no u_0 pairs with v_0", context="bar")
        u_rows = [field.matmul(coeffs[None, :], low.basis)[0]]
        for i in range(1, m_bar):
            u_rows.append(_apply_a(grading, blocks, -2 * m_bar + 2 * (i - 1), u_rows[-1]))
        u = np.array(u_rows, dtype=np.int64)

        def cut(piece: Subspace, functional: Array) -> Subspace:
            values = field.matvec(piece.basis, functional)
            return space.span(field.matmul(kernel(field, values[None, :]), piece.basis))

        for a in degrees:
            piece = grading.piece(a)
            if a % 2 or not -2 * m_bar <= a <= 2 * m_bar:
                w[a] = piece
            elif a < 0:
                w[a] = cut(piece, field.matvec(space.gram, v[m_bar + a // 2]))
            elif a > 0:
                w[a] = cut(piece, field.matvec(space.gram, u[m_bar - a // 2]))
            else:
                w[a] = cut(piece, form.functional(u[m_bar - 1]))
    bar_blocks: dict[int, Array] = {}
    for a in degrees:
        source, target = w[a], w.get(a + 2, space.zero())
        if not source.dim or not target.dim:
            bar_blocks[a] = np.zeros((source.dim, target.dim), dtype=np.int64)
            continue
        if a == -2:
            pairing = space.pairing(target.basis, target.basis)
            values = form.pairing(source.basis, target.basis)
            bar_blocks[a] = field.matmul(values, inverse(field, pairing))
            continue
        images = np.array(
            [_apply_a(grading, blocks, a, row) for row in source.basis], dtype=np.int64
        )
        rows = []
        for image in images:
            coords = solve(field, target.basis.T, image)
            if coords is None:
                raise InternalInvariantViolation(
                    f"A does not map W^{a} into W^{a + 2}", context="bar"
                )
            rows.append(coords)
        bar_blocks[a] = np.array(rows, dtype=np.int64).reshape(source.dim, target.dim)
    data = BarData(
        m_bar,
        v,
        u,
        tuple(sorted(w.items())),
        tuple(sorted(bar_blocks.items())),
    )
    _verify_bar(space, form, data)
    return data


def _verify_bar(space: QuadraticSpace, form: AlternatingForm, data: BarData) -> None:
    field = space.field
    pieces = dict(data.w_pieces)
    for a, block in data.blocks:
        source = pieces[a]
        target = pieces.get(a + 2)
        dual = pieces.get(-a - 2)
        if not source.dim or target is None or dual is None or not dual.dim:
            continue
        images = field.matmul(block, target.basis)
        if not np.array_equal(
            space.pairing(images, dual.basis), form.pairing(source.basis, dual.basis)
        ):
            raise InternalInvariantViolation(
                f"beta(A w, v) differs from B(w, v) on W^{a}", context="bar"
            )


def bar_conditions(data: BarData, space: QuadraticSpace) -> tuple[bool, bool]:
    """
    The two halves of condition (a) in terms of the bar decomposition:
    ``A^n: W^{-2n} -> W^0`` injective with ``Q`` nondegenerate on its image for
    ``n <= m``, and ``A^{2n}: W^{-2n} -> W^{2n}`` an isomorphism onto an even
    dimensional piece for ``n > m``.
    """
    field = space.field
    pieces = dict(data.w_pieces)
    blocks = dict(data.blocks)
    zero = space.zero()

    def compose(start: int, steps: int) -> Array:
        result = np.eye(pieces.get(start, zero).dim, dtype=np.int64)
        for i in range(steps):
            a = start + 2 * i
            block = blocks.get(a)
            if block is None:
                block = np.zeros(
                    (pieces.get(a, zero).dim, pieces.get(a + 2, zero).dim), dtype=np.int64
                )
            result = field.matmul(result, block)
        return result

    first = True
    for n in range(1, data.m_bar + 1):
        low = pieces.get(-2 * n, zero)
        composite = compose(-2 * n, n)
        if rank(field, composite) != low.dim:
            first = False
            break
        image = space.span(field.matmul(composite, pieces[0].basis))
        if not q_nondegenerate_on(space, image):
            first = False
            break
    second = True
    for n in range(data.m_bar + 1, max(data.top // 2, data.m_bar) + 2):
        low = pieces.get(-2 * n, zero)
        high = pieces.get(2 * n, zero)
        composite = compose(-2 * n, 2 * n)
        if low.dim != high.dim or rank(field, composite) != high.dim or high.dim % 2:
            second = False
            break
    return first, second


def graded_form_count(grading: OGoodGrading) -> int:
    """Number of forms in ``S(V)_2`` for the grading, as a power of ``q``."""
    exponent = 0
    for a, s in grading.pieces:
        b = -a - 2
        if a < b:
            exponent += s.dim * grading.piece(b).dim
        elif a == b:
            exponent += s.dim * (s.dim - 1) // 2
    return grading.space.field.q**exponent


def graded_forms(grading: OGoodGrading) -> Iterator[AlternatingForm]:
    """
    Every alternating form pairing only pieces whose degrees add to ``-2``.
    """
    space = grading.space
    field = space.field
    _, degrees = grading.graded_basis
    positions = [
        (i, j)
        for i in range(space.dim)
        for j in range(i + 1, space.dim)
        if degrees[i] + degrees[j] == -2
    ]
    for values in itertools.product(range(field.q), repeat=len(positions)):
        graded = np.zeros((space.dim, space.dim), dtype=np.int64)
        for (i, j), value in zip(positions, values):
            graded[i, j] = value
            graded[j, i] = field.neg(value)
        yield _from_graded_coordinates(grading, graded)


def standard_grading(space: QuadraticSpace, profile: Profile) -> OGoodGrading:
    """
    The grading of a standard space placing the profile on the good basis:
    ``e_i`` and ``e_{-i}`` get opposite degrees, the largest on ``e_N``.
    """
    if space.rank is None:
        raise NotOGood("standard gradings need a standard space", context="profile")
    if not profile.is_admissible(space.dim):
        raise NotOGood(f"profile {profile} is not admissible for dim {space.dim}")
    positive = sorted(
        (a for a, f in profile.values if a > 0 for _ in range(f)), reverse=True
    )
    positive += [0] * ((profile[0] - 1) // 2)
    rank_ = space.rank
    degrees = np.zeros(space.dim, dtype=np.int64)
    for i, a in enumerate(positive):
        degrees[rank_ + (rank_ - i)] = a
        degrees[rank_ - (rank_ - i)] = -a
    eye = np.eye(space.dim, dtype=np.int64)
    return OGoodGrading.from_mapping(
        space, {int(a): space.span(eye[degrees == a]) for a in set(degrees.tolist())}
    )


def standard_filtration(space: QuadraticSpace, profile: Profile) -> QFiltration:
    return standard_grading(space, profile).filtration()


def _singular_subspaces(space: QuadraticSpace) -> list[Subspace]:
    field = space.field
    vectors = np.array(
        list(itertools.product(range(field.q), repeat=space.dim)), dtype=np.int64
    )[1:]
    singular = vectors[space.q_rows(vectors) == 0]
    seen = {space.zero()}
    frontier = [space.zero()]
    while frontier:
        grown = []
        for subspace in frontier:
            orthogonal = space.perp(subspace)
            for vector in singular:
                if subspace.contains_vector(vector) or not orthogonal.contains_vector(vector):
                    continue
                bigger = subspace + space.span(vector)
                if bigger not in seen:
                    seen.add(bigger)
                    grown.append(bigger)
        frontier = grown
    return sorted(seen, key=lambda s: (s.dim, s.basis.reshape(-1).tolist()))


def enumerate_filtrations(space: QuadraticSpace) -> list[QFiltration]:
    """
    Every Q-filtration admitting an o-good splitting, in a canonical order.
    """
    flog = mlog.fields(func="enumerate_filtrations")
    if space.dim > FILTRATION_ENUM_MAX_DIM:
        raise SizeError(
            f"enumerating filtrations of a {space.dim}-dimensional space",
            context="filtrations",
        )
    subspaces = [s for s in _singular_subspaces(space) if s.dim]
    above = {s: [t for t in subspaces if s <= t] for s in subspaces}
    found = [QFiltration.trivial(space)]

    def extend(chain: list[Subspace], top: int) -> Iterator[list[Subspace]]:
        # chain holds V^{>=top}, ..., V^{>=top-len+1}
        if len(chain) == top:
            yield chain
            return
        for bigger in above[chain[-1]]:
            yield from extend(chain + [bigger], top)

    for top in range(1, space.dim):
        for start in subspaces:
            for chain in extend([start], top):
                mapping = {top - i: s for i, s in enumerate(chain)}
                for a in range(1, top + 1):
                    mapping[1 - a] = space.perp(mapping[a])
                try:
                    filtration = QFiltration.from_levels(space, mapping)
                    if filtration.top != top:
                        continue
                    split_filtration(filtration)
                except NotOGood:
                    continue
                found.append(filtration)
    unique = sorted(set(found), key=QFiltration.sort_key)
    flog.fields(dim=space.dim, count=len(unique)).debug("Enumerated filtrations")
    return unique


__all__ = (
    "BarData",
    "OGoodGrading",
    "Profile",
    "QFiltration",
    "a_blocks",
    "admissible_profiles",
    "bar_conditions",
    "bar_decomposition",
    "bar_form",
    "condition_a",
    "condition_a_prime",
    "condition_b_kernel_form",
    "condition_b_prime",
    "enumerate_filtrations",
    "eta_vanishing",
    "graded_form_count",
    "graded_forms",
    "in_S2_0",
    "in_eta",
    "is_graded",
    "split_filtration",
    "standard_filtration",
    "standard_grading",
)
