# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Brute force orthogonal groups of small quadratic spaces, centralizers of
alternating forms and stabilizers of Q-filtrations.
"""

from __future__ import annotations

import os
import random
from collections.abc import Iterator
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np
from antsibull_core.logging import get_module_logger

from .constants import GROUP_MAX_DIM, GROUP_MAX_ORDER
from .exceptions import SizeError
from .field import Array, ArrayLike
from .grading import (
    QFiltration,
    admissible_profiles,
    graded_forms,
    in_S2_0,
    split_filtration,
    standard_filtration,
)
from .linalg import determinants, inverse, kernel
from .quadspace import AlternatingForm, QuadraticSpace, all_vectors
from .utils.parallel import partition, resolve_jobs, run_partitions

mlog = get_module_logger(__name__)

#: Number of partial assignments (or group elements) handled per numpy batch.
BATCH_SIZE = 2048

_GROUPS: dict[QuadraticSpace, IsometryGroup] = {}


def _batches(array: Array, size: int = BATCH_SIZE) -> Iterator[Array]:
    for start in range(0, array.shape[0], size):
        yield array[start : start + size]


@dataclass(frozen=True, eq=False)
class IsometryGroup:
    """
    All ``g`` with ``Q(g v) = Q(v)``, stacked as an array of shape
    ``(order, dim, dim)`` in a canonical order.  ``special`` marks the
    elements of ``SO(V)``.
    """

    space: QuadraticSpace
    elements: Array
    special: Array

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @cached_property
    def so_elements(self) -> Array:
        return self.elements[self.special]

    @cached_property
    def _members(self) -> frozenset[bytes]:
        return frozenset(g.tobytes() for g in self.elements)

    def contains(self, g: ArrayLike) -> bool:
        return self.space.field.asarray(g).astype(np.int64).tobytes() in self._members

    def check_closure(self, rng: random.Random, samples: int = 16) -> bool:
        """
        Spot check that the identity is present and that random products and
        inverses stay in the group.
        """
        field = self.space.field
        if not self.contains(np.eye(self.space.dim, dtype=np.int64)):
            return False
        for _ in range(samples):
            g = self.elements[rng.randrange(self.order)]
            h = self.elements[rng.randrange(self.order)]
            if not self.contains(field.matmul(g, h)):
                return False
            if not self.contains(inverse(field, g)):
                return False
        return True

    @staticmethod
    def cache_path(space: QuadraticSpace, cache_dir: str) -> str:
        field = space.field
        return os.path.join(cache_dir, f"isometries-{field.p}-{field.k}-{space.rank}.json")

    def save(self, cache_dir: str) -> None:
        # pylint: disable-next=import-outside-toplevel
        from .schemas import FieldDoc, GroupCacheDoc, dump_document

        if self.space.rank is None:
            return
        doc = GroupCacheDoc(
            field=FieldDoc.from_field(self.space.field),
            N=self.space.rank,
            elements=self.elements.reshape(self.order, -1).tolist(),
            special=self.special.tolist(),
        )
        os.makedirs(cache_dir, exist_ok=True)
        with open(self.cache_path(self.space, cache_dir), "w", encoding="utf-8") as f:
            f.write(dump_document(doc))

    @classmethod
    def load(cls, space: QuadraticSpace, cache_dir: str) -> IsometryGroup | None:
        """
        The cached group of a standard space, or ``None`` if there is no
        usable cache entry.
        """
        # pylint: disable-next=import-outside-toplevel
        from .schemas import GroupCacheDoc, load_document

        flog = mlog.fields(func="IsometryGroup.load")
        if space.rank is None:
            return None
        path = cls.cache_path(space, cache_dir)
        if not os.path.exists(path):
            return None
        doc = load_document(path, GroupCacheDoc)
        if doc.field.to_field() != space.field or doc.N != space.rank:
            flog.fields(path=path).warning("Ignoring cache entry for another space")
            return None
        elements = np.array(doc.elements, dtype=np.int64).reshape(
            -1, space.dim, space.dim
        )
        flog.fields(path=path, order=elements.shape[0]).debug("Loaded isometry group")
        return cls(space, elements, np.array(doc.special, dtype=bool))


@dataclass(frozen=True)
class _SearchTables:
    vectors: Array
    qvals: Array
    beta: Array
    upper: Array
    gram: Array


def _search_tables(space: QuadraticSpace) -> _SearchTables:
    vectors = all_vectors(space)[1:]
    qvals = space.q_rows(vectors)
    beta = np.concatenate([space.pairing(chunk, vectors) for chunk in _batches(vectors)])
    return _SearchTables(vectors, qvals, beta, space.upper, space.gram)


def _extend(tables: _SearchTables, roots: list[int]) -> Array:
    """
    All index tuples ``(i_0, ..., i_{n-1})`` with first entry in ``roots``
    such that ``e_j -> vectors[i_j]`` preserves ``Q``.
    """
    dim = tables.upper.shape[0]
    partial = np.array(roots, dtype=np.int64).reshape(-1, 1)
    for depth in range(1, dim):
        candidates = np.flatnonzero(tables.qvals == tables.upper[depth, depth])
        against = tables.beta[:, candidates]
        grown = []
        for chunk in _batches(partial):
            ok = np.ones((chunk.shape[0], candidates.shape[0]), dtype=bool)
            for j in range(depth):
                ok &= against[chunk[:, j]] == tables.gram[j, depth]
            rows, cols = np.nonzero(ok)
            grown.append(
                np.concatenate([chunk[rows], candidates[cols].reshape(-1, 1)], axis=1)
            )
        partial = (
            np.concatenate(grown) if grown else np.zeros((0, depth + 1), dtype=np.int64)
        )
    return partial


def enumerate_isometries(
    space: QuadraticSpace,
    max_dim: int | None = GROUP_MAX_DIM,
    max_order: int | None = GROUP_MAX_ORDER,
    jobs: int | None = None,
    cache_dir: str | None = None,
) -> IsometryGroup:
    """
    The full orthogonal group of ``space``.

    Images of the coordinate vectors are chosen one at a time among the
    vectors with the right value of ``Q`` and the right pairings with the
    images chosen so far.  The root choices are partitioned over ``jobs``
    workers.  ``None`` lifts a size guard.
    """
    flog = mlog.fields(func="enumerate_isometries")
    field = space.field
    if (max_dim is not None and space.dim > max_dim) or (
        max_order is not None and field.q > max_order
    ):
        raise SizeError(
            f"isometry enumeration for dim {space.dim} over {field} exceeds"
            f" dim <= {max_dim}, q <= {max_order}",
            context="group",
        )
    if space in _GROUPS:
        return _GROUPS[space]
    if cache_dir is not None:
        cached = IsometryGroup.load(space, cache_dir)
        if cached is not None:
            _GROUPS[space] = cached
            return cached

    tables = _search_tables(space)
    roots = np.flatnonzero(tables.qvals == space.upper[0, 0]).tolist()
    jobs = resolve_jobs(jobs)
    parts = partition(roots, jobs)
    results = run_partitions(lambda part: _extend(tables, part), parts, jobs=jobs)
    indices = np.concatenate(results) if results else np.zeros((0, space.dim), np.int64)
    indices = indices[np.lexsort(indices.T[::-1])]
    # column j of g is the image of the j-th coordinate vector
    elements = np.swapaxes(tables.vectors[indices], 1, 2).copy()
    special = np.ones(elements.shape[0], dtype=bool)
    if field.p != 2:
        for start in range(0, elements.shape[0], BATCH_SIZE):
            chunk = elements[start : start + BATCH_SIZE]
            special[start : start + BATCH_SIZE] = determinants(field, chunk) == 1
    group = IsometryGroup(space, elements, special)
    flog.fields(
        dim=space.dim, q=field.q, order=group.order, so_order=int(special.sum())
    ).info("Enumerated isometry group")
    _GROUPS[space] = group
    if cache_dir is not None:
        group.save(cache_dir)
    return group


def centralizer_mask(elements: Array, form: AlternatingForm) -> Array:
    """Which of the stacked ``elements`` preserve ``form``."""
    if not elements.shape[0]:
        return np.zeros(0, dtype=bool)
    return np.concatenate(
        [
            np.all(form.pullback(chunk) == form.gram, axis=(1, 2))
            for chunk in _batches(elements)
        ]
    )


def centralizer(group: IsometryGroup, form: AlternatingForm) -> Array:
    """The elements of ``SO(V)`` preserving ``form``."""
    so = group.so_elements
    return so[centralizer_mask(so, form)]


def stabilizer_mask(elements: Array, filtration: QFiltration) -> Array:
    """Which of the stacked ``elements`` map every level onto itself."""
    field = filtration.space.field
    mask = np.ones(elements.shape[0], dtype=bool)
    for level in filtration.levels:
        if level.dim in (0, level.ambient):
            continue
        annihilator = kernel(field, level.basis)
        parts = []
        for chunk in _batches(elements):
            moved = field.matmul(field.matmul(annihilator, chunk), level.basis.T)
            parts.append(~np.any(moved, axis=(1, 2)))
        mask &= np.concatenate(parts)
    return mask


def stabilizes_filtration(g: ArrayLike, filtration: QFiltration) -> bool:
    return all(level.apply(g) == level for level in filtration.levels)


@dataclass
class Prop2Report:
    """
    Outcome of comparing the centralizer criterion with the open graded
    forms for one filtration.
    """

    filtration: QFiltration
    forms_checked: int = 0
    open_forms: int = 0
    mismatches: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def verify_prop2(
    space: QuadraticSpace,
    filtration: QFiltration,
    group: IsometryGroup | None = None,
    jobs: int | None = None,
) -> Prop2Report:
    """
    For every graded form ``B`` of a grading splitting ``filtration``, check
    that the centralizer of ``B`` in ``SO(V)`` stabilizes the filtration
    exactly when ``B`` lies in the open part.
    """
    flog = mlog.fields(func="verify_prop2")
    if group is None:
        group = enumerate_isometries(space, jobs=jobs)
    grading = split_filtration(filtration)
    so = group.so_elements
    stable = stabilizer_mask(so, filtration)
    report = Prop2Report(filtration)
    for form in graded_forms(grading):
        report.forms_checked += 1
        contained = not np.any(centralizer_mask(so, form) & ~stable)
        expected = in_S2_0(grading, form)
        report.open_forms += int(expected)
        if contained != expected:
            message = (
                f"profile {filtration.profile()}: form {form.lower().tolist()}"
                f" open={expected} centralizer-in-stabilizer={contained}"
            )
            flog.warning(message)
            report.mismatches.append(message)
    flog.fields(
        profile=str(filtration.profile()),
        forms=report.forms_checked,
        mismatches=len(report.mismatches),
    ).debug("Compared centralizers")
    return report


def verify_prop2_all(
    space: QuadraticSpace, group: IsometryGroup | None = None, jobs: int | None = None
) -> list[Prop2Report]:
    """:func:`verify_prop2` for the standard filtration of every admissible profile."""
    if group is None:
        group = enumerate_isometries(space, jobs=jobs)
    return [
        verify_prop2(space, standard_filtration(space, profile), group)
        for profile in admissible_profiles(space.dim)
    ]


__all__ = (
    "IsometryGroup",
    "Prop2Report",
    "centralizer",
    "centralizer_mask",
    "enumerate_isometries",
    "stabilizer_mask",
    "stabilizes_filtration",
    "verify_prop2",
    "verify_prop2_all",
)
