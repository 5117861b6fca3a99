# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Nilpotency of alternating forms and the chain data of a nilpotent form in
characteristic 2
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from antsibull_core.logging import get_module_logger

from .constants import GROUP_MAX_DIM, GROUP_MAX_ORDER
from .exceptions import CharacteristicError, InternalInvariantViolation, NotWellDefined
from .field import Array
from .linalg import (
    QuotientMap,
    Subspace,
    complement,
    inverse,
    is_nilpotent_matrix,
    kernel,
    matrix_power,
    quotient,
    rank,
    solve,
)
from .quadspace import AlternatingForm, QuadraticSpace, q_vanishes_on

mlog = get_module_logger(__name__)


@dataclass(frozen=True, eq=False)
class ChainData:
    """
    The chain ``v_0 .. v_m``, the vectors ``u_0 .. u_{m-1}``, the complement
    ``W`` and the map ``T`` on it attached to an alternating form.

    ``T`` is given in coordinates of the basis rows of ``W`` and acts on
    coefficient columns.  ``lambda1``, ``f``, ``l1`` and ``rho_zero`` are
    ``None`` when ``T`` is not nilpotent.
    """

    space: QuadraticSpace
    m: int
    v: Array
    u: Array
    W: Subspace
    T: Array
    lambda1: int | None
    f: int | None
    l1: int | None
    rho_zero: bool | None

    @property
    def t_nilpotent(self) -> bool:
        return self.lambda1 is not None

    def t_rows(self, exponent: int, coefficients: Array | None = None) -> Array:
        """
        Ambient vectors ``T^e w`` for the basis rows ``w`` of ``W``, or for
        the vectors of ``W`` with the given coefficient rows.
        """
        field = self.space.field
        if coefficients is None:
            coefficients = np.eye(self.W.dim, dtype=np.int64)
        power = matrix_power(field, self.T, exponent)
        return field.matmul(field.matmul(coefficients, power.T), self.W.basis)


@dataclass(frozen=True, eq=False)
class InducedPair:
    """
    ``v_* = (v_0 .. v_{m-1})`` and the map ``T'`` on ``L^perp / L`` with
    ``L = span(v_0 .. v_m)``.  ``gram`` and ``form_gram`` are the induced
    polar form and induced alternating form in quotient coordinates.
    """

    v_star: Array
    quotient: QuotientMap
    gram: Array
    form_gram: Array
    T: Array


def _require_char2(space: QuadraticSpace) -> None:
    if space.field.p != 2:
        raise CharacteristicError(
            f"chains are only defined in characteristic 2, not over {space.field}"
        )


def _normalize(space: QuadraticSpace, vector: Array, radical: Array) -> Array:
    """Add the multiple of the radical vector that makes ``Q`` vanish."""
    field = space.field
    return field.add(vector, field.mul(radical, field.sqrt(space.q(vector))))


def v_chain(form: AlternatingForm) -> Array | None:
    """
    The vectors ``v_0 .. v_m`` as rows, or ``None`` if the chain breaks off.
    """
    space = form.space
    _require_char2(space)
    field = space.field
    radical = space.normalized_radical_vector()
    chain = [radical]
    current = radical
    for _ in range(space.dim):
        functional = form.functional(current)
        if not np.any(functional):
            break
        step = solve(field, space.gram, functional)
        if step is None:
            return None
        current = _normalize(space, step, radical)
        chain.append(current)
        if rank(field, np.array(chain)) < len(chain):
            return None
    else:
        return None
    return np.array(chain[::-1], dtype=np.int64)


def _u_vectors(
    form: AlternatingForm, v: Array, rng: random.Random | None
) -> Array | None:
    space = form.space
    field = space.field
    m = v.shape[0] - 1
    if m == 0:
        return np.zeros((0, space.dim), dtype=np.int64)
    conditions = field.matmul(v[:m], space.gram)
    target = np.zeros(m, dtype=np.int64)
    target[0] = 1
    u0 = solve(field, conditions, target)
    if u0 is None:
        return None
    if rng is not None:
        free = kernel(field, conditions)
        coeffs = np.array([rng.randrange(field.q) for _ in range(free.shape[0])])
        u0 = field.add(u0, field.matvec(free.T, coeffs))
    radical = v[m]
    u = [_normalize(space, u0, radical)]
    for _ in range(1, m):
        step = solve(field, space.gram, form.functional(u[-1]))
        if step is None:
            return None
        u.append(_normalize(space, step, radical))
    return np.array(u, dtype=np.int64)


def _complement_w(form: AlternatingForm, v: Array, u: Array) -> Subspace:
    space = form.space
    field = space.field
    m = v.shape[0] - 1
    if m == 0:
        return complement(space.span(v), space.whole())
    conditions = np.concatenate(
        [
            field.matmul(v[:m], space.gram),
            field.matmul(u, space.gram),
            field.matvec(form.gram, u[m - 1]).reshape(1, -1),
        ]
    )
    return Subspace(field, space.dim, kernel(field, conditions))


def _t_invariants(
    space: QuadraticSpace, m: int, w: Subspace, t: Array
) -> tuple[int | None, int | None, int | None, bool | None]:
    field = space.field
    d = w.dim
    if not is_nilpotent_matrix(field, t):
        return None, None, None, None
    lambda1 = next(
        e for e in range(d + 1) if not np.any(matrix_power(field, t, e))
    )
    f = next(
        e
        for e in range(d + 1)
        if q_vanishes_on(
            space,
            space.span(
                field.matmul(matrix_power(field, t, e).T, w.basis).reshape(-1, space.dim)
            ),
        )
    )
    l1 = max(lambda1 - m, f)
    if lambda1 == 0:
        return lambda1, f, l1, True
    domain = kernel(field, matrix_power(field, t, lambda1 - 1))
    images = field.matmul(
        field.matmul(domain, matrix_power(field, t, l1 - 1).T), w.basis
    )
    return lambda1, f, l1, q_vanishes_on(space, space.span(images))


def extract_chain(
    form: AlternatingForm, rng: random.Random | None = None
) -> ChainData | None:
    """
    Chain data of ``form`` (characteristic 2), or ``None`` when the chain or
    the decomposition ``V = span(v) + span(u) + W`` cannot be built.

    With ``rng``, ``u_0`` is perturbed by a random solution of its
    homogeneous conditions.
    """
    flog = mlog.fields(func="extract_chain")
    space = form.space
    field = space.field
    v = v_chain(form)
    if v is None:
        flog.debug("v-chain breaks off")
        return None
    m = v.shape[0] - 1
    u = _u_vectors(form, v, rng)
    if u is None:
        flog.fields(m=m).debug("u-vectors do not exist")
        return None
    w = _complement_w(form, v, u)
    stacked = np.concatenate([v, u, w.basis])
    if w.dim != space.dim - 2 * m - 1 or rank(field, stacked) != space.dim:
        flog.fields(m=m, w_dim=w.dim).debug("decomposition fails")
        return None
    gram_w = space.pairing(w.basis, w.basis)
    if w.dim and rank(field, gram_w) != w.dim:
        return None
    form_w = form.pairing(w.basis, w.basis)
    t = (
        field.matmul(inverse(field, gram_w), form_w.T)
        if w.dim
        else np.zeros((0, 0), dtype=np.int64)
    )
    lambda1, f, l1, rho_zero = _t_invariants(space, m, w, t)
    chain = ChainData(space, m, v, u, w, t, lambda1, f, l1, rho_zero)
    verify_chain(chain, form)
    flog.fields(m=m, lambda1=lambda1, l1=l1, rho_zero=rho_zero).debug("Chain data")
    return chain


def verify_chain(chain: ChainData, form: AlternatingForm) -> None:
    """
    Re-check the defining identities of the chain exactly.
    """
    space = chain.space
    field = space.field
    v, m = chain.v, chain.m
    problems = []
    if np.any(field.matvec(space.gram, v[m])) or space.q(v[m]) != 1:
        problems.append("v_m is not the normalized radical vector")
    if np.any(form.functional(v[0])):
        problems.append("beta_xi(v_0, -) is not zero")
    for i in range(1, m + 1):
        if not np.array_equal(
            form.functional(v[i]), field.matvec(space.gram, v[i - 1])
        ):
            problems.append(f"beta_xi(v_{i}, -) differs from beta(v_{i - 1}, -)")
    if np.any(space.q_rows(v[:m])):
        problems.append("Q does not vanish on v_0 .. v_{m-1}")
    if chain.W.dim:
        lhs = field.matmul(
            field.matmul(chain.T.T, space.pairing(chain.W.basis, chain.W.basis)),
            np.eye(chain.W.dim, dtype=np.int64),
        )
        if not np.array_equal(lhs, form.pairing(chain.W.basis, chain.W.basis)):
            problems.append("beta(T w, w') differs from beta_xi(w, w')")
    if chain.t_nilpotent:
        assert chain.lambda1 is not None and chain.l1 is not None
        if 2 * chain.l1 < chain.lambda1 or m < chain.lambda1 - chain.l1:
            problems.append("l_1 bounds fail")
    if problems:
        raise InternalInvariantViolation("; ".join(problems), context="chain")


def _induce(form: AlternatingForm, v: Array) -> InducedPair:
    space = form.space
    field = space.field
    span_l = space.span(v)
    qmap = quotient(space.perp(span_l), span_l)
    try:
        gram = qmap.descend_form(space.gram)
        form_gram = qmap.descend_form(form.gram)
    except NotWellDefined as exc:
        raise InternalInvariantViolation(str(exc), context="induced pair") from exc
    t = (
        field.matmul(inverse(field, gram), form_gram.T)
        if qmap.dim
        else np.zeros((0, 0), dtype=np.int64)
    )
    return InducedPair(v[:-1], qmap, gram, form_gram, t)


def induced_pair(chain: ChainData, form: AlternatingForm) -> InducedPair:
    return _induce(form, chain.v)


def v_star_pair(form: AlternatingForm) -> InducedPair | None:
    """
    ``v_*`` and ``T'`` of a form (characteristic 2), or ``None`` when the
    v-chain breaks off.
    """
    _require_char2(form.space)
    v = v_chain(form)
    return None if v is None else _induce(form, v)


def is_nilpotent(form: AlternatingForm) -> bool:
    """
    Membership in the nilpotent cone.

    In characteristic 2 the chain must exist and the induced map ``T'`` must
    be nilpotent; otherwise the map ``A`` with ``beta(A v, w) = B(v, w)``
    must be nilpotent.
    """
    space = form.space
    field = space.field
    if field.p != 2:
        return is_nilpotent_matrix(field, adjoint_map(form))
    v = v_chain(form)
    if v is None:
        return False
    return is_nilpotent_matrix(field, _induce(form, v).T)


def adjoint_map(form: AlternatingForm) -> Array:
    """
    ``A`` with ``beta(A v, w) = B(v, w)``; needs a nondegenerate ``beta``.
    """
    field = form.field
    return field.matmul(inverse(field, form.space.gram), form.gram.T)


def good_basis_oracle(form: AlternatingForm) -> bool:
    """
    Whether some good basis ``e_i`` has ``B(e_i, e_j) = 0`` for ``i + j >= 0``.
    """
    # pylint: disable-next=import-outside-toplevel
    from .group_oracle import enumerate_isometries

    space = form.space
    group = enumerate_isometries(space, max_dim=GROUP_MAX_DIM, max_order=GROUP_MAX_ORDER)
    labels = np.arange(space.dim) - (space.dim - 1) // 2
    mask = labels[:, None] + labels[None, :] >= 0
    pulled = form.pullback(group.elements)
    return bool(np.any(~np.any(pulled[:, mask], axis=1)))


__all__ = (
    "ChainData",
    "InducedPair",
    "adjoint_map",
    "extract_chain",
    "good_basis_oracle",
    "induced_pair",
    "is_nilpotent",
    "v_chain",
    "v_star_pair",
    "verify_chain",
)
