# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Exact arithmetic in small finite fields GF(p^k).

Elements are packed integers ``0 .. q-1``: the base-p digits of the packed
value are the coefficients (low-to-high) of the element as a polynomial
modulo the field's modulus.  All arithmetic goes through lookup tables that
are built once per :class:`Field`, so it works elementwise on numpy arrays.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from antsibull_core.logging import get_module_logger

from .constants import DEFAULT_MODULI, MAX_FIELD_ORDER
from .exceptions import (
    CharacteristicError,
    ConstructionError,
    DivideByZero,
    FieldMismatch,
    SizeError,
)

mlog = get_module_logger(__name__)

Array = npt.NDArray[np.int64]
ArrayLike = npt.ArrayLike


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _poly_remainder(
    poly: Sequence[int], divisor: Sequence[int], p: int
) -> list[int]:
    """Remainder of ``poly`` modulo the monic ``divisor`` over GF(p)."""
    rem = list(poly)
    deg = len(divisor) - 1
    for top in range(len(rem) - 1, deg - 1, -1):
        coeff = rem[top] % p
        if coeff:
            for i, d in enumerate(divisor):
                rem[top - deg + i] = (rem[top - deg + i] - coeff * d) % p
    return [c % p for c in rem[:deg]]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """
    Trial division by every monic polynomial of degree at most half the
    degree of ``modulus``.
    """
    degree = len(modulus) - 1
    for d in range(1, degree // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_remainder(modulus, (*low, 1), p)):
                return False
    return True


def _poly_mulmod(
    a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int
) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_remainder(prod, modulus, p)


class Field:
    """
    The finite field GF(p^k) with table-driven arithmetic.

    Two fields are equal when they have the same characteristic, degree and
    modulus.  Instances are immutable.
    """

    __slots__ = (
        "p",
        "k",
        "q",
        "modulus",
        "generator",
        "_digits",
        "_add",
        "_neg",
        "_mul",
        "_inv",
        "_sqrt",
    )

    p: int
    k: int
    q: int
    modulus: tuple[int, ...]
    generator: int

    def __init__(self, p: int, k: int, modulus: Sequence[int] | None = None) -> None:
        flog = mlog.fields(func="Field.__init__")
        if not _is_prime(p):
            raise ConstructionError(f"{p} is not a prime", context="field")
        if k < 1:
            raise ConstructionError(f"degree {k} must be at least 1", context="field")
        q = p**k
        if q > MAX_FIELD_ORDER:
            raise SizeError(
                f"GF({p}^{k}) has {q} elements, more than {MAX_FIELD_ORDER}",
                context="field",
            )
        if modulus is None:
            modulus = DEFAULT_MODULI.get((p, k), (0, 1) if k == 1 else None)
            if modulus is None:
                raise ConstructionError(
                    f"no default modulus for GF({p}^{k})", context="field"
                )
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ConstructionError(
                f"modulus {list(modulus)} is not monic of degree {k}", context="field"
            )
        if any(not 0 <= c < p for c in modulus):
            raise ConstructionError(
                f"modulus {list(modulus)} has coefficients outside GF({p})",
                context="field",
            )
        if not is_irreducible(modulus, p):
            raise ConstructionError(
                f"modulus {list(modulus)} is reducible over GF({p})", context="field"
            )

        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "modulus", modulus)
        self._build_tables()
        flog.fields(p=p, k=k, modulus=modulus).debug("Built field tables")

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        weights = p ** np.arange(k, dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // weights) % p

        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights

        def pack(coeffs: Sequence[int]) -> int:
            return int(np.dot(coeffs, weights))

        # Search a primitive element; the modulus itself need not be primitive.
        generator = 1
        exp: list[int] = [1]
        for candidate in range(1, q):
            cand_digits = [int(d) for d in digits[candidate]]
            power = cand_digits
            powers = [1]
            while pack(power) != 1:
                powers.append(pack(power))
                power = _poly_mulmod(power, cand_digits, self.modulus, p)
            if len(powers) == q - 1:
                generator, exp = candidate, powers
                break
        exp_arr = np.array(exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[exp_arr] = np.arange(q - 1, dtype=np.int64)

        mul = exp_arr[(log[:, None] + log[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        inv = exp_arr[(-log) % (q - 1)]
        inv[0] = 0
        sqrt = None
        if p == 2:
            sqrt = exp_arr[(log * 2 ** (k - 1)) % (q - 1)]
            sqrt[0] = 0

        for name, value in (
            ("generator", generator),
            ("_digits", digits),
            ("_add", add),
            ("_neg", neg),
            ("_mul", mul),
            ("_inv", inv),
            ("_sqrt", sqrt),
        ):
            object.__setattr__(self, name, value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __str__(self) -> str:
        return f"GF({self.q})"

    @property
    def characteristic(self) -> int:
        return self.p

    #######################
    # Elementwise operations
    #######################

    @staticmethod
    def asarray(values: ArrayLike) -> Array:
        return np.asarray(values, dtype=np.int64)

    def elements(self) -> Array:
        return np.arange(self.q, dtype=np.int64)

    def add(self, a: ArrayLike, b: ArrayLike) -> Array:
        return self._add[a, b]

    def neg(self, a: ArrayLike) -> Array:
        return self._neg[a]

    def sub(self, a: ArrayLike, b: ArrayLike) -> Array:
        return self._add[a, self._neg[b]]

    def mul(self, a: ArrayLike, b: ArrayLike) -> Array:
        return self._mul[a, b]

    def inv(self, a: ArrayLike) -> Array:
        a = self.asarray(a)
        if np.any(a == 0):
            raise DivideByZero(f"zero has no inverse in {self}")
        return self._inv[a]

    def div(self, a: ArrayLike, b: ArrayLike) -> Array:
        return self._mul[a, self.inv(b)]

    def sqrt(self, a: ArrayLike) -> Array:
        """
        The unique square root in characteristic 2, computed as ``a^(2^(k-1))``.
        """
        if self._sqrt is None:
            raise CharacteristicError(
                f"square roots are only provided in characteristic 2, not in {self}"
            )
        return self._sqrt[a]

    def power(self, a: int, exponent: int) -> int:
        if exponent < 0:
            a, exponent = int(self.inv(a)), -exponent
        result = 1
        base = int(a)
        while exponent:
            if exponent & 1:
                result = int(self._mul[result, base])
            base = int(self._mul[base, base])
            exponent >>= 1
        return result

    def sum(self, values: ArrayLike, axis: int = -1) -> Array:
        values = self.asarray(values)
        if self.k == 1:
            return values.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(values, axis=axis)
        values = np.moveaxis(values, axis, 0)
        total = np.zeros(values.shape[1:], dtype=np.int64)
        for row in values:
            total = self._add[total, row]
        return total

    def dot(self, u: ArrayLike, v: ArrayLike) -> int:
        return int(self.sum(self._mul[u, v]))

    def matmul(self, a: ArrayLike, b: ArrayLike) -> Array:
        """
        Matrix product over the field.  Leading dimensions broadcast like
        :func:`numpy.matmul`.
        """
        a = self.asarray(a)
        b = self.asarray(b)
        if self.k == 1:
            return (a @ b) % self.p
        return self.sum(self._mul[a[..., :, :, None], b[..., None, :, :]], axis=-2)

    def matvec(self, a: ArrayLike, v: ArrayLike) -> Array:
        return self.matmul(a, self.asarray(v)[:, None])[:, 0]

    #############
    # Conversions
    #############

    def coefficients(self, a: int) -> tuple[int, ...]:
        return tuple(int(d) for d in self._digits[a])

    def from_coefficients(self, coeffs: Iterable[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ConstructionError(
                f"{coeffs} is not a coefficient vector of {self}", context="element"
            )
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def element(self, value: int | Sequence[int]) -> FieldElement:
        if isinstance(value, (int, np.integer)):
            if not 0 <= value < self.q:
                raise ConstructionError(
                    f"{value} is not a packed element of {self}", context="element"
                )
            return FieldElement(self, int(value))
        return FieldElement(self, self.from_coefficients(value))

    def primitive_element(self) -> FieldElement:
        return FieldElement(self, self.generator)

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise DivideByZero("zero has no multiplicative order")
        order, power = 1, int(a)
        while power != 1:
            power = int(self._mul[power, a])
            order += 1
        return order


@dataclass(frozen=True)
class FieldElement:
    """
    A single element of a :class:`Field`.  Operations between elements of
    different fields raise :class:`FieldMismatch`.
    """

    field: Field
    value: int

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} and {other.field} differ")
            return other.value
        return self.field.element(other).value

    def _wrap(self, value: ArrayLike) -> FieldElement:
        return FieldElement(self.field, int(value))  # type: ignore[arg-type]

    def __add__(self, other: FieldElement | int) -> FieldElement:
        return self._wrap(self.field.add(self.value, self._other(other)))

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        return self._wrap(self.field.sub(self.value, self._other(other)))

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        return self._wrap(self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        return self._wrap(self.field.div(self.value, self._other(other)))

    def __neg__(self) -> FieldElement:
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, exponent: int) -> FieldElement:
        return FieldElement(self.field, self.field.power(self.value, exponent))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def sqrt(self) -> FieldElement:
        return sqrt_char2(self)

    def __bool__(self) -> bool:
        return self.value != 0

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.field.coefficients(self.value)

    def __repr__(self) -> str:
        return f"{self.field}({list(self.coefficients)})"


def field_create(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> Field:
    return Field(p, k, modulus)


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """
    Apply the named operation (``add``, ``sub``, ``mul`` or ``div``).
    """
    try:
        operation = {
            "add": FieldElement.__add__,
            "sub": FieldElement.__sub__,
            "mul": FieldElement.__mul__,
            "div": FieldElement.__truediv__,
        }[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    return operation(a, b)


def sqrt_char2(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, int(a.field.sqrt(a.value)))


__all__ = (
    "Array",
    "Field",
    "FieldElement",
    "arith",
    "field_create",
    "is_irreducible",
    "sqrt_char2",
)
