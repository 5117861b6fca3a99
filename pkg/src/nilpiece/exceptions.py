# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Errors raised by the nilpiece library
"""

from __future__ import annotations


class NilpieceError(Exception):
    """
    Base class for all nilpiece errors.

    ``diagnostic`` is a stable identifier printed by the command line tool.
    """

    diagnostic = "error"

    def __init__(self, message: str, context: str | None = None) -> None:
        self.message = message
        self.context = context
        super().__init__(f"{context}: {message}" if context else message)


class ConstructionError(NilpieceError):
    """A field or space could not be built from the given parameters."""

    diagnostic = "bad-construction"


class SizeError(NilpieceError):
    """A size guard refused a computation."""

    diagnostic = "size-guard"


class FieldMismatch(NilpieceError):
    """Operands belong to different fields."""

    diagnostic = "field-mismatch"


class DivideByZero(NilpieceError):
    diagnostic = "divide-by-zero"


class CharacteristicError(NilpieceError):
    """The operation is only defined in another characteristic."""

    diagnostic = "wrong-characteristic"


class NotWellDefined(NilpieceError):
    """A form or map does not descend to a quotient."""

    diagnostic = "not-well-defined"


class InternalInvariantViolation(NilpieceError):
    """
    A structural invariant failed after construction.  This always signals
    a bug (or a mathematical finding), never bad user input.
    """

    diagnostic = "internal-invariant"


class NotOGood(NilpieceError):
    """The filtration does not admit an o-good splitting."""

    diagnostic = "not-o-good"


class NotInEta(NilpieceError):
    """The form does not satisfy the vanishing condition of the filtration."""

    diagnostic = "not-in-eta"


class NotGraded(NilpieceError):
    """The form is not homogeneous of degree -2 for the grading."""

    diagnostic = "not-graded"


class SubspaceError(NilpieceError):
    """Subspaces live in different ambient spaces, or a containment fails."""

    diagnostic = "bad-subspace"


class ZeroInput(NilpieceError):
    diagnostic = "zero-input"


class NotNilpotent(NilpieceError):
    diagnostic = "not-nilpotent"


class InputFormatError(NilpieceError):
    """An input document could not be parsed or validated."""

    diagnostic = "bad-input"


ALL_ERRORS: tuple[type[NilpieceError], ...] = (
    ConstructionError,
    SizeError,
    FieldMismatch,
    DivideByZero,
    CharacteristicError,
    NotWellDefined,
    InternalInvariantViolation,
    NotOGood,
    NotInEta,
    NotGraded,
    SubspaceError,
    ZeroInput,
    NotNilpotent,
    InputFormatError,
)

__all__ = (
    "NilpieceError",
    "ConstructionError",
    "SizeError",
    "FieldMismatch",
    "DivideByZero",
    "CharacteristicError",
    "NotWellDefined",
    "InternalInvariantViolation",
    "NotOGood",
    "NotInEta",
    "NotGraded",
    "SubspaceError",
    "ZeroInput",
    "NotNilpotent",
    "InputFormatError",
    "ALL_ERRORS",
)
