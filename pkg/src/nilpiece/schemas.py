# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
JSON documents read and written by nilpiece.
"""

from __future__ import annotations

import json
import os
import typing as t

import numpy as np
import pydantic as p
from antsibull_core.pydantic import forbid_extras, get_formatted_error_messages
from antsibull_fileutils.yaml import load_yaml_file

from .constants import SCHEMA_TAG
from .exceptions import InputFormatError, NilpieceError
from .field import Field
from .grading import Profile, QFiltration
from .quadspace import AlternatingForm, QuadraticSpace

SchemaTag = t.Literal["nilpiece/1"]


class FieldDoc(p.BaseModel):
    """
    A finite field given by its characteristic, degree and modulus (coefficients
    low to high).
    """

    p: int
    k: int = 1
    modulus: t.Optional[list[int]] = None

    @classmethod
    def from_field(cls, field: Field) -> FieldDoc:
        return cls(p=field.p, k=field.k, modulus=list(field.modulus))

    def to_field(self) -> Field:
        return Field(self.p, self.k, self.modulus)


class FormDoc(p.BaseModel):
    """
    An alternating form on the standard space of rank ``N``.

    Exactly one of ``lower`` (strictly lower triangle, row by row) and
    ``gram`` (the full matrix) must be given.  Entries are packed field
    elements.
    """

    schema_: t.Optional[SchemaTag] = p.Field(default=None, alias="schema")
    field: t.Optional[FieldDoc] = None
    N: t.Optional[int] = None
    lower: t.Optional[list[int]] = None
    gram: t.Optional[list[list[int]]] = None

    model_config = p.ConfigDict(populate_by_name=True)

    @p.model_validator(mode="after")
    def _one_matrix(self) -> FormDoc:
        if (self.lower is None) == (self.gram is None):
            raise ValueError("exactly one of 'lower' and 'gram' must be given")
        return self

    def to_form(self, space: QuadraticSpace) -> AlternatingForm:
        if self.lower is not None:
            return AlternatingForm.from_lower(space, self.lower)
        return AlternatingForm(space, np.array(self.gram, dtype=np.int64))


class LevelDoc(p.BaseModel):
    """The level ``V^{>=a}`` given by the rows of its reduced echelon basis."""

    a: int
    basis: list[list[int]]


class FiltrationDoc(p.BaseModel):
    top: int
    levels: list[LevelDoc]

    @classmethod
    def from_filtration(cls, filtration: QFiltration) -> FiltrationDoc:
        return cls(
            top=filtration.top,
            levels=[
                LevelDoc(a=a, basis=filtration.at(a).basis.tolist())
                for a in filtration.degrees()
            ],
        )

    def to_filtration(self, space: QuadraticSpace) -> QFiltration:
        return QFiltration.from_levels(
            space, {level.a: space.span(level.basis) for level in self.levels}
        )


class ProfileDoc(p.BaseModel):
    """Dimensions ``f_a`` as ``[a, f_a]`` pairs with ``a >= 0``."""

    f: list[tuple[int, int]]

    @classmethod
    def from_profile(cls, profile: Profile) -> ProfileDoc:
        return cls(f=list(profile.values))

    def to_profile(self) -> Profile:
        return Profile.from_mapping(dict(self.f))


class TraceRecordDoc(p.BaseModel):
    """One recursion level of the characteristic 2 classifier."""

    dim: int
    m: int
    lambda1: t.Optional[int]
    l1: t.Optional[int]
    rho_zero: t.Optional[bool]
    case: str
    n: int


class ClassificationDoc(p.BaseModel):
    schema_: SchemaTag = p.Field(default=SCHEMA_TAG, alias="schema")
    field: FieldDoc
    N: int
    lower: list[int]
    profile: list[tuple[int, int]]
    label: str
    filtration: FiltrationDoc
    trace: t.Optional[list[TraceRecordDoc]] = None

    model_config = p.ConfigDict(populate_by_name=True)


class CheckDoc(p.BaseModel):
    """A named comparison of a computed value against its expected value."""

    name: str
    expected: t.Union[int, str, bool]
    actual: t.Union[int, str, bool]
    passed: bool


class ProfileCountDoc(p.BaseModel):
    label: str
    profile: list[tuple[int, int]]
    count: int


class CensusDoc(p.BaseModel):
    schema_: SchemaTag = p.Field(default=SCHEMA_TAG, alias="schema")
    field: FieldDoc
    N: int
    total: int
    tally: list[ProfileCountDoc]
    checks: list[CheckDoc]
    elapsed: t.Optional[float] = None

    model_config = p.ConfigDict(populate_by_name=True)


class ReportDoc(p.BaseModel):
    """
    Result of a verification command.  ``mismatches`` lists findings in a
    canonical order; ``details`` carries named values such as interpolated
    polynomials.  ``passed`` is true when there are no mismatches and every
    check passed.
    """

    schema_: SchemaTag = p.Field(default=SCHEMA_TAG, alias="schema")
    command: str
    parameters: dict[str, t.Union[int, str, list[int]]]
    checks: list[CheckDoc] = []
    mismatches: list[str] = []
    details: t.Optional[dict[str, str]] = None
    passed: bool
    elapsed: t.Optional[float] = None

    model_config = p.ConfigDict(populate_by_name=True)


class GroupCacheDoc(p.BaseModel):
    """
    An enumerated isometry group.  Every element is stored flattened row by
    row.
    """

    schema_: SchemaTag = p.Field(default=SCHEMA_TAG, alias="schema")
    field: FieldDoc
    N: int
    elements: list[list[int]]
    special: list[bool]

    model_config = p.ConfigDict(populate_by_name=True)


for _model in (
    FieldDoc,
    FormDoc,
    LevelDoc,
    FiltrationDoc,
    ProfileDoc,
    TraceRecordDoc,
    ClassificationDoc,
    CheckDoc,
    ProfileCountDoc,
    CensusDoc,
    ReportDoc,
    GroupCacheDoc,
):
    forbid_extras(_model)

ModelT = t.TypeVar("ModelT", bound=p.BaseModel)


def load_document(path: str, model: type[ModelT]) -> ModelT:
    """
    Load a JSON or YAML (``.yml``/``.yaml``) file and validate it against
    ``model``.
    """
    try:
        if os.path.splitext(path)[1] in (".yml", ".yaml"):
            data = load_yaml_file(path)
        else:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
    except (OSError, ValueError) as exc:
        raise InputFormatError(f"cannot read {path}: {exc}", context="input") from exc
    try:
        return model.model_validate(data)
    except p.ValidationError as exc:
        messages = "; ".join(get_formatted_error_messages(exc))
        raise InputFormatError(f"{path}: {messages}", context="input") from exc


def dump_document(document: p.BaseModel) -> str:
    """Serialize with sorted keys, two-space indent and a final newline."""
    data = document.model_dump(mode="json", by_alias=True, exclude_none=True)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def read_form(path: str, space: QuadraticSpace) -> AlternatingForm:
    """
    Read a form document and check it agrees with the requested space.
    """
    doc = load_document(path, FormDoc)
    if doc.N is not None and space.rank is not None and doc.N != space.rank:
        raise InputFormatError(
            f"{path} describes a form for N={doc.N}, not N={space.rank}",
            context="input",
        )
    if doc.field is not None:
        try:
            field = doc.field.to_field()
        except NilpieceError as exc:
            raise InputFormatError(f"{path}: {exc}", context="input") from exc
        if field != space.field:
            raise InputFormatError(
                f"{path} describes a form over {field}, not {space.field}",
                context="input",
            )
    entries = doc.lower if doc.lower is not None else doc.gram
    if np.any(np.array(entries, dtype=np.int64) >= space.field.q) or np.any(
        np.array(entries, dtype=np.int64) < 0
    ):
        raise InputFormatError(
            f"{path} has entries outside {space.field}", context="input"
        )
    try:
        return doc.to_form(space)
    except NilpieceError as exc:
        raise InputFormatError(f"{path}: {exc}", context="input") from exc


__all__ = (
    "CensusDoc",
    "CheckDoc",
    "ClassificationDoc",
    "FieldDoc",
    "FiltrationDoc",
    "FormDoc",
    "GroupCacheDoc",
    "LevelDoc",
    "ProfileCountDoc",
    "ProfileDoc",
    "ReportDoc",
    "TraceRecordDoc",
    "dump_document",
    "load_document",
    "read_form",
)
