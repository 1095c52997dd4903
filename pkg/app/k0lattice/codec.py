"""JSON payloads for classes, operators, descriptors, tuples and generator sets.

Rationals travel as "p/q" or "p" strings, never floats. Coefficient lists are
in ascending basis index.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, TypeAdapter, model_validator

from .exceptional import ExceptionalTuple, is_exceptional, is_lattice_basis, tuple_gram
from .isometry import GeneratorSet, IsometryDescriptor
from .lattice import BasisTag, GramMatrix, K0Class
from .linalg import QMatrix
from .operators import OperatorMatrix, OperatorSeries, odd_rank


def _rational_str(value: Any) -> str:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, str):
        try:
            return str(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise ValueError(f"rationals must be strings like \"p/q\", got {type(value).__name__}")


# Normalized on input: "2/4" -> "1/2", 3 -> "3".
Rational = Annotated[str, BeforeValidator(_rational_str)]


def fmt(x: Fraction) -> str:
    return str(x)


def fmt_vector(values) -> List[str]:
    return [fmt(v) for v in values]


def fmt_matrix(m: QMatrix) -> List[List[str]]:
    return [fmt_vector(row) for row in m]


def _parse(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


class Payload(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ClassPayload(Payload):
    n: int = Field(ge=0)
    basis: BasisTag
    coeffs: List[Rational]

    @model_validator(mode="after")
    def _length(self) -> "ClassPayload":
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coeffs for n={self.n}, got {len(self.coeffs)}")
        return self

    @classmethod
    def of(cls, e: K0Class, basis: Optional[BasisTag] = None) -> "ClassPayload":
        e = e.to(basis) if basis is not None else e
        return cls(n=e.n, basis=e.basis, coeffs=fmt_vector(e.coeffs))

    def to_class(self) -> K0Class:
        return K0Class(self.n, self.basis, _parse(self.coeffs))


class SeriesPayload(Payload):
    n: int = Field(ge=0)
    repr: Literal["d_poly"] = "d_poly"
    coeffs: List[Rational]

    @model_validator(mode="after")
    def _length(self) -> "SeriesPayload":
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coeffs for n={self.n}, got {len(self.coeffs)}")
        return self

    @classmethod
    def of(cls, s: OperatorSeries) -> "SeriesPayload":
        return cls(n=s.n, coeffs=fmt_vector(s.c))

    def to_operator(self) -> OperatorSeries:
        return OperatorSeries(self.n, _parse(self.coeffs))


class MatrixPayload(Payload):
    n: Optional[int] = Field(default=None, ge=0)  # inferred from rows when absent
    repr: Literal["matrix"] = "matrix"
    basis: BasisTag = BasisTag.STRUCTURE_SHEAF
    rows: List[List[Rational]]

    @model_validator(mode="after")
    def _square(self) -> "MatrixPayload":
        size = len(self.rows)
        if size == 0 or any(len(r) != size for r in self.rows):
            raise ValueError("rows must form a non-empty square matrix")
        if self.n is None:
            self.n = size - 1
        elif self.n != size - 1:
            raise ValueError(f"a {size}x{size} matrix does not act on K0 for n={self.n}")
        return self

    @classmethod
    def of(cls, m: OperatorMatrix) -> "MatrixPayload":
        return cls(n=m.n, basis=m.basis, rows=fmt_matrix(m.entries))

    def to_operator(self) -> OperatorMatrix:
        return OperatorMatrix(self.n, self.basis, tuple(_parse(r) for r in self.rows))


OperatorPayload = Annotated[Union[SeriesPayload, MatrixPayload], Field(discriminator="repr")]
operator_adapter = TypeAdapter(OperatorPayload)


class DescriptorPayload(Payload):
    n: Optional[int] = Field(default=None, ge=0)
    sign: Literal[1, -1] = 1
    odd_coeffs: List[Rational]

    @classmethod
    def of(cls, d: IsometryDescriptor, with_n: bool = True) -> "DescriptorPayload":
        return cls(n=d.n if with_n else None, sign=d.sign, odd_coeffs=fmt_vector(d.odd))

    def to_descriptor(self, n: Optional[int] = None) -> IsometryDescriptor:
        dim = self.n if self.n is not None else n
        if dim is None:
            raise ValueError("descriptor needs n")
        if len(self.odd_coeffs) != odd_rank(dim):
            raise ValueError(f"expected {odd_rank(dim)} odd_coeffs for n={dim}, got {len(self.odd_coeffs)}")
        return IsometryDescriptor(dim, self.sign, _parse(self.odd_coeffs))


IsometryInput = Union[DescriptorPayload, SeriesPayload, MatrixPayload]
isometry_input_adapter = TypeAdapter(IsometryInput)


class TuplePayload(Payload):
    n: int = Field(ge=0)
    classes: List[ClassPayload]

    @classmethod
    def of(cls, t: ExceptionalTuple, basis: BasisTag = BasisTag.LINE_BUNDLE) -> "TuplePayload":
        return cls(n=t.n, classes=[ClassPayload.of(e, basis) for e in t.classes])

    def to_tuple(self) -> ExceptionalTuple:
        return ExceptionalTuple(self.n, tuple(c.to_class() for c in self.classes))


class GramPayload(Payload):
    n: int
    basis: BasisTag
    rows: List[List[Rational]]

    @classmethod
    def of(cls, g: GramMatrix) -> "GramPayload":
        return cls(n=g.n, basis=g.basis, rows=fmt_matrix(g.entries))


class GeneratorSetPayload(Payload):
    n: int
    generators: List[DescriptorPayload]
    hnf: List[List[Rational]]
    tensor_classes: List[ClassPayload]

    @classmethod
    def of(cls, gs: GeneratorSet) -> "GeneratorSetPayload":
        return cls(
            n=gs.n,
            generators=[DescriptorPayload.of(g, with_n=False) for g in gs.generators],
            hnf=fmt_matrix(gs.basis),
            tensor_classes=[ClassPayload.of(e, BasisTag.STRUCTURE_SHEAF) for e in gs.tensor_classes()],
        )


class PartialTable(Payload):
    """What a budget-exhausted search had found so far."""

    partial: Literal[True] = True
    table: dict


class MutationReport(Payload):
    result: TuplePayload
    word: str
    exceptional: bool
    lattice_basis: bool
    gram: List[List[Rational]]

    @classmethod
    def of(cls, t: ExceptionalTuple, word: str) -> "MutationReport":
        return cls(
            result=TuplePayload.of(t),
            word=word,
            exceptional=is_exceptional(t),
            lattice_basis=is_lattice_basis(t),
            gram=fmt_matrix(tuple_gram(t)),
        )


class IsometryReport(Payload):
    lattice: bool
    reason: Optional[str] = None
    classification: DescriptorPayload
    tensor_class: ClassPayload


def dump(model: BaseModel) -> str:
    return model.model_dump_json(indent=2, exclude_none=True)
