"""
JSON files of quadric families and weighted points.

Rationals are written as integers or "p/q" strings; decimal strings are
read exactly.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..core.exceptions import GeometryError, InputFormatError
from ..kernel.rational import format_rational, parse_rational
from ..power.weighted_point import WeightedPoint
from .types import DiagramKind, Ellipsoid, Paraboloid, Quadric, UnitDirection

RationalField = Union[int, str, list[int]]


def _rational(value):
    if isinstance(value, list):
        if len(value) != 2:
            raise ValueError("a rational pair must be [numerator, denominator]")
        return parse_rational(f"{value[0]}/{value[1]}")
    return parse_rational(value)


def _reject_floats(value):
    values = value if isinstance(value, list) else [value]
    for v in values:
        if isinstance(v, float):
            raise ValueError("floats are not accepted; use a decimal string or p/q")
    return value


class ParaboloidRecord(BaseModel):
    y: list[RationalField] = Field(min_length=3, max_length=3)
    lambda_: RationalField = Field(alias="lambda")

    model_config = {"populate_by_name": True}

    reject_floats = field_validator("y", "lambda_", mode="before")(_reject_floats)


class EllipsoidRecord(BaseModel):
    yhat: list[RationalField] = Field(min_length=3, max_length=3)
    m: RationalField
    e: RationalField

    reject_floats = field_validator("yhat", "m", "e", mode="before")(_reject_floats)


class QuadricFile(BaseModel):
    kind: Literal["pi", "pu", "ei", "eu"]
    quadrics: list[Union[ParaboloidRecord, EllipsoidRecord]]

    @model_validator(mode="after")
    def _consistent(self) -> "QuadricFile":
        want = EllipsoidRecord if self.kind in ("ei", "eu") else ParaboloidRecord
        for k, q in enumerate(self.quadrics):
            if not isinstance(q, want):
                raise ValueError(f"quadrics[{k}] does not match kind {self.kind!r}")
        return self


class PointRecord(BaseModel):
    p: list[RationalField] = Field(min_length=3, max_length=3)
    w: RationalField
    index: Optional[int] = None

    reject_floats = field_validator("p", "w", mode="before")(_reject_floats)


class PointFile(BaseModel):
    points: list[PointRecord]


def _to_quadric(record: Union[ParaboloidRecord, EllipsoidRecord]) -> Quadric:
    if isinstance(record, ParaboloidRecord):
        return Paraboloid(UnitDirection(tuple(_rational(c) for c in record.y)), _rational(record.lambda_))
    return Ellipsoid(UnitDirection(tuple(_rational(c) for c in record.yhat)), _rational(record.m), _rational(record.e))


def parse_quadric_document(data: dict) -> tuple[DiagramKind, list[Quadric]]:
    """
    Validate a decoded quadric document.

    Raises:
        InputFormatError: With field-level diagnostics on any failure.
    """
    try:
        doc = QuadricFile.model_validate(data)
        return DiagramKind.parse(doc.kind), [_to_quadric(q) for q in doc.quadrics]
    except ValidationError as exc:
        raise InputFormatError("invalid quadric file", {"errors": _describe(exc)}) from exc
    except (GeometryError, ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"invalid quadric: {exc}", {"errors": [str(exc)]}) from exc


def parse_point_document(data: dict) -> list[WeightedPoint]:
    try:
        doc = PointFile.model_validate(data)
        return [
            WeightedPoint(tuple(_rational(c) for c in r.p), _rational(r.w), r.index if r.index is not None else k)
            for k, r in enumerate(doc.points)
        ]
    except ValidationError as exc:
        raise InputFormatError("invalid weighted-point file", {"errors": _describe(exc)}) from exc
    except (ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"invalid weighted point: {exc}", {"errors": [str(exc)]}) from exc


def _describe(exc: ValidationError) -> list[str]:
    return [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()]


def read_json(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}",
                               {"line": exc.lineno, "column": exc.colno}) from exc
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc


def load_quadrics(path: Path) -> tuple[DiagramKind, list[Quadric]]:
    return parse_quadric_document(read_json(path))


def load_points(path: Path) -> list[WeightedPoint]:
    return parse_point_document(read_json(path))


def quadric_document(kind: DiagramKind, quadrics: list[Quadric]) -> dict:
    """Canonical JSON-ready form of a quadric family."""
    records = []
    for q in quadrics:
        if isinstance(q, Paraboloid):
            records.append({"y": [format_rational(c) for c in q.direction.y], "lambda": format_rational(q.focal)})
        else:
            records.append({
                "yhat": [format_rational(c) for c in q.direction.y],
                "m": format_rational(q.distance),
                "e": format_rational(q.eccentricity),
            })
    return {"kind": kind.value, "quadrics": records}


def point_document(points: list[WeightedPoint]) -> dict:
    return {
        "points": [
            {"p": [format_rational(c) for c in p.position], "w": format_rational(p.weight), "index": p.index}
            for p in points
        ]
    }


def save_quadrics(path: Path, kind: DiagramKind, quadrics: list[Quadric]) -> None:
    Path(path).write_text(json.dumps(quadric_document(kind, quadrics), indent=2), encoding="utf-8")
