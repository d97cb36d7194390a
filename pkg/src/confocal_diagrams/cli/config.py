"""Validated run configuration shared by all subcommands."""
from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.settings import settings


class RunConfig(BaseModel):
    """Command-line options after validation; numeric fields left unset fall back to `settings`."""

    command: Literal["diagram", "solve", "verify", "fixture"]
    input: Optional[Path] = None
    fixture: Optional[str] = None
    output: Optional[Path] = None
    svg: Optional[Path] = None
    obj: Optional[Path] = None
    kind: Optional[Literal["pi", "pu", "ei", "eu"]] = None

    arc_tol: Optional[float] = Field(default=None, gt=0)
    quad_depth: Optional[int] = Field(default=None, ge=0)
    tol: Optional[float] = Field(default=None, gt=0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    threads: Optional[int] = Field(default=None, ge=1)
    keep_zero_length_arcs: bool = False

    union: bool = False
    image: Optional[Path] = None
    cap_angle: float = Field(default=1.0471975511965976, gt=0, lt=3.141592653589793)
    mesh_res: int = Field(default=4, ge=0, le=7)

    problem: Optional[Path] = None
    solution: Optional[Path] = None
    samples: int = Field(default=100_000, ge=1)

    @field_validator("input", "image", "problem", "solution")
    @classmethod
    def must_exist(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.exists():
            raise ValueError(f"file not found: {value}")
        return value

    @model_validator(mode="after")
    def one_source(self) -> "RunConfig":
        if self.command in ("diagram", "verify") and self.problem is None:
            if (self.input is None) == (self.fixture is None):
                raise ValueError("give exactly one of --in and --fixture")
        if self.command == "solve" and (self.input is None) == (self.image is None):
            raise ValueError("give exactly one of --in and --image")
        if self.command == "verify" and (self.solution is None) != (self.problem is None):
            raise ValueError("--solution and --problem go together")
        return self

    def apply(self) -> None:
        """Push explicit numeric options into the shared settings."""
        if self.arc_tol is not None:
            settings.arc_tol = self.arc_tol
        if self.quad_depth is not None:
            settings.quad_depth = self.quad_depth
        if self.tol is not None:
            settings.solver_tol = self.tol
        if self.max_iter is not None:
            settings.max_iter = self.max_iter
        if self.seed is not None:
            settings.seed = self.seed
        if self.threads is not None:
            settings.threads = self.threads
        if self.keep_zero_length_arcs:
            settings.keep_zero_length_arcs = True
