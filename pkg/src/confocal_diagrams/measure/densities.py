"""
Densities on the unit sphere.

A density is a vectorized callable on unit vectors of shape (M, 3). When
it is supported on a closed hemisphere {⟨u, axis⟩ >= 0}, `support_axis`
names that hemisphere so tessellations can be clipped to it exactly.
"""
from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator
from scipy.interpolate import RegularGridInterpolator

from ..core.exceptions import InputFormatError
from ..core.logging_config import get_logger

logger = get_logger(__name__)

FOUR_PI = 4.0 * math.pi


class Density(ABC):
    """Non-negative density on the unit sphere."""

    support_axis: Optional[np.ndarray] = None

    @abstractmethod
    def __call__(self, u: np.ndarray) -> np.ndarray:
        """Values at unit vectors `u` of shape (M, 3)."""

    @abstractmethod
    def total_mass(self) -> float:
        """Integral over the whole sphere."""

    @abstractmethod
    def to_spec(self) -> "DensitySpec":
        """Serializable description."""


class Constant(Density):
    """Constant density; the default value makes it a probability density."""

    def __init__(self, value: float = 1.0 / FOUR_PI):
        if value < 0:
            raise InputFormatError("density must be non-negative", {"value": value})
        self.value = float(value)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return np.full(len(np.atleast_2d(u)), self.value)

    def total_mass(self) -> float:
        return FOUR_PI * self.value

    def to_spec(self) -> "ConstantSpec":
        return ConstantSpec(value=self.value)

    def __repr__(self) -> str:
        return f"Constant({self.value!r})"


class UniformHemisphere(Density):
    """Uniform probability density on {⟨u, axis⟩ >= 0}; the default is the lower half S²₋."""

    def __init__(self, axis=(0.0, 0.0, -1.0)):
        a = np.asarray(axis, dtype=float)
        norm = float(np.linalg.norm(a))
        if norm == 0.0:
            raise InputFormatError("hemisphere axis must be non-zero")
        self.support_axis = a / norm
        self.value = 1.0 / (2.0 * math.pi)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(u)
        return np.where(u @ self.support_axis >= 0.0, self.value, 0.0)

    def total_mass(self) -> float:
        return 1.0

    def to_spec(self) -> "HemisphereSpec":
        return HemisphereSpec(axis=[float(c) for c in self.support_axis])

    def __repr__(self) -> str:
        return f"UniformHemisphere(axis={self.support_axis.tolist()!r})"


class GridDensity(Density):
    """
    Equirectangular latitude-longitude grid of non-negative weights,
    interpolated bilinearly. Row 0 is the northernmost band; samples sit at
    cell centers.
    """

    def __init__(self, values: np.ndarray, normalization: Literal["probability", "none"] = "probability"):
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 2 or vals.size == 0:
            raise InputFormatError("grid density needs a non-empty 2D array", {"shape": list(vals.shape)})
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise InputFormatError("grid density values must be finite and non-negative")
        self.values = vals
        self.normalization = normalization
        rows, cols = vals.shape
        lat = (np.pi / 2) - (np.arange(rows) + 0.5) * np.pi / rows
        lon = -np.pi + (np.arange(cols) + 0.5) * 2 * np.pi / cols
        grid = vals[::-1]
        lat = lat[::-1]
        # clamp at the poles, wrap in longitude
        grid = np.vstack([grid[:1], grid, grid[-1:]])
        lat = np.concatenate([[-np.pi / 2], lat, [np.pi / 2]])
        grid = np.hstack([grid[:, -1:], grid, grid[:, :1]])
        step = 2 * np.pi / cols
        lon = np.concatenate([[lon[0] - step], lon, [lon[-1] + step]])
        self._interp = RegularGridInterpolator((lat, lon), grid, method="linear",
                                               bounds_error=False, fill_value=None)
        self.scale = 1.0
        if normalization == "probability":
            raw = self._raw_total()
            if raw <= 0:
                raise InputFormatError("grid density has zero mass")
            self.scale = 1.0 / raw

    def _raw(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(u)
        lat = np.arcsin(np.clip(u[:, 2], -1.0, 1.0))
        lon = np.arctan2(u[:, 1], u[:, 0])
        return np.maximum(self._interp(np.stack([lat, lon], axis=1)), 0.0)

    def _raw_total(self) -> float:
        from .integrals import integrate_sphere

        return integrate_sphere(self._raw)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.scale * self._raw(u)

    def total_mass(self) -> float:
        return 1.0 if self.normalization == "probability" else self._raw_total()

    def to_spec(self) -> "GridSpec":
        rows, cols = self.values.shape
        return GridSpec(rows=rows, cols=cols, normalization=self.normalization,
                        values=[float(v) for v in self.values.ravel()])

    @classmethod
    def from_file(cls, path: Path) -> "GridDensity":
        """Read a JSON grid ({rows, cols, normalization, values}) or an 8-bit PGM image."""
        path = Path(path)
        if not path.exists():
            raise InputFormatError("density file not found", {"path": str(path)})
        if path.suffix.lower() == ".pgm":
            return cls(read_pgm(path))
        try:
            spec = GridSpec.model_validate(json.loads(path.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, ValidationError) as exc:
            raise InputFormatError("invalid grid density file", {"path": str(path), "error": str(exc)}) from exc
        return spec.build()  # type: ignore[return-value]


def read_pgm(path: Path) -> np.ndarray:
    """Grayscale PGM (P2 or P5) as weights in [0, 1]."""
    data = Path(path).read_bytes()
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InputFormatError("truncated PGM header", {"path": str(path)})
        tokens.append(data[start:pos])
    magic = tokens[0]
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise InputFormatError("invalid PGM header", {"path": str(path)}) from exc
    if magic == b"P5":
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        pixels = np.frombuffer(data[pos + 1:], dtype=dtype, count=width * height)
    elif magic == b"P2":
        pixels = np.array(data[pos:].split()[: width * height], dtype=float)
    else:
        raise InputFormatError("not a grayscale PGM file", {"path": str(path), "magic": magic.decode(errors="replace")})
    if pixels.size != width * height:
        raise InputFormatError("PGM pixel data is truncated", {"path": str(path)})
    return pixels.astype(float).reshape(height, width) / float(maxval)


# ---------------- serialized specs ----------------

class ConstantSpec(BaseModel):
    type: Literal["constant"] = "constant"
    value: float = Field(default=1.0 / FOUR_PI, ge=0)

    def build(self) -> Density:
        return Constant(self.value)


class HemisphereSpec(BaseModel):
    type: Literal["uniform_hemisphere"] = "uniform_hemisphere"
    axis: list[float] = Field(default_factory=lambda: [0.0, 0.0, -1.0], min_length=3, max_length=3)

    def build(self) -> Density:
        return UniformHemisphere(self.axis)


class GridSpec(BaseModel):
    type: Literal["grid"] = "grid"
    rows: Optional[int] = Field(default=None, ge=1)
    cols: Optional[int] = Field(default=None, ge=1)
    normalization: Literal["probability", "none"] = "probability"
    values: Optional[list[float]] = None
    path: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "GridSpec":
        if self.path is None:
            if self.values is None or self.rows is None or self.cols is None:
                raise ValueError("inline grid needs rows, cols and values")
            if len(self.values) != self.rows * self.cols:
                raise ValueError(f"expected {self.rows * self.cols} values, got {len(self.values)}")
        return self

    def build(self) -> Density:
        if self.path is not None:
            return GridDensity.from_file(Path(self.path))
        grid = np.asarray(self.values, dtype=float).reshape(self.rows, self.cols)  # type: ignore[arg-type]
        return GridDensity(grid, self.normalization)


DensitySpec = Annotated[Union[ConstantSpec, HemisphereSpec, GridSpec], Field(discriminator="type")]
