"""
Centralized configuration management using Pydantic.

This module defines the `Settings` class, which loads numeric defaults
from environment variables or a `.env` file. It covers logging, the
tessellation/quadrature tolerances, the reflector solver and the
verification oracles.

CLI flags override these values per run; the singleton below is the
fallback for every library entry point that takes an optional tolerance.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables and `.env` file."""

    # ---------------- Logging ----------------
    log_level: str = "INFO"
    log_dir: Path = Path("logs")
    log_file: str = "confocal.log"

    # ---------------- Geometry / export ----------------
    keep_zero_length_arcs: bool = False
    svg_arc_tol: float = Field(default=0.01, gt=0)  # radians

    # ---------------- Measure ----------------
    arc_tol: float = Field(default=0.005, gt=0)  # radians
    quad_depth: int = Field(default=2, ge=0)
    singular_radius: float = Field(default=0.05, gt=0)
    singular_depth: int = Field(default=6, ge=0)

    # ---------------- Reflector solver ----------------
    solver_tol: float = Field(default=1e-6, gt=0)
    max_iter: int = Field(default=500, ge=1)
    lbfgs_memory: int = Field(default=10, ge=1)
    lbfgs_restarts: int = Field(default=20, ge=0)
    rational_bits: int = Field(default=64, ge=8)

    # ---------------- Execution ----------------
    seed: int = 0
    threads: int = Field(default=4, ge=1)

    # ---------------- Oracles ----------------
    oracle_resolution: int = Field(default=2048, ge=64)
    oracle_max_resolution: int = Field(default=8192, ge=64)
    boundary_margin: float = Field(default=1e-12, ge=0)

    # ---------------- Pydantic Settings ----------------
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Singleton instance shared across the app
settings = Settings()
