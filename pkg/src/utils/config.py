"""
Run configuration for the command-line front end
One pydantic model validated from the argparse namespace; defaults live in
DEFAULTS so scripts and tests share them.
"""

import logging
import os
from argparse import Namespace
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.optimizer.angles import MIN_REFINE_GRID
from src.spin.algebra import SpinJ

logger = logging.getLogger(__name__)

DEFAULTS = {
    'seed': 20240611,
    'grid': 64,
    'refine_tol': 1e-10,
    'tol_zero': 1e-18,
    'tol_pos': 1e-12,
    'kappa': 1e6,
    'restarts': 200,
    'iterations': 500,
    'coverage_samples': 100000,
    'log_level': 'INFO',
}

SUBCOMMANDS = ('surface', 'optimize', 'state', 'verify')
FORMATS = ('csv', 'json')
SUITES = (
    'oracle-triangle',
    'rank-laws',
    'appendix',
    'hardy-conditions',
    'no-go',
    'invariants',
    'eigenbasis',
    'conjecture',
)
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
MAX_SURFACE_TWO_J = 8
DEFAULT_J = '1/2'


class RunConfig(BaseModel):
    """
    Validated settings of one CLI run. Angles are stored in radians whatever
    unit was given on the command line.
    """

    model_config = ConfigDict(frozen=True)

    subcommand: str
    j: Optional[str] = None
    theta1: Optional[float] = None
    theta2: Optional[float] = None
    phi1: Optional[float] = None
    phi2: Optional[float] = None
    radians: bool = False
    grid: int = DEFAULTS['grid']
    diagonal: bool = False
    format: Optional[str] = None
    out: Optional[str] = None
    seed: int = DEFAULTS['seed']
    threads: int = os.cpu_count() or 1
    suite: Optional[str] = None
    state: Optional[str] = None
    tol_zero: float = DEFAULTS['tol_zero']
    tol_pos: float = DEFAULTS['tol_pos']
    refine_tol: float = DEFAULTS['refine_tol']
    check_tol: Optional[float] = None
    kappa: float = DEFAULTS['kappa']
    restarts: int = DEFAULTS['restarts']
    iterations: int = DEFAULTS['iterations']
    coverage_samples: int = DEFAULTS['coverage_samples']
    free_phi: bool = False
    quiet: bool = False
    log_level: str = DEFAULTS['log_level']

    @model_validator(mode='before')
    @classmethod
    def convert_angles(cls, data):
        """Degrees (the default unit) become radians"""
        if not isinstance(data, dict) or data.get('radians'):
            return data
        data = dict(data)
        for key in ('theta1', 'theta2', 'phi1', 'phi2'):
            if data.get(key) is not None:
                data[key] = float(np.deg2rad(data[key]))
        return data

    @field_validator('subcommand')
    @classmethod
    def check_subcommand(cls, v: str) -> str:
        if v not in SUBCOMMANDS:
            raise ValueError(f"Unknown subcommand {v!r}")
        return v

    @field_validator('j')
    @classmethod
    def check_spin(cls, v: Optional[str]) -> Optional[str]:
        return None if v is None else SpinJ.parse(v).label

    @field_validator('grid')
    @classmethod
    def check_grid(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"grid must be >= 2, got {v}")
        return v

    @field_validator('threads', 'restarts', 'iterations', 'coverage_samples')
    @classmethod
    def check_positive_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"Counts must be >= 1, got {v}")
        return v

    @field_validator('tol_zero', 'tol_pos', 'refine_tol', 'check_tol')
    @classmethod
    def check_tolerance(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 0:
            raise ValueError(f"Tolerances must be > 0, got {v}")
        return v

    @field_validator('kappa')
    @classmethod
    def check_kappa(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f"kappa must be >= 0, got {v}")
        return v

    @field_validator('format')
    @classmethod
    def check_format(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {v!r}")
        return v

    @field_validator('suite')
    @classmethod
    def check_suite(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in SUITES:
            raise ValueError(f"suite must be one of {SUITES}, got {v!r}")
        return v

    @field_validator('log_level')
    @classmethod
    def check_log_level(cls, v: str) -> str:
        v = v.upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {LOG_LEVELS}, got {v!r}")
        return v

    @model_validator(mode='after')
    def check_subcommand_rules(self):
        if self.subcommand == 'surface' and self.spin.two_j > MAX_SURFACE_TWO_J:
            raise ValueError(f"surface supports j <= 4, got j={self.spin.label}")
        if self.subcommand == 'optimize' and self.grid < MIN_REFINE_GRID:
            raise ValueError(f"optimize needs grid >= {MIN_REFINE_GRID}, got {self.grid}")
        if self.subcommand == 'verify':
            given = [k for k in ('theta1', 'theta2', 'phi1', 'phi2') if getattr(self, k) is not None]
            if given:
                raise ValueError(f"verify does not take angles, got {given}")
        return self

    @property
    def spin(self) -> SpinJ:
        return SpinJ.parse(self.j or DEFAULT_J)

    @property
    def output_format(self) -> str:
        """csv for surfaces, json for every other subcommand unless overridden"""
        if self.format:
            return self.format
        return 'csv' if self.subcommand == 'surface' else 'json'

    @classmethod
    def from_namespace(cls, ns: Namespace) -> "RunConfig":
        """Build from argparse output, ignoring flags left unset"""
        values = {k: v for k, v in vars(ns).items() if v is not None and k in cls.model_fields}
        return cls(**values)
