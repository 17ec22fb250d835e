"""
Utility modules for the Hardy nonlocality toolkit
Error types and CSV/JSON output; the run configuration lives in
src.utils.config, which depends on the spin module.
"""

from .errors import (
    DegenerateScenarioError,
    HardyError,
    InvalidCoefficientsError,
    InvalidDirectionError,
    InvalidSpinError,
    NonUnitaryError,
    RankDeficiencyError,
    UnsupportedSpinError,
)
from .io import complex_pairs, pairs_to_complex, read_json, write_csv, write_json, write_records

__all__ = [
    'DegenerateScenarioError',
    'HardyError',
    'InvalidCoefficientsError',
    'InvalidDirectionError',
    'InvalidSpinError',
    'NonUnitaryError',
    'RankDeficiencyError',
    'UnsupportedSpinError',
    'complex_pairs',
    'pairs_to_complex',
    'read_json',
    'write_csv',
    'write_json',
    'write_records',
]
