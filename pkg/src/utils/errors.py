"""
Error types for the Hardy nonlocality toolkit
All of them are ValueErrors so callers can catch bad input uniformly
"""


class HardyError(ValueError):
    """Base class for every error raised by the toolkit"""


class InvalidSpinError(HardyError):
    """Spin value is not a positive half-integer"""


class InvalidDirectionError(HardyError):
    """Polar angle outside the open interval (0, pi)"""


class UnsupportedSpinError(HardyError):
    """Operation has no formula for the requested spin"""


class DegenerateScenarioError(HardyError):
    """Hardy target lies (numerically) inside the span of the zero conditions"""


class RankDeficiencyError(HardyError):
    """A constructed family does not reach its expected rank"""


class InvalidCoefficientsError(HardyError):
    """Family coefficients cannot produce a Hardy state"""


class NonUnitaryError(HardyError):
    """Materialized matrix fails the unitarity check"""
