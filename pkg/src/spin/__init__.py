"""
Spin-algebra module for the Hardy nonlocality toolkit
Spin operators, tilted observables and their rotated eigenbases
"""

from .algebra import (
    ANGLE_EPS,
    Direction,
    EigenBasis,
    SpinJ,
    SpinOperators,
    computational_basis,
    direction_observable,
    eigenbasis,
    noncommutativity_report,
    numerical_eigenbasis,
    overlap_moduli,
    phase_agreement,
    rotation_matrix,
    spin_operators,
    wigner_small_d,
)
from .tables import coefficient_table

__all__ = [
    'ANGLE_EPS',
    'Direction',
    'EigenBasis',
    'SpinJ',
    'SpinOperators',
    'coefficient_table',
    'computational_basis',
    'direction_observable',
    'eigenbasis',
    'noncommutativity_report',
    'numerical_eigenbasis',
    'overlap_moduli',
    'phase_agreement',
    'rotation_matrix',
    'spin_operators',
    'wigner_small_d',
]
