"""
Entanglement-analysis module
Schmidt spectra, local-unitary invariants, coverage scans and the
maximally-entangled no-go searches
"""

from .coverage import CoverageReport, invariant_coverage_scan, projected_seed_states
from .nogo import (
    SearchReport,
    aligned_maxent,
    hollow_maxent,
    maxent_state,
    no_go_search,
    standard_maxent,
    state_search,
)
from .schmidt import (
    InvariantVector,
    SchmidtSpectrum,
    reduced_density,
    schmidt_spectrum,
    spin_half_invariant_formula,
    spin_half_reduced_density_formula,
    su_invariants,
)
from .unitary import UnitaryParam, check_unitary, random_local_unitary, unitary_with_column

__all__ = [
    'CoverageReport',
    'InvariantVector',
    'SchmidtSpectrum',
    'SearchReport',
    'UnitaryParam',
    'aligned_maxent',
    'check_unitary',
    'hollow_maxent',
    'invariant_coverage_scan',
    'maxent_state',
    'no_go_search',
    'projected_seed_states',
    'random_local_unitary',
    'reduced_density',
    'schmidt_spectrum',
    'spin_half_invariant_formula',
    'spin_half_reduced_density_formula',
    'standard_maxent',
    'state_search',
    'su_invariants',
    'unitary_with_column',
]
