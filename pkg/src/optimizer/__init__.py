"""
Optimizer module
Nelder-Mead refinement of q over the observable angles, diagonal slices,
critical residuals and the conjecture scan
"""

from .angles import (
    ConjectureReport,
    OptimizationResult,
    QSurface,
    conjecture_scan,
    critical_residual,
    maximize_q,
    q_at,
    q_surface,
    symmetric_slice,
    theta_grid,
)
from .simplex import SimplexResult, nelder_mead

__all__ = [
    'ConjectureReport',
    'OptimizationResult',
    'QSurface',
    'SimplexResult',
    'conjecture_scan',
    'critical_residual',
    'maximize_q',
    'nelder_mead',
    'q_at',
    'q_surface',
    'symmetric_slice',
    'theta_grid',
]
