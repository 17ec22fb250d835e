"""
Rank and linear-independence checks on the Hardy condition states
"""

import logging
from typing import List

import numpy as np
from pydantic import BaseModel

from src.hardy.gram_schmidt import numerical_rank
from src.hardy.scenario import HardyScenario, condition_states
from src.hardy.states import expected_sprime_dim, hardy_family
from src.utils.errors import UnsupportedSpinError

logger = logging.getLogger(__name__)

DETERMINANT_FLOOR = 1e-6


class RankReport(BaseModel):
    """Ranks of the subspaces that decompose C^d (x) C^d"""

    j: str
    dim: int
    zero_rank: int
    full_rank: int
    product_states: int
    product_rank: int
    sprime_rank: int
    total_rank: int
    used_fallback: bool
    passed: bool


class AppendixAReport(BaseModel):
    """Spin-1 linear-independence determinant, computed and printed"""

    theta1: float
    theta2: float
    phi1: float
    phi2: float
    determinant: List[float]
    determinant_abs: float
    expected_abs: float
    printed_value: List[float]
    printed_abs: float
    rank: int
    passed: bool


def rank_report(sc: HardyScenario) -> RankReport:
    """
    Ranks of the first 4j+1 condition states, of all 4j+2, of the product
    families, of S' and of the full decomposition S + psi_max + S'
    """
    conditions = condition_states(sc)
    fam = hardy_family(sc)
    zero_rank = numerical_rank(s.amplitudes for s in conditions.zero_states)
    full_rank = numerical_rank(s.amplitudes for s in conditions.states)
    stacked = [s.amplitudes for s in conditions.zero_states]
    stacked += [fam.psi_max.amplitudes] + list(fam.sprime_basis)
    total_rank = numerical_rank(stacked)

    n_zero = len(conditions) - 1
    passed = (zero_rank == n_zero
              and full_rank == n_zero + 1
              and fam.sprime_dim == expected_sprime_dim(sc)
              and total_rank == sc.dim ** 2)
    if not passed:
        logger.warning(f"Rank laws fail for j={sc.spin.label} at {sc.angles()}")
    return RankReport(
        j=sc.spin.label,
        dim=sc.dim,
        zero_rank=zero_rank,
        full_rank=full_rank,
        product_states=len(fam.product_states),
        product_rank=fam.product_rank,
        sprime_rank=fam.sprime_dim,
        total_rank=total_rank,
        used_fallback=fam.used_fallback,
        passed=passed,
    )


def appendix_a_matrix(sc: HardyScenario) -> np.ndarray:
    """
    5 x 4 coefficient matrix of the spin-1 independence argument; a_ik is
    component k of |A1 = m_i>
    """
    a, b = sc.basis_a1.vectors, sc.basis_b1.vectors
    zero = 0j
    return np.array([
        [a[1, 0], a[2, 0], zero, zero],
        [a[1, 1], a[2, 1], zero, zero],
        [zero, zero, b[1, 0], b[2, 0]],
        [zero, zero, b[1, 1], b[2, 1]],
        [a[1, 2], a[2, 2], b[1, 2], b[2, 2]],
    ])


def appendix_a_check(sc: HardyScenario) -> AppendixAReport:
    """
    Determinant of the leading 4 x 4 block and rank of the 5 x 4 matrix.
    Direct evaluation gives |det| = sin^2(theta1/2) sin^2(theta2/2); the
    printed expression carries an extra (2 + cos theta1)/2 and is reported
    alongside for comparison.
    """
    if sc.spin.two_j != 2:
        raise UnsupportedSpinError(f"Appendix determinant is defined for j=1, got j={sc.spin.label}")
    t1, t2 = sc.dir_a.theta, sc.dir_b.theta
    p1, p2 = sc.dir_a.phi, sc.dir_b.phi

    m = appendix_a_matrix(sc)
    det = complex(np.linalg.det(m[:4]))
    rank = int(np.linalg.matrix_rank(m, tol=1e-9))
    expected = float(np.sin(t1 / 2) ** 2 * np.sin(t2 / 2) ** 2)
    printed = complex(np.exp(-3j * (p1 + p2)) * (2 + np.cos(t1)) * expected / 2)

    passed = abs(det) > DETERMINANT_FLOOR and rank == 4
    logger.debug(f"Appendix determinant |det|={abs(det):.6g}, printed |value|={abs(printed):.6g}")
    return AppendixAReport(
        theta1=t1,
        theta2=t2,
        phi1=p1,
        phi2=p2,
        determinant=[det.real, det.imag],
        determinant_abs=abs(det),
        expected_abs=expected,
        printed_value=[printed.real, printed.imag],
        printed_abs=abs(printed),
        rank=rank,
        passed=passed,
    )
