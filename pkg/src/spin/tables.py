"""
Printed eigenvector coefficient tables for j = 1/2, 1, 3/2
Row i holds the coefficients of |A1 = m_i> (m_i = j, j-1, ...) on the Sz basis.
They serve as independent oracles for the rotation construction; their
phase convention differs per row, so only moduli are compared.
"""

from typing import Callable, Dict

import numpy as np

from src.spin.algebra import Direction, SpinJ
from src.utils.errors import UnsupportedSpinError


def spin_half_table(direction: Direction) -> np.ndarray:
    t, p = direction.theta, direction.phi
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([
        [c, np.exp(1j * p) * s],
        [np.exp(-1j * p) * s, -c],
    ])


def spin_one_table(direction: Direction) -> np.ndarray:
    t, p = direction.theta, direction.phi
    ct, st = np.cos(t), np.sin(t)
    e1, e2 = np.exp(-1j * p), np.exp(-2j * p)
    r2 = np.sqrt(2)
    return np.array([
        [e2 * (1 + ct) / 2, e1 * st / r2, (1 - ct) / 2],
        [-e2 * st / r2, e1 * ct, st / r2],
        [e2 * (1 - ct) / 2, -e1 * st / r2, (1 + ct) / 2],
    ])


def spin_three_halves_table(direction: Direction) -> np.ndarray:
    """
    Rows 2-4 use the printed normalizations. The printed radicand of row 1
    (1 + 3cot^4 + cot^6 + 3cot(theta) + csc^2(theta)) is not the squared norm
    of its numerators, so row 1 is normalized by csc^3(theta/2) instead.
    """
    t, p = direction.theta, direction.phi
    h = t / 2
    cot, tan = 1 / np.tan(h), np.tan(h)
    cot_t, csc_t = 1 / np.tan(t), 1 / np.sin(t)
    r3 = np.sqrt(3)
    e1, e2, e3 = np.exp(-1j * p), np.exp(-2j * p), np.exp(-3j * p)

    row1 = np.array([e3 * cot ** 3, r3 * e2 * cot ** 2, r3 * e1 * cot, 1.0])
    row1 = row1 / np.sqrt(1 + 3 * cot ** 2 + 3 * cot ** 4 + cot ** 6)

    mid2 = -3 + 1 / np.sin(h) ** 2
    side2 = 3 * cot_t + csc_t
    row2 = np.array([-r3 * e3 * cot, e2 * mid2, e1 * side2, r3])
    row2 = row2 / np.sqrt(3 + 3 * cot ** 2 + mid2 ** 2 + side2 ** 2)

    mid3 = 6 - 4 / (1 + np.cos(t))
    row3 = np.array([2 * r3 * e1 * tan, e2 * mid3, e1 * (6 * cot_t - 2 * csc_t), 2 * r3])
    row3 = row3 / np.sqrt(mid3 ** 2 + 4 * (3 + (-1 + 3 * np.cos(t)) ** 2 * csc_t ** 2 + 3 * tan ** 2))

    row4 = np.array([-e3 * tan ** 3, r3 * e2 * tan ** 2, -r3 * e1 * tan, 1.0])
    row4 = row4 / np.sqrt(1 + 3 * (cot_t - csc_t) ** 2 + 3 * tan ** 4 + tan ** 6)

    return np.vstack([row1, row2, row3, row4])


TABLES: Dict[int, Callable[[Direction], np.ndarray]] = {
    1: spin_half_table,
    2: spin_one_table,
    3: spin_three_halves_table,
}


def coefficient_table(spin: SpinJ, direction: Direction) -> np.ndarray:
    """Printed coefficient matrix a_ik for the given spin"""
    if spin.two_j not in TABLES:
        raise UnsupportedSpinError(f"No printed coefficient table for j={spin.label}")
    return TABLES[spin.two_j](direction)
