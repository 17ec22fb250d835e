"""
Closed-form q oracles
Angle-only formulas for j = 1/2, 1, 3/2, 2, the coefficient (nested
denominator) form built from eigenvector overlaps, and the overlap form
valid for every j.
"""

import logging
from typing import Callable, Dict, Union

import numpy as np

from src.hardy.scenario import HardyScenario
from src.spin.algebra import SpinJ
from src.spin.tables import TABLES, coefficient_table
from src.utils.errors import UnsupportedSpinError

logger = logging.getLogger(__name__)

# Conjectured maximum of q for every j
Q_MAX = (-11 + 5 * np.sqrt(5)) / 2

# Diagonal optimum of u = sin^(4j)(theta/2)
U_STAR = (3 - np.sqrt(5)) / 2

SpinLike = Union[str, float, SpinJ]


def _q_spin_half(t1: float, t2: float) -> float:
    c1, c2 = np.cos(t1), np.cos(t2)
    return -np.sin(t1) ** 2 * np.sin(t2) ** 2 / (4 * (-3 + c1 + c2 + c1 * c2))


def _q_spin_one(t1: float, t2: float) -> float:
    c1, c2 = np.cos(t1), np.cos(t2)
    h1, h2 = np.cos(t1 / 2) ** 2, np.cos(t2 / 2) ** 2
    num = (16 * h1 * h2 * (-3 + c1) * (-3 + c2)
           * np.sin(t1 / 2) ** 4 * np.sin(t2 / 2) ** 4)
    den = (39 - 20 * c1 + 5 * np.cos(2 * t1)
           + 16 * h1 * (-3 + c1) * c2
           - 4 * h1 * (-3 + c1) * np.cos(2 * t2))
    return num / den


def _q_spin_three_halves(t1: float, t2: float) -> float:
    """The first theta2 cross term of the denominator carries cos(theta2)."""
    h1, h2 = np.cos(t1 / 2) ** 2, np.cos(t2 / 2) ** 2
    p1 = 15 - 8 * np.cos(t1) + np.cos(2 * t1)
    p2 = 15 - 8 * np.cos(t2) + np.cos(2 * t2)
    num = -8 * h1 * h2 * p1 * p2 * np.sin(t1 / 2) ** 6 * np.sin(t2 / 2) ** 6
    den = (165 * np.cos(t1) - 66 * np.cos(2 * t1) + 11 * np.cos(3 * t1)
           + 30 * h1 * p1 * np.cos(t2)
           - 12 * h1 * p1 * np.cos(2 * t2)
           + 2 * h1 * p1 * np.cos(3 * t2)
           - 270)
    return num / den


def _q_spin_two(t1: float, t2: float) -> float:
    h1, h2 = np.cos(t1 / 2) ** 2, np.cos(t2 / 2) ** 2
    c1 = np.cos(t1)
    cos2_1, cos3_1, cos4_1 = np.cos(2 * t1), np.cos(3 * t1), np.cos(4 * t1)
    k1 = 47 * c1 - 10 * (7 + cos2_1) + cos3_1
    k2 = 47 * np.cos(t2) - 10 * (7 + np.cos(2 * t2)) + np.cos(3 * t2)
    num = -16 * h1 * h2 * k1 * k2 * np.sin(t1 / 2) ** 8 * np.sin(t2 / 2) ** 8

    tail = 28 * np.cos(2 * t2) - 8 * np.cos(3 * t2) + np.cos(4 * t2)
    w = -56 * np.cos(t2) + tail
    den = (-7735 - 2604 * cos2_1 + 744 * cos3_1 - 93 * cos4_1
           + 15680 * h1 * np.cos(t2)
           + 4 * (c1 * (1302 + 47 * h1 * w)
                  + h1 * (-70 * tail + (-10 * cos2_1 + cos3_1) * w)))
    return num / den


CLOSED_FORMS: Dict[int, Callable[[float, float], float]] = {
    1: _q_spin_half,
    2: _q_spin_one,
    3: _q_spin_three_halves,
    4: _q_spin_two,
}


def q_closed_form(j: SpinLike, theta1: float, theta2: float) -> float:
    """
    Angle-only q of the maximally nonlocal state (phi independent)

    Args:
        j: spin, one of 1/2, 1, 3/2, 2
        theta1: polar angle of A1 in radians
        theta2: polar angle of B1 in radians

    Returns:
        q(theta1, theta2)
    """
    spin = SpinJ.parse(j)
    if spin.two_j not in CLOSED_FORMS:
        raise UnsupportedSpinError(f"No closed form for j={spin.label}")
    return float(CLOSED_FORMS[spin.two_j](theta1, theta2))


def q_symmetric_closed_form(j: SpinLike, theta: float) -> float:
    """
    Spin-2 q on the diagonal theta1 = theta2 = theta.
    Sign chosen so that it equals q_closed_form(2, theta, theta).
    """
    spin = SpinJ.parse(j)
    if spin.two_j != 4:
        raise UnsupportedSpinError(f"Diagonal closed form exists for j=2 only, got j={spin.label}")
    k = -70 + 47 * np.cos(theta) - 10 * np.cos(2 * theta) + np.cos(3 * theta)
    num = k ** 2 * np.sin(theta / 2) ** 8 * np.cos(theta / 2) ** 4
    den = 8 * (-221 - 56 * np.cos(theta) + 28 * np.cos(2 * theta)
               - 8 * np.cos(3 * theta) + np.cos(4 * theta))
    return float(-num / den)


def nested_overlap_q(a_last: np.ndarray, b_last: np.ndarray) -> float:
    """
    q from the squared moduli of the last (m = -j) components of the A1 and B1
    eigenvectors, rows ordered m = j ... -j

        q = (1 - X) - sum_k |b_k|^2 (1 - X)^2 / ((1 - B_(k-1) X)(1 - B_k X)) - |a_1 b_1|^2

    with X = sum_(i>=2) |a_i|^2 and B_k = sum_(i=2..k) |b_i|^2.
    """
    a2 = np.abs(a_last) ** 2
    b2 = np.abs(b_last) ** 2
    x = np.sum(a2[1:])
    q = 1 - x
    partial = 0.0
    for bk in b2[1:]:
        prev = partial
        partial += bk
        q -= bk * (1 - x) ** 2 / ((1 - prev * x) * (1 - partial * x))
    return float(q - a2[0] * b2[0])


def q_coefficient_form(j: SpinLike, sc: HardyScenario) -> float:
    """
    Coefficient-form q evaluated from the printed eigenvector tables
    (j = 1/2, 1, 3/2). Uses moduli only, so the table phases do not matter.
    """
    spin = SpinJ.parse(j)
    if spin.two_j not in TABLES:
        raise UnsupportedSpinError(f"No coefficient form for j={spin.label}")
    if spin != sc.spin:
        raise UnsupportedSpinError(f"Scenario has j={sc.spin.label}, requested j={spin.label}")
    a = coefficient_table(spin, sc.dir_a)
    b = coefficient_table(spin, sc.dir_b)
    return nested_overlap_q(a[:, -1], b[:, -1])


def q_overlap_form(j: SpinLike, theta1: float, theta2: float) -> float:
    """
    q = u v (1 - u)(1 - v) / (u + v - u v) with u = sin^(4j)(theta1/2),
    v = sin^(4j)(theta2/2); holds for every j
    """
    spin = SpinJ.parse(j)
    u = np.sin(theta1 / 2) ** (2 * spin.two_j)
    v = np.sin(theta2 / 2) ** (2 * spin.two_j)
    return float(u * v * (1 - u) * (1 - v) / (u + v - u * v))


def q_gradient_spin_half(theta1: float, theta2: float) -> np.ndarray:
    """(dq/dtheta1, dq/dtheta2) of the spin-1/2 closed form"""

    def partial(ta: float, tb: float) -> float:
        ca, cb = np.cos(ta), np.cos(tb)
        num = (3 - 12 * ca + np.cos(2 * ta) + 8 * np.cos(ta / 2) ** 4 * cb) * np.sin(ta) * np.sin(tb) ** 2
        den = 8 * (-3 + ca + 2 * np.cos(ta / 2) ** 2 * cb) ** 2
        return -num / den

    return np.array([partial(theta1, theta2), partial(theta2, theta1)])


def optimal_theta(j: SpinLike) -> float:
    """Polar angle of the diagonal optimum, where sin^(4j)(theta/2) = (3 - sqrt5)/2"""
    spin = SpinJ.parse(j)
    return float(2 * np.arcsin(U_STAR ** (1 / (2 * spin.two_j))))
