"""
Spin-j operator algebra
Builds Sx, Sy, Sz from ladder coefficients, tilted observables m.S and
their eigenbases through the rotation exp(-i phi Sz) exp(-i theta Sy)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.linalg import expm

from src.utils.errors import InvalidDirectionError, InvalidSpinError

logger = logging.getLogger(__name__)

# Angles closer than this to 0 or pi make the two observables commute
ANGLE_EPS = 1e-9

# Factorial-sum Wigner d stays accurate in float64 up to j = 10
WIGNER_MAX_TWO_J = 20


@dataclass(frozen=True)
class SpinJ:
    """Half-integer spin stored exactly as twice-j"""

    two_j: int

    def __post_init__(self):
        if isinstance(self.two_j, bool) or not isinstance(self.two_j, (int, np.integer)):
            raise InvalidSpinError(f"two_j must be an integer, got {self.two_j!r}")
        if self.two_j < 1:
            raise InvalidSpinError(f"two_j must be >= 1, got {self.two_j}")
        object.__setattr__(self, 'two_j', int(self.two_j))

    @classmethod
    def parse(cls, value: Union[str, int, float, Fraction, "SpinJ"]) -> "SpinJ":
        """
        Build a spin from "1/2", "3/2", "1", 1.5, Fraction(5, 2) ...

        Args:
            value: spin quantum number j (not twice j)

        Returns:
            SpinJ instance
        """
        if isinstance(value, SpinJ):
            return value
        try:
            j = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidSpinError(f"Cannot parse spin value {value!r}: {e}")
        twice = 2 * j
        if twice.denominator != 1 or twice <= 0:
            raise InvalidSpinError(f"Spin must be a positive half-integer, got {value!r}")
        return cls(int(twice))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def label(self) -> str:
        return str(self.two_j // 2) if self.two_j % 2 == 0 else f"{self.two_j}/2"

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers j, j-1, ..., -j (index k <-> m = j - k)"""
        return self.j - np.arange(self.dim, dtype=float)

    def index_of(self, m: float) -> int:
        """Basis index of magnetic number m"""
        k = self.j - m
        if abs(k - round(k)) > 1e-12 or not 0 <= round(k) < self.dim:
            raise InvalidSpinError(f"m={m} is not a valid label for j={self.label}")
        return int(round(k))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Direction:
    """Measurement axis given by polar angle theta and azimuth phi (radians)"""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not np.isfinite(theta) or not np.isfinite(phi):
            raise InvalidDirectionError(f"Angles must be finite, got ({self.theta}, {self.phi})")
        if theta <= ANGLE_EPS or theta >= np.pi - ANGLE_EPS:
            raise InvalidDirectionError(
                f"theta must lie strictly inside (0, pi), got {theta}"
            )
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'phi', phi % (2 * np.pi))

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> "Direction":
        return cls(np.deg2rad(theta_deg), np.deg2rad(phi_deg))

    @property
    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """Cartesian spin matrices in units of hbar, basis ordered m = j ... -j"""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def splus(self) -> np.ndarray:
        return self.sx + 1j * self.sy

    @property
    def sminus(self) -> np.ndarray:
        return self.sx - 1j * self.sy


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """
    Eigenvectors of a tilted observable.
    Row k of `vectors` is the eigenvector with label m = j - k.
    """

    spin: SpinJ
    direction: Optional[Direction]
    vectors: np.ndarray

    def vector(self, m: float) -> np.ndarray:
        return self.vectors[self.spin.index_of(m)]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.vectors[k]

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def top(self) -> np.ndarray:
        """Eigenvector with label +j"""
        return self.vectors[0]

    @property
    def bottom(self) -> np.ndarray:
        """Eigenvector with label -j"""
        return self.vectors[-1]


def spin_operators(spin: SpinJ) -> SpinOperators:
    """
    Standard ladder construction of the spin matrices

    Args:
        spin: spin quantum number

    Returns:
        SpinOperators with sz = diag(j, ..., -j)
    """
    jj = spin.j
    m = spin.m_values()
    # <m+1|S+|m> sits on the superdiagonal, column k holds m = j - k
    ladder = np.sqrt(jj * (jj + 1) - m[1:] * (m[1:] + 1))
    splus = np.diag(ladder, k=1).astype(complex)
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    sz = np.diag(m).astype(complex)
    return SpinOperators(sx=sx, sy=sy, sz=sz)


def direction_observable(spin: SpinJ, direction: Direction) -> np.ndarray:
    """Tilted observable sin(t)cos(p) Sx + sin(t)sin(p) Sy + cos(t) Sz"""
    ops = spin_operators(spin)
    nx, ny, nz = direction.unit_vector
    return nx * ops.sx + ny * ops.sy + nz * ops.sz


@lru_cache(maxsize=None)
def _wigner_terms(two_j: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Flattened factorial-sum terms: (row, col, coefficient, cos power, sin power)"""
    rows, cols, coefs, cos_pow, sin_pow = [], [], [], [], []
    n = two_j
    for kp in range(n + 1):
        ap, bp = n - kp, kp          # j + m', j - m'
        for k in range(n + 1):
            a, b = n - k, k          # j + m, j - m
            delta = k - kp           # m' - m
            pref = sqrt(float(factorial(ap) * factorial(bp) * factorial(a) * factorial(b)))
            for s in range(max(0, -delta), min(a, bp) + 1):
                den = (factorial(a - s) * factorial(s)
                       * factorial(delta + s) * factorial(bp - s))
                sign = -1.0 if (delta + s) % 2 else 1.0
                rows.append(kp)
                cols.append(k)
                coefs.append(sign * pref / den)
                cos_pow.append(n - delta - 2 * s)
                sin_pow.append(delta + 2 * s)
    return (np.array(rows), np.array(cols), np.array(coefs),
            np.array(cos_pow), np.array(sin_pow))


def wigner_small_d(spin: SpinJ, theta: float) -> np.ndarray:
    """
    Wigner small-d matrix d^j_{m'm}(theta) = <j m'|exp(-i theta Sy)|j m>
    by the factorial sum. Entry [k', k] belongs to m' = j - k', m = j - k.
    """
    if spin.two_j > WIGNER_MAX_TWO_J:
        logger.warning(
            f"Factorial-sum Wigner d for j={spin.label} exceeds the float64 accuracy range (j <= 10)"
        )
    rows, cols, coefs, cos_pow, sin_pow = _wigner_terms(spin.two_j)
    values = coefs * np.cos(theta / 2) ** cos_pow * np.sin(theta / 2) ** sin_pow
    d = np.zeros((spin.dim, spin.dim))
    np.add.at(d, (rows, cols), values)
    return d


def rotation_matrix(spin: SpinJ, direction: Direction, method: str = "wigner") -> np.ndarray:
    """R(phi, theta) = exp(-i phi Sz) exp(-i theta Sy); column k is R|j, m=j-k>"""
    if method == "wigner":
        phases = np.exp(-1j * direction.phi * spin.m_values())
        return phases[:, None] * wigner_small_d(spin, direction.theta)
    if method == "expm":
        ops = spin_operators(spin)
        return expm(-1j * direction.phi * ops.sz) @ expm(-1j * direction.theta * ops.sy)
    raise ValueError(f"Unknown rotation method: {method}")


def eigenbasis(spin: SpinJ, direction: Direction, method: str = "wigner") -> EigenBasis:
    """
    Eigenbasis of m.S by the rotation construction

    Args:
        spin: spin quantum number
        direction: measurement axis
        method: "wigner" (factorial sum) or "expm" (matrix exponential)

    Returns:
        EigenBasis with vector(m) = R(phi, theta)|j, m>
    """
    rotation = rotation_matrix(spin, direction, method)
    return EigenBasis(spin=spin, direction=direction, vectors=np.ascontiguousarray(rotation.T))


def numerical_eigenbasis(spin: SpinJ, direction: Direction) -> EigenBasis:
    """Eigenbasis from a Hermitian eigensolver, sorted by descending eigenvalue"""
    _, vecs = np.linalg.eigh(direction_observable(spin, direction))
    return EigenBasis(spin=spin, direction=direction, vectors=np.ascontiguousarray(vecs[:, ::-1].T))


def computational_basis(spin: SpinJ) -> EigenBasis:
    """Sz eigenbasis (no tilted direction)"""
    return EigenBasis(spin=spin, direction=None, vectors=np.eye(spin.dim, dtype=complex))


def overlap_moduli(basis_a: EigenBasis, basis_b: EigenBasis) -> np.ndarray:
    """|<a_k|b_l>| for every pair of basis vectors"""
    return np.abs(basis_a.vectors.conj() @ basis_b.vectors.T)


def phase_agreement(basis_a: EigenBasis, basis_b: EigenBasis) -> np.ndarray:
    """Per-vector |<a_k|b_k>|; all ones when the bases differ only by phases"""
    return np.abs(np.sum(basis_a.vectors.conj() * basis_b.vectors, axis=1))


def noncommutativity_report(spin: SpinJ, direction: Direction,
                            tol: float = 1e-10) -> List[Tuple[float, float, float]]:
    """
    Label pairs (m, m', |<A1=m|Sz=m'>|) whose overlap modulus is 0 or 1 within tol.
    An empty list means every overlap lies strictly inside (0, 1).
    """
    moduli = np.abs(eigenbasis(spin, direction).vectors)
    m = spin.m_values()
    flagged = []
    for k, l in zip(*np.nonzero((moduli < tol) | (moduli > 1 - tol))):
        flagged.append((float(m[k]), float(m[l]), float(moduli[k, l])))
    return flagged
