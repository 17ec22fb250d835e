"""
Unitary parametrization for the maximally-entangled search
d(d-1)/2 complex Givens rotations followed by d diagonal phases, plus
Haar sampling and column completion helpers.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

import numpy as np

from src.utils.errors import HardyError, NonUnitaryError

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UnitaryParam:
    """
    d^2 real angles: rotation angles and rotation phases for every index
    pair (p, q), p < q, then the d diagonal phases
    """

    dim: int
    angles: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float).ravel()
        if angles.size != self.dim ** 2:
            raise HardyError(f"UnitaryParam for d={self.dim} needs {self.dim ** 2} angles, got {angles.size}")
        object.__setattr__(self, 'angles', angles)

    @classmethod
    def identity(cls, dim: int) -> "UnitaryParam":
        return cls(dim, np.zeros(dim ** 2))

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "UnitaryParam":
        return cls(dim, rng.uniform(0, 2 * np.pi, dim ** 2))

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return list(combinations(range(self.dim), 2))

    def matrix(self) -> np.ndarray:
        """Materialize U = D . G_last ... G_first"""
        n_pairs = self.dim * (self.dim - 1) // 2
        thetas = self.angles[:n_pairs]
        phis = self.angles[n_pairs:2 * n_pairs]
        phases = self.angles[2 * n_pairs:]

        u = np.eye(self.dim, dtype=complex)
        for (p, q), theta, phi in zip(self.pairs, thetas, phis):
            c, s = np.cos(theta), np.sin(theta)
            g = np.eye(self.dim, dtype=complex)
            g[p, p], g[p, q] = c, -np.exp(-1j * phi) * s
            g[q, p], g[q, q] = np.exp(1j * phi) * s, c
            u = g @ u
        return np.exp(1j * phases)[:, None] * u


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return u unchanged, or raise NonUnitaryError when U^dagger U != I"""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NonUnitaryError(f"Expected a square matrix, got shape {u.shape}")
    deviation = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if deviation > tol:
        raise NonUnitaryError(f"U^dagger U deviates from identity by {deviation:.3e}")
    return u


def random_local_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix with the R-diagonal phases divided out"""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def unitary_with_column(dim: int, column_index: int, vector: np.ndarray,
                        rng: np.random.Generator) -> np.ndarray:
    """
    Unitary U with U|e_k> = vector, the other columns completed at random

    Args:
        dim: matrix size
        column_index: k
        vector: unit vector of length dim
        rng: source for the completing columns
    """
    vector = np.asarray(vector, dtype=complex).ravel()
    if vector.size != dim:
        raise HardyError(f"Column vector must have length {dim}, got {vector.size}")
    if abs(np.linalg.norm(vector) - 1) > 1e-12:
        raise NonUnitaryError("Column vector must have unit norm")
    if not 0 <= column_index < dim:
        raise HardyError(f"column_index {column_index} outside 0..{dim - 1}")

    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    z[:, 0] = vector
    q, r = np.linalg.qr(z)
    # column 0 of q equals vector / r[0, 0] with |r[0, 0]| = 1
    q[:, 0] = q[:, 0] * r[0, 0]
    order = list(range(1, dim))
    order.insert(column_index, 0)
    return q[:, order]
