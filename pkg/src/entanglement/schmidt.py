"""
Schmidt spectra, reduced density matrices and local-unitary invariants
"""

import logging
from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

from src.hardy.scenario import BipartiteState, HardyScenario
from src.spin.tables import coefficient_table
from src.utils.errors import HardyError, UnsupportedSpinError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Squared Schmidt coefficients in descending order"""

    values: np.ndarray

    @property
    def spread(self) -> float:
        """max lambda - min lambda; zero for a maximally entangled state"""
        return float(self.values[0] - self.values[-1])

    def is_uniform(self, tol: float = 1e-12) -> bool:
        return self.spread < tol

    @property
    def schmidt_rank(self) -> int:
        return int(np.sum(self.values > 1e-12))


@dataclass(frozen=True, eq=False)
class InvariantVector:
    """Elementary symmetric polynomials e_2 ... e_d of the Schmidt spectrum"""

    e: np.ndarray

    @property
    def names(self):
        if len(self.e) == 1:
            return ["I"]
        return [f"I{k}" for k in range(1, len(self.e) + 1)]

    def as_dict(self) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(self.names, self.e)}


def reduced_density(state: BipartiteState, subsystem: str = "A") -> np.ndarray:
    """
    Single-particle reduced state

    Args:
        state: bipartite pure state
        subsystem: "A" keeps particle 1 (traces out B), "B" keeps particle 2

    Returns:
        d x d Hermitian, trace-one matrix
    """
    m = state.matrix()
    if subsystem == "A":
        return m @ m.conj().T
    if subsystem == "B":
        return m.T @ m.conj()
    raise HardyError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def schmidt_spectrum(state: BipartiteState) -> SchmidtSpectrum:
    """Squared singular values of the amplitude matrix"""
    sv = np.linalg.svd(state.matrix(), compute_uv=False)
    return SchmidtSpectrum(values=np.sort(sv ** 2)[::-1])


def su_invariants(state: Union[BipartiteState, SchmidtSpectrum]) -> InvariantVector:
    """
    e_2 ... e_d of the Schmidt spectrum. For d = 2 the single entry is
    lambda (1 - lambda) = det(rho); for d = 3 the entries are I1 = e_2, I2 = e_3.
    """
    spectrum = state if isinstance(state, SchmidtSpectrum) else schmidt_spectrum(state)
    coeffs = np.real(np.poly(spectrum.values))
    k = np.arange(len(coeffs))
    e = ((-1.0) ** k * coeffs)[2:]
    return InvariantVector(e=e)


def spin_half_reduced_density_formula(sc: HardyScenario) -> np.ndarray:
    """
    Printed reduced state of the spin-1/2 psi_max with particle 1 traced out,
    evaluated from the tabulated eigenvector coefficients
    """
    if sc.spin.two_j != 1:
        raise UnsupportedSpinError(f"Formula is for j=1/2, got j={sc.spin.label}")
    a = coefficient_table(sc.spin, sc.dir_a)
    b = coefficient_table(sc.spin, sc.dir_b)
    a11, b11, b12 = a[0, 0], b[0, 0], b[0, 1]
    norm = 1 - abs(a11 * b11) ** 2
    off = -b11 * np.conj(b12) * abs(a11 * b12) ** 2
    return np.array([
        [1 - abs(a11 * b11) ** 2 - abs(a11 * b11 * b12) ** 2, off],
        [np.conj(off), abs(a11 * b11 * b12) ** 2],
    ]) / norm


def spin_half_invariant_formula(theta1: float, theta2: float) -> float:
    """det(rho) of the spin-1/2 psi_max in angle form"""
    c1, c2 = np.cos(theta1), np.cos(theta2)
    return float(np.sin(theta1) ** 2 * np.sin(theta2) ** 2 / (3 - c1 - c2 - c1 * c2) ** 2)
