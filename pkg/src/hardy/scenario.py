"""
Hardy scenarios for two spin-j particles
A scenario fixes A2 = B2 = Sz and tilts A1, B1 along two directions.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from src.spin.algebra import (
    Direction,
    EigenBasis,
    SpinJ,
    computational_basis,
    eigenbasis,
)
from src.utils.errors import HardyError

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure state of two spin-j particles, amplitude index (a, b) -> a*d + b"""

    amplitudes: np.ndarray
    spin: SpinJ

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size != self.spin.dim ** 2:
            raise HardyError(
                f"Expected {self.spin.dim ** 2} amplitudes for j={self.spin.label}, got {amps.size}"
            )
        object.__setattr__(self, 'amplitudes', amps)

    @classmethod
    def normalized(cls, amplitudes, spin: SpinJ) -> "BipartiteState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise HardyError("Cannot normalize the zero vector")
        return cls(amps / norm, spin)

    @classmethod
    def product(cls, left: np.ndarray, right: np.ndarray, spin: SpinJ) -> "BipartiteState":
        return cls(np.kron(left, right), spin)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1) < tol

    def matrix(self) -> np.ndarray:
        """d x d amplitude matrix M[a, b]"""
        return self.amplitudes.reshape(self.spin.dim, self.spin.dim)

    def overlap(self, other: Union["BipartiteState", np.ndarray]) -> complex:
        """<self|other>"""
        vec = other.amplitudes if isinstance(other, BipartiteState) else np.asarray(other)
        return complex(np.vdot(self.amplitudes, vec))


@dataclass(frozen=True, eq=False)
class ConditionSet:
    """
    The 4j+2 Hardy condition states in their listed order.
    The first 4j+1 must have vanishing probability, the last one is the q target.
    """

    spin: SpinJ
    states: List[BipartiteState]

    @property
    def zero_states(self) -> List[BipartiteState]:
        return self.states[:-1]

    @property
    def target(self) -> BipartiteState:
        return self.states[-1]

    def matrix(self, include_target: bool = True) -> np.ndarray:
        """Condition states stacked as rows"""
        states = self.states if include_target else self.zero_states
        return np.vstack([s.amplitudes for s in states])

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class HardyScenario:
    """Spin j with A1 = m_A.S, B1 = m_B.S and A2 = B2 = Sz"""

    spin: SpinJ
    dir_a: Direction
    dir_b: Direction
    basis_a1: EigenBasis = field(init=False, repr=False, compare=False)
    basis_b1: EigenBasis = field(init=False, repr=False, compare=False)
    basis_z: EigenBasis = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'basis_a1', eigenbasis(self.spin, self.dir_a))
        object.__setattr__(self, 'basis_b1', eigenbasis(self.spin, self.dir_b))
        object.__setattr__(self, 'basis_z', computational_basis(self.spin))

    @classmethod
    def from_angles(cls, j: Union[str, float, SpinJ], theta1: float, theta2: float,
                    phi1: float = 0.0, phi2: float = 0.0) -> "HardyScenario":
        """Scenario from radians; j accepts anything SpinJ.parse does"""
        return cls(SpinJ.parse(j), Direction(theta1, phi1), Direction(theta2, phi2))

    @property
    def dim(self) -> int:
        return self.spin.dim

    @property
    def basis_a2(self) -> EigenBasis:
        return self.basis_z

    @property
    def basis_b2(self) -> EigenBasis:
        return self.basis_z

    def angles(self) -> dict:
        return {
            'theta1': self.dir_a.theta,
            'theta2': self.dir_b.theta,
            'phi1': self.dir_a.phi,
            'phi2': self.dir_b.phi,
        }


def condition_states(sc: HardyScenario) -> ConditionSet:
    """
    Hardy condition states in order:
    |A1=j>|B1=j>; |A1=m>|B2=-j> (m = j-1..-j); |A2=-j>|B1=m> (m = j-1..-j);
    and finally the target |A2=-j>|B2=-j>
    """
    spin = sc.spin
    z_low = sc.basis_z.bottom
    states = [BipartiteState.product(sc.basis_a1.top, sc.basis_b1.top, spin)]
    for k in range(1, spin.dim):
        states.append(BipartiteState.product(sc.basis_a1[k], z_low, spin))
    for k in range(1, spin.dim):
        states.append(BipartiteState.product(z_low, sc.basis_b1[k], spin))
    states.append(BipartiteState.product(z_low, z_low, spin))
    logger.debug(f"Built {len(states)} condition states for j={spin.label}")
    return ConditionSet(spin=spin, states=states)
