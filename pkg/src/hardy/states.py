"""
Hardy states: the maximally nonlocal state psi_max, the product-state
subspace S' and the general Hardy family v0*psi_max + sum_i v_i e_i
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel
from scipy.linalg import null_space

from src.hardy.gram_schmidt import DROP_TOL, gram_schmidt, numerical_rank, project_out
from src.hardy.scenario import BipartiteState, ConditionSet, HardyScenario, condition_states
from src.utils.errors import (
    DegenerateScenarioError,
    InvalidCoefficientsError,
    RankDeficiencyError,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9
COEFF_TOL = 1e-12
TOL_ZERO = 1e-18
TOL_POS = 1e-12

StateLike = Union[BipartiteState, np.ndarray]


@dataclass(frozen=True, eq=False)
class HardySubspace:
    """Orthonormal basis of span S of the zero conditions plus psi_max"""

    scenario: HardyScenario
    conditions: ConditionSet
    zero_basis: np.ndarray
    psi_max: BipartiteState


@dataclass(frozen=True, eq=False)
class HardyFamily:
    """psi_max together with an orthonormal basis of S' (rows of sprime_basis)"""

    scenario: HardyScenario
    psi_max: BipartiteState
    sprime_basis: np.ndarray
    product_states: np.ndarray
    product_rank: int
    used_fallback: bool

    @property
    def spin(self):
        return self.scenario.spin

    @property
    def sprime_dim(self) -> int:
        return self.sprime_basis.shape[0]

    def sprime_states(self) -> List[BipartiteState]:
        return [BipartiteState(row, self.spin) for row in self.sprime_basis]


class HardyReport(BaseModel):
    """Probabilities of all 4j+2 conditions for one state"""

    probabilities: List[float]
    q: float
    max_zero_probability: float
    failing: List[int]
    passed: bool
    tol_zero: float
    tol_pos: float


def expected_sprime_dim(sc: HardyScenario) -> int:
    """4j^2 - 1"""
    return sc.spin.two_j ** 2 - 1


def _amplitudes(state: StateLike) -> np.ndarray:
    if isinstance(state, BipartiteState):
        return state.amplitudes
    return np.asarray(state, dtype=complex).ravel()


@lru_cache(maxsize=512)
def hardy_subspace(sc: HardyScenario) -> HardySubspace:
    """
    Orthonormalize the first 4j+1 condition states in their listed order and
    take the normalized residual of the target as psi_max.
    """
    conditions = condition_states(sc)
    zero_basis, rank = gram_schmidt([s.amplitudes for s in conditions.zero_states], DROP_TOL)
    expected = len(conditions) - 1
    if rank != expected:
        logger.debug(f"Zero conditions have rank {rank}, expected {expected} ({sc.angles()})")
        raise DegenerateScenarioError(
            f"Zero-condition states are linearly dependent: rank {rank} < {expected}"
        )

    residual = project_out(conditions.target.amplitudes, zero_basis)
    norm = np.linalg.norm(residual)
    if norm < RESIDUAL_TOL:
        logger.debug(f"Target residual norm {norm:.3e} below {RESIDUAL_TOL}")
        raise DegenerateScenarioError(f"Target lies in the zero-condition span (residual {norm:.3e})")

    psi = residual / norm
    # phase fixed so that <target|psi> is real and positive
    overlap = np.vdot(conditions.target.amplitudes, psi)
    psi = psi * (abs(overlap) / overlap)
    return HardySubspace(
        scenario=sc,
        conditions=conditions,
        zero_basis=zero_basis,
        psi_max=BipartiteState(psi, sc.spin),
    )


def hardy_state_max(sc: HardyScenario) -> BipartiteState:
    """Maximally nonlocal Hardy state for the scenario"""
    return hardy_subspace(sc).psi_max


def q_value(sc: HardyScenario, state: StateLike) -> float:
    """Nonlocality probability |<state|A2=-j, B2=-j>|^2"""
    target = condition_states(sc).target.amplitudes
    return float(abs(np.vdot(_amplitudes(state), target)) ** 2)


def q_from_projections(sc: HardyScenario) -> float:
    """1 - sum_i |<Phi'_i|target>|^2 over the orthonormalized zero conditions"""
    sub = hardy_subspace(sc)
    w = sub.zero_basis.conj() @ sub.conditions.target.amplitudes
    return float(1 - np.sum(np.abs(w) ** 2))


def _product_families(sc: HardyScenario) -> np.ndarray:
    """
    chi (x) |B2=m> with chi orthogonal to |A1=+j>, |A2=-j>, and
    |A2=m> (x) eta with eta orthogonal to |B1=+j>, |B2=-j>, for m != -j
    """
    z = sc.basis_z.vectors
    z_low = z[-1]
    chi = null_space(np.vstack([sc.basis_a1.top.conj(), z_low.conj()])).T
    eta = null_space(np.vstack([sc.basis_b1.top.conj(), z_low.conj()])).T
    products = [np.kron(c, z[k]) for c in chi for k in range(sc.dim - 1)]
    products += [np.kron(z[k], e) for e in eta for k in range(sc.dim - 1)]
    if not products:
        return np.zeros((0, sc.dim ** 2), dtype=complex)
    return np.vstack(products)


@lru_cache(maxsize=256)
def hardy_family(sc: HardyScenario) -> HardyFamily:
    """
    Build psi_max and an orthonormal basis of S' from the two product families.
    Falls back to a null-space computation when the families miss the rank.
    """
    sub = hardy_subspace(sc)
    expected = expected_sprime_dim(sc)
    products = _product_families(sc)
    product_rank = numerical_rank(products) if len(products) else 0
    occupied = np.vstack([sub.zero_basis, sub.psi_max.amplitudes[None, :]])

    used_fallback = False
    if len(products):
        sprime, rank = gram_schmidt(products, DROP_TOL, basis=occupied)
    else:
        sprime, rank = np.zeros((0, sc.dim ** 2), dtype=complex), 0

    if rank != expected:
        logger.warning(
            f"Product families reach rank {rank}, expected {expected}; using null-space fallback"
        )
        sprime = null_space(occupied.conj(), rcond=DROP_TOL).T
        rank = sprime.shape[0]
        used_fallback = True
        if rank != expected:
            logger.error(f"Null-space fallback reached rank {rank}, expected {expected}")
            raise RankDeficiencyError(f"S' has rank {rank}, expected {expected}")

    return HardyFamily(
        scenario=sc,
        psi_max=sub.psi_max,
        sprime_basis=sprime,
        product_states=products,
        product_rank=product_rank,
        used_fallback=used_fallback,
    )


def general_hardy_state(fam: HardyFamily, v0: complex,
                        v: Optional[Sequence[complex]] = None) -> BipartiteState:
    """
    Normalized v0*psi_max + sum_i v_i e_i over the orthonormal S' basis

    Args:
        fam: Hardy family of the scenario
        v0: weight of psi_max, must be nonzero
        v: 4j^2 - 1 weights on the S' basis (zeros when omitted)

    Returns:
        Unit-norm Hardy state; with |v0|^2 + |v|^2 = 1 its q is |v0|^2 q(psi_max)
    """
    if abs(v0) <= COEFF_TOL:
        raise InvalidCoefficientsError("v0 must be nonzero, otherwise q vanishes")
    weights = np.zeros(fam.sprime_dim, dtype=complex) if v is None else np.asarray(v, dtype=complex).ravel()
    if weights.size != fam.sprime_dim:
        raise InvalidCoefficientsError(
            f"Expected {fam.sprime_dim} S' coefficients, got {weights.size}"
        )
    amps = v0 * fam.psi_max.amplitudes
    if weights.size:
        amps = amps + weights @ fam.sprime_basis
    total = np.sqrt(abs(v0) ** 2 + np.sum(np.abs(weights) ** 2))
    return BipartiteState(amps / total, fam.spin)


def condition_probabilities(sc: HardyScenario, state: StateLike) -> np.ndarray:
    """|<Phi_i|state>|^2 for all 4j+2 condition states"""
    rows = condition_states(sc).matrix()
    return np.abs(rows.conj() @ _amplitudes(state)) ** 2


def verify_hardy_conditions(sc: HardyScenario, state: StateLike,
                            tol_zero: float = TOL_ZERO, tol_pos: float = TOL_POS) -> HardyReport:
    """
    Check all Hardy conditions for a state

    Returns:
        HardyReport; passed iff the first 4j+1 probabilities are below tol_zero
        and q exceeds tol_pos. `failing` holds 1-based condition numbers.
    """
    probs = condition_probabilities(sc, state)
    zero_probs, q = probs[:-1], float(probs[-1])
    failing = [i + 1 for i, p in enumerate(zero_probs) if p >= tol_zero]
    if q <= tol_pos:
        failing.append(len(probs))
    return HardyReport(
        probabilities=[float(p) for p in probs],
        q=q,
        max_zero_probability=float(np.max(zero_probs)),
        failing=failing,
        passed=not failing,
        tol_zero=tol_zero,
        tol_pos=tol_pos,
    )


def sample_hardy_subspace(sc: HardyScenario, rng: np.random.Generator) -> BipartiteState:
    """Random unit vector of the Hardy subspace S-perp = span(psi_max) + S'"""
    fam = hardy_family(sc)
    n = 1 + fam.sprime_dim
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    amps = c[0] * fam.psi_max.amplitudes
    if fam.sprime_dim:
        amps = amps + c[1:] @ fam.sprime_basis
    return BipartiteState.normalized(amps, fam.spin)


def random_family_coefficients(fam: HardyFamily, rng: np.random.Generator) -> Tuple[complex, np.ndarray]:
    """(v0, v) drawn uniformly on the unit sphere of C^(4j^2)"""
    n = 1 + fam.sprime_dim
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = c / np.linalg.norm(c)
    return complex(c[0]), c[1:]
