"""
Invariant coverage scans
Sample Hardy states and record which part of the local-unitary invariant
ranges they reach. Ranges are empirical; nothing is claimed about density.
"""

import logging
from itertools import permutations
from math import ceil, comb
from typing import List, Optional

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.entanglement.schmidt import su_invariants
from src.hardy.gram_schmidt import project_out
from src.hardy.scenario import BipartiteState, HardyScenario
from src.hardy.states import (
    TOL_POS,
    general_hardy_state,
    hardy_family,
    hardy_state_max,
    hardy_subspace,
    q_value,
    random_family_coefficients,
)
from src.spin.algebra import SpinJ
from src.utils.errors import HardyError, UnsupportedSpinError

logger = logging.getLogger(__name__)

SAMPLERS = ('angle-grid', 'family')
GRID_MARGIN = 0.01
HISTOGRAM_BINS = 20
# equal-angle point whose Hardy subspace nearly contains the permuted maximally entangled states
SEED_THETA = 0.01


class InvariantRange(BaseModel):
    name: str
    minimum: float
    maximum: float
    upper_bound: float
    histogram: List[int]
    bin_edges: List[float]


class CoverageReport(BaseModel):
    """Empirical invariant ranges over one sampler"""

    j: str
    sampler: str
    samples: int
    seed: int
    invariants: List[InvariantRange]

    def range_of(self, name: str) -> InvariantRange:
        for item in self.invariants:
            if item.name == name:
                return item
        raise KeyError(name)


def invariant_bounds(dim: int) -> List[float]:
    """Values of e_2 ... e_d at the uniform spectrum, the upper ends of the ranges"""
    return [comb(dim, k) / dim ** k for k in range(2, dim + 1)]


def angle_grid(n: int) -> np.ndarray:
    return np.linspace(GRID_MARGIN, np.pi - GRID_MARGIN, n)


def projected_seed_states(spin: SpinJ) -> List[BipartiteState]:
    """
    (I (x) P)|Psi0> for every permutation P, projected onto the Hardy subspace
    of the equal-angle scenario at SEED_THETA; only Hardy states (q > 0) are kept
    """
    sc = HardyScenario.from_angles(spin, SEED_THETA, SEED_THETA)
    zero_basis = hardy_subspace(sc).zero_basis
    d = spin.dim
    seeds = []
    for perm in permutations(range(d)):
        m = np.zeros((d, d), dtype=complex)
        m[np.arange(d), list(perm)] = 1 / np.sqrt(d)
        w = project_out(m.ravel(), zero_basis)
        if np.linalg.norm(w) < 1e-9:
            continue
        state = BipartiteState.normalized(w, spin)
        if q_value(sc, state) > TOL_POS:
            seeds.append(state)
    logger.debug(f"Kept {len(seeds)} projected maximally entangled seeds for j={spin.label}")
    return seeds


def invariant_coverage_scan(j, samples: int = 10000, seed: int = 0,
                            sampler: Optional[str] = None, grid_n: Optional[int] = None,
                            progress: bool = False) -> CoverageReport:
    """
    Scan local-unitary invariants over Hardy states

    Args:
        j: spin 1/2 or 1
        samples: target number of sampled states
        seed: RNG seed for the family coefficients
        sampler: 'angle-grid' (psi_max over a theta grid) or 'family' (general
                 Hardy states over a coarser grid plus projected maximally
                 entangled seeds); defaults to angle-grid for j=1/2, family for j=1
        grid_n: angle grid size per axis (derived from samples when omitted)
        progress: show a tqdm bar

    Returns:
        CoverageReport with min/max/histogram per invariant
    """
    spin = SpinJ.parse(j)
    if spin.two_j not in (1, 2):
        raise UnsupportedSpinError(f"Coverage scans are defined for j=1/2 and j=1, got j={spin.label}")
    sampler = sampler or ('angle-grid' if spin.two_j == 1 else 'family')
    if sampler not in SAMPLERS:
        raise HardyError(f"Unknown sampler {sampler!r}, expected one of {SAMPLERS}")

    rng = np.random.default_rng(seed)
    values = []
    if sampler == 'angle-grid':
        n = grid_n or max(2, ceil(np.sqrt(samples)))
        cells = [(t1, t2) for t1 in angle_grid(n) for t2 in angle_grid(n)]
        for t1, t2 in tqdm(cells, desc=f"psi_max invariants j={spin.label}", disable=not progress):
            psi = hardy_state_max(HardyScenario.from_angles(spin, t1, t2))
            values.append(su_invariants(psi).e)
    else:
        n = grid_n or 10
        per_cell = max(1, ceil(samples / (n * n)))
        cells = [(t1, t2) for t1 in angle_grid(n) for t2 in angle_grid(n)]
        for t1, t2 in tqdm(cells, desc=f"family invariants j={spin.label}", disable=not progress):
            fam = hardy_family(HardyScenario.from_angles(spin, t1, t2))
            # the first draw of every cell is psi_max itself (v = 0)
            values.append(su_invariants(fam.psi_max).e)
            for _ in range(per_cell - 1):
                v0, v = random_family_coefficients(fam, rng)
                values.append(su_invariants(general_hardy_state(fam, v0, v)).e)
        for state in projected_seed_states(spin):
            values.append(su_invariants(state).e)

    table = np.vstack(values)
    ranges = []
    for k, bound in enumerate(invariant_bounds(spin.dim)):
        column = table[:, k]
        counts, edges = np.histogram(np.clip(column, 0, bound), bins=HISTOGRAM_BINS, range=(0, bound))
        ranges.append(InvariantRange(
            name=f"I{k + 1}" if spin.dim > 2 else "I",
            minimum=float(column.min()),
            maximum=float(column.max()),
            upper_bound=bound,
            histogram=[int(c) for c in counts],
            bin_edges=[float(e) for e in edges],
        ))
        logger.info(f"{ranges[-1].name}: [{column.min():.6g}, {column.max():.6g}] over {len(column)} states")

    return CoverageReport(j=spin.label, sampler=sampler, samples=len(table), seed=seed, invariants=ranges)
