"""
Maximally entangled states against the Hardy conditions
Penalty searches over U(d) for (I (x) U)|Psi0> and over all unit vectors,
plus the two explicit unitary constructions of the no-go argument.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.entanglement.unitary import UnitaryParam, check_unitary, unitary_with_column
from src.hardy.scenario import BipartiteState, HardyScenario, condition_states
from src.optimizer.simplex import nelder_mead
from src.spin.algebra import SpinJ
from src.utils.errors import NonUnitaryError

logger = logging.getLogger(__name__)

KAPPA = 1e6
RESTARTS = 200
ITERATIONS = 500
FEASIBILITY_TOL = 1e-10
# extra simplex rebuilds around the best vertex in the unit-vector search
STATE_POLISH = 2


class SearchReport(BaseModel):
    """Outcome of a penalized q search; q is |<state|target>|^2 throughout"""

    search: str
    j: str
    kappa: float
    restarts: int
    iterations: int
    seed: int
    feasibility_tol: float
    n_feasible: int
    best_feasible_q: Optional[float]
    best_objective: float
    best_q: float
    best_violation: float
    best_params: List[float]
    eigen_bound: Optional[float] = None


def standard_maxent(spin: SpinJ) -> BipartiteState:
    """sum_m |m>|m> / sqrt(d)"""
    return BipartiteState(np.eye(spin.dim, dtype=complex).ravel() / np.sqrt(spin.dim), spin)


def maxent_state(spin: SpinJ, u: Union[UnitaryParam, np.ndarray]) -> BipartiteState:
    """(I (x) U)|Psi0>; raises NonUnitaryError when U is not unitary"""
    matrix = u.matrix() if isinstance(u, UnitaryParam) else np.asarray(u, dtype=complex)
    matrix = check_unitary(matrix)
    if matrix.shape != (spin.dim, spin.dim):
        raise NonUnitaryError(f"Expected a {spin.dim} x {spin.dim} unitary, got shape {matrix.shape}")
    # (I (x) U) acting on the amplitude matrix M is M U^T
    amps = (np.eye(spin.dim) / np.sqrt(spin.dim)) @ matrix.T
    return BipartiteState(amps.ravel(), spin)


def aligned_maxent(sc: HardyScenario, rng: np.random.Generator) -> BipartiteState:
    """Maximally entangled state with U|B2=-j> = |B1=+j>; meets every B1-family zero condition"""
    u = unitary_with_column(sc.dim, sc.dim - 1, sc.basis_b1.top, rng)
    return maxent_state(sc.spin, u)


def hollow_maxent(sc: HardyScenario, rng: np.random.Generator) -> BipartiteState:
    """Maximally entangled state with <B2=-j|U|B2=-j> = 0, hence q = 0"""
    column = rng.normal(size=sc.dim) + 1j * rng.normal(size=sc.dim)
    column[-1] = 0
    column /= np.linalg.norm(column)
    u = unitary_with_column(sc.dim, sc.dim - 1, column, rng)
    return maxent_state(sc.spin, u)


def _penalty_terms(sc: HardyScenario) -> Tuple[np.ndarray, np.ndarray]:
    rows = condition_states(sc).matrix()
    return rows[:-1].conj(), rows[-1].conj()


def _run_search(search: str, sc: HardyScenario, to_state: Callable[[np.ndarray], Optional[np.ndarray]],
                draw: Callable[[np.random.Generator], np.ndarray], step: float,
                kappa: float, restarts: int, iterations: int, seed: int, threads: int,
                progress: bool, polish: int = 0) -> SearchReport:
    zero_rows, target_row = _penalty_terms(sc)

    def measure(x: np.ndarray) -> Tuple[float, float, float]:
        amps = to_state(x)
        if amps is None:
            return 0.0, np.inf, np.inf
        zero = np.abs(zero_rows @ amps) ** 2
        return float(abs(target_row @ amps) ** 2), float(zero.sum()), float(zero.max())

    def objective(x: np.ndarray) -> float:
        q, violation, _ = measure(x)
        return q - kappa * violation if np.isfinite(violation) else -np.inf

    def restart(child: np.random.SeedSequence):
        rng = np.random.default_rng(child)
        res = nelder_mead(objective, draw(rng), step=step, max_iter=iterations,
                          maximize=True, restarts=1 + polish)
        q, violation, worst = measure(res.x)
        return res.x, res.fun, q, violation, worst

    children = np.random.SeedSequence(seed).spawn(restarts)
    logger.info(f"{search} search for j={sc.spin.label}: kappa={kappa:g}, "
                f"{restarts} restarts x {iterations} iterations")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        outcomes = list(tqdm(pool.map(restart, children), total=restarts,
                             desc=f"{search} search j={sc.spin.label}", disable=not progress))

    feasible = [o for o in outcomes if o[4] < FEASIBILITY_TOL]
    best = max(outcomes, key=lambda o: o[1])
    best_feasible_q = max(o[2] for o in feasible) if feasible else None
    logger.info(f"{search} search: {len(feasible)}/{restarts} feasible restarts, "
                f"best feasible q={best_feasible_q}, best objective={best[1]:.6g}")
    return SearchReport(
        search=search,
        j=sc.spin.label,
        kappa=kappa,
        restarts=restarts,
        iterations=iterations,
        seed=seed,
        feasibility_tol=FEASIBILITY_TOL,
        n_feasible=len(feasible),
        best_feasible_q=best_feasible_q,
        best_objective=float(best[1]),
        best_q=float(best[2]),
        best_violation=float(best[3]),
        best_params=[float(v) for v in best[0]],
    )


def no_go_search(sc: HardyScenario, kappa: float = KAPPA, restarts: int = RESTARTS,
                 iterations: int = ITERATIONS, seed: int = 0, threads: int = 1,
                 progress: bool = False) -> SearchReport:
    """
    Maximize q - kappa * sum(zero-condition probabilities) over (I (x) U)|Psi0>.
    A falsification search: finding no feasible q > 0 supports the no-go
    result without proving it. kappa = 0 gives the unconstrained comparison.
    """
    d = sc.dim
    psi0 = np.eye(d, dtype=complex) / np.sqrt(d)

    def to_state(x: np.ndarray) -> np.ndarray:
        return (psi0 @ UnitaryParam(d, x).matrix().T).ravel()

    return _run_search("unitary", sc, to_state,
                       lambda rng: rng.uniform(0, 2 * np.pi, d * d), 0.5,
                       kappa, restarts, iterations, seed, threads, progress)


def state_search(sc: HardyScenario, kappa: float = 1e3, restarts: int = 20,
                 iterations: int = 4000, seed: int = 0, threads: int = 1,
                 progress: bool = False) -> SearchReport:
    """
    Same penalty over every unit vector of C^(d^2). The exact optimum of the
    penalized objective is the top eigenvalue of |t><t| - kappa * sum |Phi_i><Phi_i|,
    reported as eigen_bound.
    """
    n = sc.dim ** 2

    def to_state(x: np.ndarray) -> Optional[np.ndarray]:
        amps = x[:n] + 1j * x[n:]
        norm = np.linalg.norm(amps)
        return amps / norm if norm > 0 else None

    report = _run_search("state", sc, to_state,
                         lambda rng: rng.normal(size=2 * n), 0.3,
                         kappa, restarts, iterations, seed, threads, progress, polish=STATE_POLISH)
    zero_rows, target_row = _penalty_terms(sc)
    t = target_row.conj()
    h = np.outer(t, t.conj()) - kappa * zero_rows.conj().T @ zero_rows
    report.eigen_bound = float(np.linalg.eigvalsh(h)[-1])
    return report
