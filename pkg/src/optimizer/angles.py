"""
Angle optimization of the nonlocality probability
Coarse q grid over (theta1, theta2) followed by Nelder-Mead refinement from
the best cells, diagonal slices, finite-difference critical residuals and
the conjecture scan for spins without closed forms.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.hardy.closed_forms import Q_MAX
from src.hardy.scenario import HardyScenario
from src.hardy.states import hardy_state_max, q_value
from src.optimizer.simplex import nelder_mead
from src.spin.algebra import Direction, SpinJ
from src.utils.errors import DegenerateScenarioError, HardyError

logger = logging.getLogger(__name__)

EDGE_EPS = 1e-4
MIN_REFINE_GRID = 16
TOP_CELLS = 5
MAX_ITER = 2000
BOUND_SLACK = 1e-6
GAP_FLAG = 1e-3
BOUNDARY_OFFSETS = (1e-3, 1e-2)


@dataclass(frozen=True, eq=False)
class QSurface:
    """q on the tensor grid thetas x thetas; q[i, k] belongs to (thetas[i], thetas[k])"""

    spin: SpinJ
    thetas: np.ndarray
    q: np.ndarray

    def argmax(self) -> Tuple[int, int]:
        i, k = np.unravel_index(int(np.argmax(self.q)), self.q.shape)
        return int(i), int(k)


class OptimizationResult(BaseModel):
    """Best angles found; path is the accepted-best q of the winning refinement"""

    j: str
    theta1_star: float
    theta2_star: float
    phi1_star: float
    phi2_star: float
    q_star: float
    iterations: int
    evaluations: int
    grid_n: int
    grid_best: List[float]
    path: List[float]
    bound_violations: int
    free_phi: bool


class ScanRow(BaseModel):
    j: str
    q_star: float
    theta1_star: float
    theta2_star: float
    theta_star_degrees: float
    gap: float
    flagged: bool
    boundary: List[List[float]]


class ConjectureReport(BaseModel):
    q_reference: float
    grid_n: int
    rows: List[ScanRow]


def q_at(spin: SpinJ, theta1: float, theta2: float, phi1: float = 0.0, phi2: float = 0.0) -> float:
    """
    q of the maximally nonlocal state for one observable choice. Next to the
    endpoints q drops below float resolution and the scenario is reported as 0.
    """
    sc = HardyScenario(spin, Direction(theta1, phi1), Direction(theta2, phi2))
    try:
        return q_value(sc, hardy_state_max(sc))
    except DegenerateScenarioError:
        logger.debug(f"Degenerate scenario at theta=({theta1:.3g}, {theta2:.3g}), q taken as 0")
        return 0.0


def theta_grid(grid_n: int) -> np.ndarray:
    if grid_n < 2:
        raise HardyError(f"grid_n must be >= 2, got {grid_n}")
    return np.linspace(EDGE_EPS, np.pi - EDGE_EPS, grid_n)


def q_surface(j, grid_n: int, threads: int = 1, progress: bool = False) -> QSurface:
    """q over a grid_n x grid_n grid on (eps, pi - eps)^2 with phi1 = phi2 = 0"""
    spin = SpinJ.parse(j)
    thetas = theta_grid(grid_n)

    def row(t1: float) -> List[float]:
        return [q_at(spin, t1, t2) for t2 in thetas]

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(tqdm(pool.map(row, thetas), total=grid_n,
                         desc=f"q surface j={spin.label}", disable=not progress))
    return QSurface(spin=spin, thetas=thetas, q=np.array(rows))


def maximize_q(j, grid_n: int = 64, refine_tol: float = 1e-10, seed: int = 0,
               free_phi: bool = False, threads: int = 1, progress: bool = False) -> OptimizationResult:
    """
    Maximize q over the observable angles

    Args:
        j: spin
        grid_n: coarse grid size per axis, at least MIN_REFINE_GRID
        refine_tol: simplex argument tolerance
        seed: draws the starting phases when free_phi is set
        free_phi: refine phi1, phi2 as well (otherwise both stay 0)
        threads: worker threads for the grid and the refinements
        progress: show tqdm bars

    Returns:
        OptimizationResult of the best refinement
    """
    if grid_n < MIN_REFINE_GRID:
        raise HardyError(f"maximize_q needs grid_n >= {MIN_REFINE_GRID}, got {grid_n}")
    spin = SpinJ.parse(j)
    surface = q_surface(spin, grid_n, threads, progress)
    thetas = surface.thetas
    step = (thetas[1] - thetas[0]) / 2

    violations = []
    lock = threading.Lock()

    def objective(x: np.ndarray) -> float:
        t1, t2 = x[0], x[1]
        if not (EDGE_EPS <= t1 <= np.pi - EDGE_EPS and EDGE_EPS <= t2 <= np.pi - EDGE_EPS):
            return -np.inf
        q = q_at(spin, t1, t2, *(x[2:4] if free_phi else (0.0, 0.0)))
        if q > Q_MAX + BOUND_SLACK:
            with lock:
                violations.append(q)
        return q

    flat = np.argsort(surface.q, axis=None, kind='stable')[::-1][:TOP_CELLS]
    rng = np.random.default_rng(seed)
    starts = []
    for idx in flat:
        i, k = np.unravel_index(int(idx), surface.q.shape)
        x0 = [thetas[i], thetas[k]]
        if free_phi:
            x0 += list(rng.uniform(0, 2 * np.pi, 2))
        starts.append(np.array(x0))

    def refine(x0: np.ndarray):
        return nelder_mead(objective, x0, step=step, xtol=refine_tol, ftol=1e-16,
                           max_iter=MAX_ITER, maximize=True, restarts=1)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(refine, starts))

    best = max(results, key=lambda r: r.fun)
    gi, gk = surface.argmax()
    phis = (float(best.x[2] % (2 * np.pi)), float(best.x[3] % (2 * np.pi))) if free_phi else (0.0, 0.0)
    if violations:
        logger.warning(f"{len(violations)} evaluations exceeded the conjectured bound for j={spin.label}, "
                       f"largest q={max(violations):.12g}")
    logger.info(f"j={spin.label}: q*={best.fun:.12g} at theta=({np.degrees(best.x[0]):.4f}, "
                f"{np.degrees(best.x[1]):.4f}) deg")
    return OptimizationResult(
        j=spin.label,
        theta1_star=float(best.x[0]),
        theta2_star=float(best.x[1]),
        phi1_star=phis[0],
        phi2_star=phis[1],
        q_star=float(best.fun),
        iterations=sum(r.iterations for r in results),
        evaluations=sum(r.evaluations for r in results) + grid_n * grid_n,
        grid_n=grid_n,
        grid_best=[float(thetas[gi]), float(thetas[gk]), float(surface.q[gi, gk])],
        path=best.path,
        bound_violations=len(violations),
        free_phi=free_phi,
    )


def symmetric_slice(j, theta_samples: Sequence[float]) -> List[Tuple[float, float]]:
    """[(theta, q(theta, theta))]"""
    spin = SpinJ.parse(j)
    return [(float(t), q_at(spin, t, t)) for t in theta_samples]


def critical_residual(j, theta1: float, theta2: float, h: float = 1e-4) -> np.ndarray:
    """(dq/dtheta1, dq/dtheta2) by central differences"""
    if not 1e-6 <= h <= 1e-3:
        raise HardyError(f"Step h must lie in [1e-6, 1e-3], got {h}")
    spin = SpinJ.parse(j)
    d1 = (q_at(spin, theta1 + h, theta2) - q_at(spin, theta1 - h, theta2)) / (2 * h)
    d2 = (q_at(spin, theta1, theta2 + h) - q_at(spin, theta1, theta2 - h)) / (2 * h)
    return np.array([d1, d2])


def boundary_values(spin: SpinJ) -> List[List[float]]:
    """q next to the corners of the angle square: rows (theta1, theta2, q)"""
    rows = []
    for off in BOUNDARY_OFFSETS:
        for t1, t2 in ((off, off), (np.pi - off, np.pi - off), (off, np.pi - off)):
            rows.append([float(t1), float(t2), q_at(spin, t1, t2)])
    return rows


def conjecture_scan(j_list: Sequence, grid_n: int = 16, threads: int = 1,
                     progress: bool = False) -> ConjectureReport:
    """
    maximize_q for each spin through the generic pipeline and the gap to
    (-11 + 5 sqrt5)/2. Gaps above GAP_FLAG are logged as findings.
    """
    rows = []
    for j in j_list:
        spin = SpinJ.parse(j)
        result = maximize_q(spin, grid_n=grid_n, threads=threads, progress=progress)
        gap = abs(result.q_star - Q_MAX)
        flagged = gap > GAP_FLAG
        if flagged:
            logger.warning(f"Conjecture scan j={spin.label}: q*={result.q_star:.10g} "
                           f"differs from {Q_MAX:.10g} by {gap:.3e}")
        rows.append(ScanRow(
            j=spin.label,
            q_star=result.q_star,
            theta1_star=result.theta1_star,
            theta2_star=result.theta2_star,
            theta_star_degrees=float(np.degrees(result.theta1_star)),
            gap=gap,
            flagged=flagged,
            boundary=boundary_values(spin),
        ))
    return ConjectureReport(q_reference=Q_MAX, grid_n=grid_n, rows=rows)
