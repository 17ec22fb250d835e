"""
Nelder-Mead simplex search
Derivative-free reflect / expand / contract / shrink iterations with an
optional restart from the best vertex.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

ALPHA = 1.0   # reflection
GAMMA = 2.0   # expansion
BETA = 0.5    # contraction
DELTA = 0.5   # shrink


@dataclass
class SimplexResult:
    """Best vertex found; `path` holds the best value after every iteration"""

    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    path: List[float] = field(default_factory=list)


def nelder_mead(func: Callable[[np.ndarray], float], x0: Sequence[float],
                step: Union[float, Sequence[float]] = 0.1, xtol: float = 1e-10,
                ftol: float = 1e-14, max_iter: int = 2000, maximize: bool = False,
                restarts: int = 0) -> SimplexResult:
    """
    Minimize (or maximize) func starting from x0

    Args:
        func: objective taking a 1-D array
        x0: starting point
        step: initial simplex edge, scalar or one value per coordinate
        xtol: stop when every vertex lies within xtol of the best one
        ftol: ... and the objective spread is below ftol
        max_iter: iteration cap per run
        maximize: maximize instead of minimize
        restarts: number of fresh simplices built around the best vertex
                  after the first run

    Returns:
        SimplexResult with values reported in the caller's sign
    """
    sign = -1.0 if maximize else 1.0
    x = np.asarray(x0, dtype=float).ravel()
    result = _run(lambda v: sign * func(v), x, step, xtol, ftol, max_iter)
    for _ in range(restarts):
        polished = _run(lambda v: sign * func(v), result.x, step, xtol, ftol, max_iter)
        polished.path = result.path + polished.path
        polished.iterations += result.iterations
        polished.evaluations += result.evaluations
        result = polished

    result.fun = sign * result.fun
    result.path = [sign * v for v in result.path]
    logger.debug(f"Simplex finished after {result.iterations} iterations, f={result.fun:.12g}")
    return result


def _run(func: Callable[[np.ndarray], float], x0: np.ndarray,
         step: Union[float, Sequence[float]], xtol: float, ftol: float,
         max_iter: int) -> SimplexResult:
    dim = x0.size
    steps = np.broadcast_to(np.asarray(step, dtype=float), (dim,))

    simplex = np.vstack([x0] + [x0 + steps[i] * np.eye(dim)[i] for i in range(dim)])
    values = np.array([func(v) for v in simplex])
    evaluations = dim + 1
    path: List[float] = []
    converged = False

    iterations = 0
    while iterations < max_iter:
        order = np.argsort(values, kind='stable')
        simplex, values = simplex[order], values[order]
        if (np.max(np.abs(simplex[1:] - simplex[0])) <= xtol
                and np.max(np.abs(values[1:] - values[0])) <= ftol):
            converged = True
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]

        xr = centroid + ALPHA * (centroid - worst)
        fr = func(xr)
        evaluations += 1
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        elif fr < values[0]:
            xe = centroid + GAMMA * (centroid - worst)
            fe = func(xe)
            evaluations += 1
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + BETA * (xr - centroid)
            else:
                xc = centroid + BETA * (worst - centroid)
            fc = func(xc)
            evaluations += 1
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                # shrink toward the best vertex
                simplex[1:] = simplex[0] + DELTA * (simplex[1:] - simplex[0])
                values[1:] = [func(v) for v in simplex[1:]]
                evaluations += dim

        path.append(float(np.min(values)))

    best = int(np.argmin(values))
    return SimplexResult(
        x=simplex[best].copy(),
        fun=float(values[best]),
        iterations=iterations,
        evaluations=evaluations,
        converged=converged,
        path=path,
    )
