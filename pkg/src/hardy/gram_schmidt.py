"""
Gram-Schmidt orthonormalization with one re-orthogonalization pass
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import HardyError

logger = logging.getLogger(__name__)

DROP_TOL = 1e-9


def gram_schmidt(vectors: Sequence[np.ndarray], tol: float = DROP_TOL,
                 basis: Optional[np.ndarray] = None) -> Tuple[np.ndarray, int]:
    """
    Classical Gram-Schmidt, projecting twice per vector.

    Args:
        vectors: complex vectors of equal length, processed in the given order
        tol: a vector is dropped when its norm after projection falls below
             tol times its input norm
        basis: optional orthonormal rows the result must also be orthogonal to
               (they are projected out but not returned)

    Returns:
        (orthonormal rows, rank) where rank counts the kept vectors only
    """
    vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vectors:
        raise HardyError("gram_schmidt needs at least one vector")
    n = vectors[0].size
    if any(v.size != n for v in vectors):
        raise HardyError("gram_schmidt vectors must share one dimension")

    fixed = np.zeros((0, n), dtype=complex) if basis is None else np.atleast_2d(basis)
    kept = []
    for idx, v in enumerate(vectors):
        in_norm = np.linalg.norm(v)
        if in_norm == 0:
            logger.debug(f"Vector {idx} is zero, dropped")
            continue
        q = np.vstack([fixed] + kept) if kept else fixed
        w = v.copy()
        for _ in range(2):
            if len(q):
                w = w - q.T @ (q.conj() @ w)
        norm = np.linalg.norm(w)
        if norm < tol * in_norm:
            logger.debug(f"Vector {idx} dependent (relative residual {norm / in_norm:.2e}), dropped")
            continue
        kept.append((w / norm)[None, :])

    if not kept:
        return np.zeros((0, n), dtype=complex), 0
    ortho = np.vstack(kept)
    return ortho, ortho.shape[0]


def numerical_rank(vectors: Iterable[np.ndarray], tol: float = DROP_TOL) -> int:
    """Rank of a family of vectors as counted by gram_schmidt"""
    return gram_schmidt(list(vectors), tol)[1]


def project_out(vector: np.ndarray, ortho: np.ndarray) -> np.ndarray:
    """Component of vector orthogonal to the orthonormal rows of ortho"""
    vector = np.asarray(vector, dtype=complex)
    if len(ortho) == 0:
        return vector.copy()
    w = vector - ortho.T @ (ortho.conj() @ vector)
    return w - ortho.T @ (ortho.conj() @ w)
