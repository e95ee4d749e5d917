"""Linear rankability of a sample: existence of a linear scorer that
replicates the response ordering exactly, plus a witness coefficient.

Strict feasibility of (Y_i - Y_j)(X_i - X_j) beta > 0 over all pairs is
scale-normalizable, so it is solved as margin-1 feasibility by a perceptron
iteration; for p <= 3 an exhaustive direction grid with local refinement
backs it up. Above p = 3 a failed search is only "presumed inrankable".
"""

from dataclasses import dataclass

import numpy as np

from ._backend import jit
from .losses import INDICATOR, hard_loss
from .model import Dataset, LinearScorer


@dataclass(frozen=True)
class RankabilityResult:
    rankable: bool
    witness: LinearScorer | None
    note: str = ""
    certified: bool = True

    def __iter__(self):
        # allows tuple-style unpacking: ok, witness = is_linearly_rankable(...)
        yield self.rankable
        yield self.witness


def _pair_constraints(data: Dataset) -> np.ndarray:
    X, Y = data.X, data.Y
    n = data.n
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            if Y[i] == Y[j]:
                continue
            rows.append(np.sign(Y[i] - Y[j]) * (X[i] - X[j]))
    return np.asarray(rows, dtype=np.float64)


def _perceptron_loop(A, max_iter):
    rows, p = A.shape
    w = np.zeros(p)
    for _ in range(max_iter):
        hit = -1
        for r in range(rows):
            acc = 0.0
            for c in range(p):
                acc += A[r, c] * w[c]
            if acc < 1.0:
                hit = r
                break
        if hit < 0:
            return w, True
        for c in range(p):
            w[c] += A[hit, c]
    return w, False


_perceptron_jit = jit(_perceptron_loop)


def _perceptron_numpy(A, max_iter):
    w = np.zeros(A.shape[1])
    for _ in range(max_iter):
        viol = A @ w < 1.0
        if not viol.any():
            return w, True
        w = w + A[int(np.argmax(viol))]
    return w, False


def _perceptron(A, max_iter):
    if _perceptron_jit is _perceptron_loop:  # numba disabled
        return _perceptron_numpy(A, max_iter)
    return _perceptron_jit(A, max_iter)


def _sphere_grid(p: int, count: int, seed: int = 0) -> np.ndarray:
    if p == 1:
        return np.array([[1.0], [-1.0]])
    if p == 2:
        theta = (np.arange(count) + 0.5) * (2.0 * np.pi / count)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((count, p))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return dirs


def _grid_refine(A: np.ndarray, p: int, seed: int = 0):
    """Best margin direction from a grid plus shrinking random refinement."""
    grid = _sphere_grid(p, 4096 if p == 2 else 8192, seed)
    margins = (A @ grid.T).min(axis=0)
    best = int(np.argmax(margins))
    d, margin = grid[best], margins[best]
    rng = np.random.default_rng(seed + 1)
    sigma = 0.5
    for _ in range(12):
        cand = d[None, :] + sigma * rng.standard_normal((200, p))
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        m = (A @ cand.T).min(axis=0)
        k = int(np.argmax(m))
        if m[k] > margin:
            d, margin = cand[k], m[k]
        sigma *= 0.5
    return d, margin


def is_linearly_rankable(data: Dataset, max_iter: int = 10**6) -> RankabilityResult:
    """Decide strict separability of the signed pairwise differences.

    Returns a witness scorer when feasible. Duplicate regressor rows with
    distinct responses make the sample inrankable outright.
    """
    if data.kind.name != "continuous":
        raise ValueError("rankability is defined for continuous responses only")
    A = _pair_constraints(data)
    if A.shape[0] == 0:
        return RankabilityResult(True, LinearScorer(np.zeros(data.p)), "no informative pairs")
    zero_rows = ~np.any(A != 0.0, axis=1)
    if zero_rows.any():
        return RankabilityResult(
            False, None, "duplicate regressor rows with distinct responses"
        )
    if data.p == 1:
        col = A[:, 0]
        if (col > 0).all():
            return RankabilityResult(True, LinearScorer(np.array([1.0])))
        if (col < 0).all():
            return RankabilityResult(True, LinearScorer(np.array([-1.0])))
        return RankabilityResult(False, None, "no single sign orders all pairs")

    w, ok = _perceptron(np.ascontiguousarray(A), max_iter)
    if ok:
        return RankabilityResult(True, LinearScorer(w))
    if data.p <= 3:
        d, margin = _grid_refine(A, data.p)
        if margin > 0.0:
            return RankabilityResult(True, LinearScorer(d / margin))
        return RankabilityResult(False, None, "grid + refinement found no feasible cone")
    return RankabilityResult(False, None, "presumed inrankable (p > 3)", certified=False)


def rankable_by(data: Dataset, scorer: LinearScorer) -> bool:
    """True iff the scorer attains zero hard indicator loss on the sample.
    beta = 0 passes vacuously under the tie convention (degenerate witness,
    excluded from feasibility by the strict margin above)."""
    return hard_loss(data, scorer, INDICATOR) == 0.0
