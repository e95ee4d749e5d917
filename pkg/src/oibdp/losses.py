"""Ranking loss functionals, surrogate families, penalty axioms and the
clean/outlier/mixed decomposition of the contaminated objective.

All losses are evaluated on the pairwise product
``u = (Y_i - Y_j) * (s(X_i) - s(X_j))`` and ties (u = 0) contribute zero.
The double sums follow the i != j convention with divisor n(n-1); the
localized inner sum runs over i < j with the factor 2/(n(n-1)).
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels as K
from .model import (
    CONTINUOUS,
    RANDOM_GUESS,
    ContaminatedSample,
    Dataset,
    LinearScorer,
    score_all,
)

_SHAPE_CODES = {"exp": K.CODE_EXP, "hinge": K.CODE_HINGE, "sigmoid": K.CODE_SIGMOID}


@dataclass(frozen=True)
class LossSpec:
    """Loss family on pairwise products.

    * ``indicator`` -- I(u < 0); bounded with effective cap 1.
    * ``unbounded`` -- continuous, non-increasing, L(u) -> 0 as u -> +inf and
      L(u) -> inf as u -> -inf (shapes: ``exp``, ``hinge``).
    * ``bounded`` -- as above but L(u) -> c_l < inf (shape: ``sigmoid``).
    """

    family: str
    shape: str | None = None
    c_l: float | None = None

    def __post_init__(self):
        if self.family == "indicator":
            if self.shape is not None or self.c_l is not None:
                raise ValueError("indicator loss takes no shape or bound")
        elif self.family == "unbounded":
            if self.shape not in {"exp", "hinge"}:
                raise ValueError("unbounded shapes: exp, hinge")
        elif self.family == "bounded":
            if self.shape != "sigmoid":
                raise ValueError("bounded shape: sigmoid")
            if self.c_l is None or self.c_l <= 0:
                raise ValueError("bounded loss needs c_l > 0")
        else:
            raise ValueError(f"unknown loss family {self.family!r}")

    @property
    def code(self) -> int:
        if self.family == "indicator":
            return K.CODE_INDICATOR
        return _SHAPE_CODES[self.shape]

    @property
    def is_bounded(self) -> bool:
        return self.family in {"indicator", "bounded"}

    @property
    def bound(self) -> float:
        """Effective c_l (1 for the indicator)."""
        if not self.is_bounded:
            raise ValueError("unbounded loss has no finite bound")
        return 1.0 if self.family == "indicator" else float(self.c_l)

    def evaluate(self, u):
        u = np.asarray(u, dtype=np.float64)
        cl = self.c_l if self.c_l is not None else 1.0
        if self.family == "indicator":
            return (u < 0.0).astype(np.float64)
        if self.shape == "exp":
            with np.errstate(over="ignore"):
                return np.exp(-u)
        if self.shape == "hinge":
            return np.maximum(0.0, 1.0 - u)
        out = np.empty_like(u)
        pos = u >= 0.0
        with np.errstate(over="ignore"):
            t = np.exp(-u[pos])
            out[pos] = cl * t / (1.0 + t)
            out[~pos] = cl / (1.0 + np.exp(u[~pos]))
        return out


INDICATOR = LossSpec("indicator")


def exp_loss() -> LossSpec:
    return LossSpec("unbounded", "exp")


def hinge_loss() -> LossSpec:
    return LossSpec("unbounded", "hinge")


def sigmoid_loss(c_l: float = 1.0) -> LossSpec:
    return LossSpec("bounded", "sigmoid", c_l)


@dataclass(frozen=True)
class Penalty:
    """Coercive regularizer J_lambda: nonnegative, zero iff beta = 0, even,
    and diverging along every ray. ``custom`` wraps a user function already
    known to satisfy the axioms."""

    family: str
    lam: float
    func: Callable[[np.ndarray], float] | None = None

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")
        if self.family not in {"l1", "l2", "custom"}:
            raise ValueError("penalty family: l1, l2 or custom")
        if self.family == "custom" and self.func is None:
            raise ValueError("custom penalty needs a function")

    def __call__(self, beta) -> float:
        beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
        if self.lam == 0.0:
            return 0.0
        if self.family == "l1":
            return self.lam * float(np.abs(beta).sum())
        if self.family == "l2":
            return self.lam * float(beta @ beta)
        return self.lam * float(self.func(beta))


NO_PENALTY = Penalty("l2", 0.0)


def _xy(data):
    if isinstance(data, Dataset):
        return data.X, data.Y
    if isinstance(data, ContaminatedSample):
        return data.merged()
    X, Y = data
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    return X, np.asarray(Y, dtype=np.float64)


def _scores(scorer: LinearScorer, X):
    s = score_all(scorer, X)
    if s is RANDOM_GUESS:
        return np.full(X.shape[0], scorer.b)
    return np.ascontiguousarray(s)


def best_k_indices(Y, k: int) -> np.ndarray:
    """Indices of the K largest responses, ties broken by smallest index."""
    Y = np.asarray(Y, dtype=np.float64)
    order = np.lexsort((np.arange(Y.size), -Y))
    return np.sort(order[:k]).astype(np.int64)


def predicted_best_k_indices(scores, k: int) -> np.ndarray:
    """Indices of the K largest scores, ties broken by smallest index."""
    s = np.asarray(scores, dtype=np.float64)
    order = np.lexsort((np.arange(s.size), -s))
    return np.sort(order[:k]).astype(np.int64)


def hard_loss(data, scorer: LinearScorer, spec: LossSpec = INDICATOR) -> float:
    """(1/(n(n-1))) sum_{i != j} L((Y_i - Y_j)(s_i - s_j))."""
    X, Y = _xy(data)
    n = X.shape[0]
    if n < 2:
        raise ValueError("need n >= 2")
    s = _scores(scorer, X)
    cl = spec.c_l if spec.c_l is not None else 1.0
    if spec.family == "indicator":
        total = float(K.misrank_count(s, Y))
    else:
        total = K.pair_loss_total(s, Y, spec.code, cl)
    return total / (n * (n - 1))


def weak_loss(data, scorer: LinearScorer, k: int) -> float:
    """(2/n) * #{i in Best_K : descending rank of s(X_i) exceeds K}."""
    X, Y = _xy(data)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"K must lie in 1..{n}")
    s = _scores(scorer, X)
    best = best_k_indices(Y, k)
    return 2.0 * K.weak_miss_count(s, best, k) / n


def localized_loss(data, scorer: LinearScorer, k: int, variant: str = "true-bestk") -> float:
    """Weak part scaled by (n-K)/n plus the pairwise indicator loss restricted
    to the top-K set (true responses or predicted scores per ``variant``)."""
    X, Y = _xy(data)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"K must lie in 1..{n}")
    if variant not in {"true-bestk", "predicted-bestk"}:
        raise ValueError("variant: true-bestk or predicted-bestk")
    s = _scores(scorer, X)
    best = best_k_indices(Y, k)
    weak = 2.0 * K.weak_miss_count(s, best, k) / n
    subset = best if variant == "true-bestk" else predicted_best_k_indices(s, k)
    pairs = K.misrank_count_subset(s, Y, subset)
    return (n - k) / n * weak + 2.0 * pairs / (n * (n - 1))


def decompose_objective(
    cs: ContaminatedSample,
    scorer: LinearScorer,
    spec: LossSpec = INDICATOR,
    penalty: Penalty = NO_PENALTY,
) -> tuple[float, float, float]:
    """Split the regularized objective on a contaminated sample into
    (G, F, H): clean-pair loss + penalty, outlier-pair loss, mixed-pair loss.
    G + F + H equals the full objective on the merged sample."""
    X, Y = cs.merged()
    n = cs.n
    s = _scores(scorer, X)
    cl = spec.c_l if spec.c_l is not None else 1.0
    clean, outl, mixed = K.pair_loss_groups(s, Y, cs.group_mask(), spec.code, cl)
    norm = n * (n - 1)
    g = clean / norm + penalty(scorer.beta)
    return g, outl / norm, mixed / norm


def upper_envelope_G(
    cs: ContaminatedSample,
    scorer: LinearScorer,
    spec: LossSpec,
    penalty: Penalty = NO_PENALTY,
) -> float:
    """Clean-part objective plus the worst-case bounded-loss mass of every
    pair involving an outlier:
    G + [n(n-1) - (n-m)(n-m-1)] / (n(n-1)) * c_l."""
    if not spec.is_bounded:
        raise ValueError("upper envelope needs a bounded loss")
    g, _, _ = decompose_objective(cs, scorer, spec, penalty)
    n, m = cs.n, cs.m
    corr = (n * (n - 1) - (n - m) * (n - m - 1)) / (n * (n - 1))
    return g + corr * spec.bound


def full_objective(
    data,
    scorer: LinearScorer,
    spec: LossSpec = INDICATOR,
    penalty: Penalty = NO_PENALTY,
) -> float:
    """hard_loss + J_lambda(beta); the quantity minimized by the estimators."""
    return hard_loss(data, scorer, spec) + penalty(scorer.beta)
