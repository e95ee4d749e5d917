"""Asymptotic breakdown bounds, the piecewise-in-d localized curves and their
numerically root-found break-even points.

The break-even abscissas are always recomputed by bisection; published
decimal values serve only as test oracles.
"""

import math
from dataclasses import dataclass

HARD_UNIVARIATE_LIMIT = 1.0 - math.sqrt(0.5)

#: left end of the domain of the middle localized curve (-1 + 4d - 2.5d^2 >= 0)
_MID_DOMAIN_LO = (4.0 - math.sqrt(6.0)) / 5.0


class NoSignChangeError(ValueError):
    """Bisection bracket does not straddle a root."""


def bisect_root(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise NoSignChangeError(f"no sign change on [{lo}, {hi}] ({flo:+.3g}, {fhi:+.3g})")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= tol:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# curve definitions
# ---------------------------------------------------------------------------

def localized_low_true(d: float) -> float:
    """Small-d branch, ranking localized on the true top set."""
    return 2.0 - d - math.sqrt(4.0 - 6.0 * d + 2.5 * d * d)


def localized_low_predicted(d: float) -> float:
    """Small-d branch, ranking localized on the predicted top set."""
    return 4.0 - 3.0 * d - math.sqrt(16.0 - 28.0 * d + 12.0 * d * d)


def localized_mid(d: float) -> float:
    """Middle branch, shared by both localization variants."""
    return 1.0 - math.sqrt(-1.0 + 4.0 * d - 2.5 * d * d)


def localized_high(d: float) -> float:
    """Hard-ranking regime restricted to the top fraction d."""
    return d * HARD_UNIVARIATE_LIMIT


def localized_p_low_true(d: float, p: int) -> float:
    num = (4.0 * p - 3.0 * p * d) - math.sqrt(
        16.0 * p * p - 28.0 * p * p * d + 12.0 * p * p * d * d + 4.0 * d - 3.0 * d * d
    )
    return p * num / (p * p - 1.0)


def localized_p_low_predicted(d: float, p: int) -> float:
    # p c* with c* = (4 - 3d)/p - sqrt((16 - 28d + 12d^2)/p^2): p cancels
    return localized_low_predicted(d)


def localized_p_mid(d: float, p: int) -> float:
    num = (2.0 * p - p * d) - math.sqrt(
        4.0 * p * p * d - 4.0 * p * p * d * d - 8.0 * d + 5.0 * d * d + 4.0
    )
    return p * num / (p * p - 1.0)


def localized_p_high(d: float, p: int) -> float:
    return d * p / (p + 1.0)


def hard_fixed_p(p: int) -> float:
    """Bounded-loss hard ranking, fixed dimension."""
    return p / (p + 1.0)


def binary_fixed_p(p: int) -> float:
    """Bounded-loss binary / d-partite hard ranking, fixed dimension."""
    return (2.0 * p * p - math.sqrt(2.0) * p) / (2.0 * p * p + 1.0)


def compact_space_asymptote(p: int) -> float:
    """Two-cluster compact regressor/response space construction."""
    if p < 1:
        raise ValueError("need p >= 1")
    return p * p / (p * p + 0.5)


# ---------------------------------------------------------------------------
# break-even points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BreakevenPoints:
    d0: float
    d1: float | None


_VARIANTS = {"true-univariate", "predicted-univariate", "true-p", "predicted-p"}


def breakeven_points(variant: str, p: int | None = None) -> BreakevenPoints:
    """Recompute the regime-switch abscissas of the piecewise localized curves
    by bisection (|delta d| <= 1e-8). d1 is the switch into the hard regime
    (top fraction exceeds the surviving clean fraction); it is None when the
    middle curve never meets 1 - d for the given p."""
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    lo = _MID_DOMAIN_LO + 1e-9
    if variant == "true-univariate":
        d0 = bisect_root(lambda d: localized_low_true(d) - localized_mid(d), lo, 0.999)
        d1 = bisect_root(lambda d: localized_mid(d) - (1.0 - d), d0, 0.9999)
        return BreakevenPoints(d0, d1)
    if variant == "predicted-univariate":
        d0 = bisect_root(lambda d: localized_low_predicted(d) - localized_mid(d), lo, 0.999)
        d1 = bisect_root(lambda d: localized_mid(d) - (1.0 - d), d0, 0.9999)
        return BreakevenPoints(d0, d1)
    if p is None or p < 2:
        raise ValueError("fixed-p variants need p >= 2")
    low = localized_p_low_true if variant == "true-p" else localized_p_low_predicted
    d0 = bisect_root(lambda d: low(d, p) - localized_p_mid(d, p), 0.02, 0.97)
    try:
        d1 = bisect_root(lambda d: localized_p_mid(d, p) - (1.0 - d), d0, 0.9999)
    except NoSignChangeError:
        d1 = None
    return BreakevenPoints(d0, d1)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticQuery:
    """Limit query: exactly one of fixed dimension ``p`` or proportional
    growth rate ``b`` = lim p(n)/n; localized tasks take ``d`` = lim K(n)/n
    (a fixed K corresponds to d = None)."""

    task: str
    loss_regime: str = "indicator"
    p: int | None = None
    b: float | None = None
    d: float | None = None

    def __post_init__(self):
        if (self.p is None) == (self.b is None):
            raise ValueError("specify exactly one of p (fixed) or b (proportional)")
        if self.p is not None and self.p < 1:
            raise ValueError("need p >= 1")
        if self.b is not None and self.b < 0:
            raise ValueError("need b >= 0")
        if self.d is not None and not 0.0 < self.d <= 1.0:
            raise ValueError("d must lie in (0, 1]")
        if self.loss_regime not in {"indicator", "unbounded"}:
            raise ValueError("loss_regime: indicator or unbounded")


@dataclass(frozen=True)
class AsymptoteResult:
    value: float | None
    exists: bool = True
    label: str = ""


def _localized_piecewise(d: float, variant: str, p: int | None) -> float:
    if p is None or p == 1:
        pts = breakeven_points(f"{variant}-univariate")
        low = localized_low_true if variant == "true" else localized_low_predicted
        if d < pts.d0:
            return low(d)
        if d <= pts.d1:
            return localized_mid(d)
        return localized_high(d)
    pts = breakeven_points(f"{variant}-p", p)
    if d < pts.d0:
        return (localized_p_low_true if variant == "true" else localized_p_low_predicted)(d, p)
    if pts.d1 is not None:
        return localized_p_mid(d, p) if d <= pts.d1 else localized_p_high(d, p)
    # middle curve never reaches 1 - d: keep it only while self-consistent
    mid = localized_p_mid(d, p)
    return mid if mid <= 1.0 - d else localized_p_high(d, p)


def asymptotic_bdp(q: AsymptoticQuery) -> AsymptoteResult:
    """Evaluate the matching asymptotic formula for the query."""
    hard = q.task.startswith("hard")
    binary = q.task in {"hard-binary", "hard-dpartite"}
    if q.b is not None:
        if not hard:
            raise ValueError("proportional dimension growth is stated for hard tasks only")
        if q.b >= 1.0:
            return AsymptoteResult(None, exists=False, label="b>=1")
        if q.loss_regime == "unbounded":
            return AsymptoteResult(q.b, label="b<1, unbounded")
        return AsymptoteResult(1.0, label="b<1, bounded: one")
    if q.loss_regime == "unbounded":
        if hard:
            return AsymptoteResult(0.0, label="fixed p: zero")
        raise ValueError("no asymptotic statement for this unbounded query")
    if hard:
        if q.p == 1:
            return AsymptoteResult(HARD_UNIVARIATE_LIMIT, label="univariate")
        value = binary_fixed_p(q.p) if binary else hard_fixed_p(q.p)
        return AsymptoteResult(value, label="fixed p")
    if q.task in {"localized-true", "localized-predicted"}:
        variant = "true" if q.task == "localized-true" else "predicted"
        if q.d is None:
            return AsymptoteResult(0.0, label="fixed K: zero")
        return AsymptoteResult(
            _localized_piecewise(q.d, variant, q.p), label=f"piecewise d={q.d:g}"
        )
    raise ValueError(f"no asymptotic statement for task {q.task!r}")
