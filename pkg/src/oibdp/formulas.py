"""Closed-form / minimal-m-search finite-sample breakdown values for every
ranking problem class.

Every condition compares the loss of a fully sign-reverted coefficient
(left side) against the loss of the original-sign coefficient (right side)
on the worst-case contaminated configuration; the minimal m (or ladder step
k) with a strict win is the reported breakdown count. All comparisons use
exact integer / rational arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction

from .model import BreakdownReport

TASKS = {
    "hard-continuous",
    "hard-binary",
    "hard-dpartite",
    "localized-true",
    "localized-predicted",
    "weak",
}


@dataclass(frozen=True)
class ProblemClass:
    task: str
    loss_regime: str  # "indicator" (bounded) or "unbounded"
    n: int
    p: int
    K: int | None = None
    d: int | None = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.loss_regime not in {"indicator", "unbounded"}:
            raise ValueError("loss_regime: indicator or unbounded")
        if self.n < 2 or self.p < 1:
            raise ValueError("need n >= 2 and p >= 1")
        if self.task.startswith("localized") or self.task == "weak":
            if self.K is None or not 1 <= self.K <= self.n:
                raise ValueError(f"K must lie in 1..{self.n}")
        if self.task == "hard-dpartite" and (self.d is None or self.d < 2):
            raise ValueError("d-partite task needs d >= 2")


def hard_univariate(n: int) -> BreakdownReport:
    """Least m with m(n-m) + m(m-1)/2 > (n-m)(n-m-1)/2 outlier-side wins."""
    if n < 4:
        raise ValueError("univariate hard search needs n >= 4")
    for m in range(1, n + 1):
        if 2 * m * (n - m) + m * (m - 1) > (n - m) * (n - m - 1):
            return BreakdownReport(m, n, regime="hard-univariate", scheme="formula:hard-univariate")
    raise AssertionError("unreachable: m = n always wins")


def hard_multivariate(n: int, p: int) -> BreakdownReport:
    """m* = 1 + p k* with k* the least ladder depth whose same-axis outlier
    comparisons beat the surviving clean pairs; nonexistent for p >= n."""
    if p < 2:
        raise ValueError("use hard_univariate for p = 1")
    if p >= n:
        return BreakdownReport(
            None, n, regime="p>=n: no sign-reversal enforceable", exists=False,
            scheme="formula:hard-multivariate",
        )
    k = 1
    while True:
        q1 = max(n - p * k - 1, 0)
        q2 = max(n - p * k - 2, 0)
        if k * (k + 1) > q1 * q2:
            break
        k += 1
    m_star = min(1 + p * k, n)
    lo = max(2 + p * (k - 1), 1)
    interval = (min(lo, m_star), m_star)
    notes = [f"k*={k}"]
    if n - p * k - 2 < 0:
        notes.append("early-stop clamp")
    if p == n - 1:
        notes.append("p=n-1: p outliers suffice (no starting point needed)")
    return BreakdownReport(
        m_star, n, regime="; ".join(notes), interval=interval,
        scheme="formula:hard-multivariate",
    )


def binary_univariate(n: int) -> BreakdownReport:
    """m = 2k with k simultaneous extreme label flips on each side; valid for
    binary and d-partite responses alike."""
    if n < 4:
        raise ValueError("univariate binary search needs n >= 4")
    lo, hi = n // 2, n - n // 2
    for k in range(1, lo + 1):
        if k * lo + k * (hi - k) > (hi - k) * (lo - k):
            return BreakdownReport(
                2 * k, n, regime=f"k={k} flips per side", scheme="formula:binary-univariate"
            )
    raise AssertionError("unreachable: k = floor(n/2) always wins")


def binary_multivariate(n: int, p: int) -> BreakdownReport:
    """m* = 1 + 2 p k*, ladders on both sides of every axis."""
    if p < 2:
        raise ValueError("use binary_univariate for p = 1")
    if p >= n:
        return BreakdownReport(
            None, n, regime="p>=n: no sign-reversal enforceable", exists=False,
            scheme="formula:binary-multivariate",
        )
    k = 1
    while True:
        q1 = max(n - 2 * p * k - 1, 0)
        q2 = max(n - 2 * p * k - 2, 0)
        if 2 * k * (k + 1) > q1 * q2:
            break
        k += 1
    m_star = min(1 + 2 * p * k, n)
    lo = max(2 + 2 * p * (k - 1), 1)
    interval = (min(lo, m_star), m_star)
    notes = [f"k*={k}"]
    if n - 2 * p * k - 2 < 0:
        notes.append("early-stop clamp (starting point takes response 1)")
    return BreakdownReport(
        m_star, n, regime="; ".join(notes), interval=interval,
        scheme="formula:binary-multivariate",
    )


def _loc_uni_condition(n: int, K: int, m: int, variant: str) -> tuple[bool, str]:
    """Regime-aware breakdown condition at candidate m, exact rationals.

    Regime boundaries move with m: (iii) K >= n-m falls back to the hard
    condition on K instances; else (i) 2K <= n+m or (ii) the middle band."""
    if K >= n - m:
        win = 2 * m * (K - m) + m * (m - 1) > (K - m) * (K - m - 1)
        return win, "K>=n-m"
    cls_orig = Fraction(2 * (n - K) * m, n * n)
    rank_orig = Fraction(m * (m - 1) + 2 * m * (K - m), 2 * n * (n - 1))
    rank_broken = Fraction((K - m) * (K - m - 1), 2 * n * (n - 1))
    if 2 * K <= n + m:
        regime = "K<=(n+m)/2"
        cls_broken = Fraction(2 * (n - K) * (K - m), n * n)
        rhs = cls_orig if variant == "predicted-bestk" else cls_orig + rank_orig
    else:
        regime = "(n+m)/2<=K<=n-m"
        cls_broken = Fraction(2 * (n - K) * (n - K), n * n)
        rhs = cls_orig + rank_orig
    return cls_broken + rank_broken < rhs, regime


def localized_univariate(n: int, K: int, variant: str = "true-bestk") -> BreakdownReport:
    """Scan m = 1..K with per-m regime selection; m = K always breaks down,
    so the result is capped at K."""
    if not 1 <= K <= n:
        raise ValueError(f"K must lie in 1..{n}")
    if variant not in {"true-bestk", "predicted-bestk"}:
        raise ValueError("variant: true-bestk or predicted-bestk")
    scheme = f"formula:localized-univariate({variant})"
    for m in range(1, K + 1):
        win, regime = _loc_uni_condition(n, K, m, variant)
        if win:
            return BreakdownReport(m, n, regime=regime, scheme=scheme)
    return BreakdownReport(K, n, regime="cap-at-K", scheme=scheme)


def localized_multivariate(
    n: int, K: int, p: int, variant: str = "true-bestk"
) -> BreakdownReport:
    """m* = min(1 + p k*, K); nonexistent for p >= K."""
    if p < 2:
        raise ValueError("use localized_univariate for p = 1")
    if variant not in {"true-bestk", "predicted-bestk"}:
        raise ValueError("variant: true-bestk or predicted-bestk")
    scheme = f"formula:localized-multivariate({variant})"
    if p >= K:
        return BreakdownReport(
            None, n, regime="p>=K: no sign-reversal enforceable", exists=False, scheme=scheme
        )
    k = 0
    while True:
        m = 1 + p * k
        if m >= K:
            return BreakdownReport(K, n, regime="cap-at-K", scheme=scheme)
        if K >= n - m:
            q1 = max(K - p * k - 1, 0)
            q2 = max(K - p * k - 2, 0)
            win, regime = k * (k + 1) > q1 * q2, "K>=n-m"
        else:
            a1 = max(K - 1 - p * k, 0)
            a2 = max(K - 2 - p * k, 0)
            rank_broken = Fraction(a1 * a2, 2 * n * (n - 1))
            cls_orig = Fraction(2 * (n - K) * (1 + p * k), n * n)
            rank_orig = Fraction(k * (k + 1), 2 * n * (n - 1))
            if variant == "true-bestk":
                cls_broken = Fraction(2 * (n - K) * min(a1, n - K), n * n)
                win = cls_broken + rank_broken < cls_orig + rank_orig
                regime = "min(K-1-pk, n-K) classification"
            elif 2 * K <= n + m:
                cls_broken = Fraction(2 * (n - K) * a1, n * n)
                win = cls_broken + rank_broken < cls_orig
                regime = "K<=(n+m)/2"
            else:
                cls_broken = Fraction(2 * (n - K) * (n - K), n * n)
                win = cls_broken + rank_broken < cls_orig + rank_orig
                regime = "K>(n+m)/2"
        if win:
            m_star = min(1 + p * k, K)
            lo = max(2 + p * (k - 1), 1) if k >= 1 else 1
            interval = (min(lo, m_star), m_star)
            return BreakdownReport(
                m_star, n, regime=f"k*={k}; {regime}", interval=interval, scheme=scheme
            )
        k += 1


def weak_bdp(n: int, K: int, p: int) -> BreakdownReport:
    """Exact floor(K/2) + 1 for p = 1; only the coarse bound K/n for
    1 < p < K; nonexistent for p >= K."""
    if not 1 <= K <= n:
        raise ValueError(f"K must lie in 1..{n}")
    scheme = "formula:weak"
    if p >= K and p > 1:
        return BreakdownReport(
            None, n, regime="p>=K: no sign-reversal enforceable", exists=False, scheme=scheme
        )
    if p == 1:
        return BreakdownReport(K // 2 + 1, n, regime="exact (p=1)", scheme=scheme)
    return BreakdownReport(K, n, regime="coarse-bound", scheme=scheme)


def unbounded_bdp(problem: ProblemClass, localized_part: str = "ranking") -> BreakdownReport:
    """Upper bounds under unbounded surrogate losses: a starting point plus
    one diverging outlier per axis forces each sign."""
    if problem.loss_regime != "unbounded":
        raise ValueError("unbounded_bdp needs loss_regime='unbounded'")
    n, p, K = problem.n, problem.p, problem.K
    scheme = "formula:unbounded"

    def report(m, regime):
        return BreakdownReport(m, n, regime=regime, scheme=scheme)

    def absent(regime):
        return BreakdownReport(None, n, regime=regime, exists=False, scheme=scheme)

    if problem.task.startswith("hard"):
        if p == 1:
            return report(1, "p=1")
        if p < n - 1:
            return report(p + 1, "1<p<n-1")
        if p == n - 1:
            return report(p, "p=n-1")
        return absent("p>=n")
    if problem.task.startswith("localized"):
        if localized_part not in {"ranking", "classification"}:
            raise ValueError("localized_part: ranking or classification")
        if p == 1:
            return report(1, "p=1")
        if localized_part == "ranking":
            if p <= K - 2:
                return report(p + 1, "p<=K-2")
            if p == K - 1:
                return report(p, "p=K-1")
            return absent("p>=K")
        if p <= K - 1:
            return report(p + 1, "p<=K-1 (classification)")
        if p == K:
            return report(p, "p=K (classification)")
        return absent("p>K (classification)")
    # weak
    if p <= K - 1:
        return report(p, "p<=K-1")
    return absent("p>=K")


def dispatch(problem: ProblemClass, localized_part: str = "ranking") -> BreakdownReport:
    """Route a problem class to its matching formula."""
    if problem.loss_regime == "unbounded":
        return unbounded_bdp(problem, localized_part)
    n, p, K = problem.n, problem.p, problem.K
    if problem.task == "hard-continuous":
        return hard_univariate(n) if p == 1 else hard_multivariate(n, p)
    if problem.task in {"hard-binary", "hard-dpartite"}:
        return binary_univariate(n) if p == 1 else binary_multivariate(n, p)
    if problem.task == "localized-true":
        if p == 1:
            return localized_univariate(n, K, "true-bestk")
        return localized_multivariate(n, K, p, "true-bestk")
    if problem.task == "localized-predicted":
        if p == 1:
            return localized_univariate(n, K, "predicted-bestk")
        return localized_multivariate(n, K, p, "predicted-bestk")
    return weak_bdp(n, K, p)


def sparse_effective_bdp(problem: ProblemClass, q: int) -> BreakdownReport:
    """Oracle outliers on the q true support axes: re-invoke the matching
    formula with p replaced by q."""
    if not 1 <= q <= problem.p:
        raise ValueError("need 1 <= q <= p")
    reduced = ProblemClass(
        task=problem.task,
        loss_regime=problem.loss_regime,
        n=problem.n,
        p=q,
        K=problem.K,
        d=problem.d,
    )
    rep = dispatch(reduced)
    return BreakdownReport(
        rep.m_min,
        rep.n,
        regime=rep.regime,
        interval=rep.interval,
        exists=rep.exists,
        scheme=f"oracle-outliers(q={q}); {rep.scheme}",
    )
