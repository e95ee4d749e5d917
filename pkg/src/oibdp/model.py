"""Domain types shared by every module: datasets, linear scorers, contamination
bookkeeping, breakdown-set membership and breakdown reports.

All types are immutable after construction (arrays are set read-only), so they
can be shared freely between workers.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

#: Magnitude cap standing in for "infinite" values. Coefficient components at
#: or above this magnitude are treated as diverging; no infinity ever enters
#: arithmetic.
BIG = 1e12


class RandomGuessFlag:
    """Sentinel: scoring hit an undefined form, the model acts as beta = 0_p."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "RANDOM_GUESS"


RANDOM_GUESS = RandomGuessFlag()


def _freeze(a):
    a = np.asarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ResponseKind:
    """Response scale: continuous, binary (+-1) or d-partite (labels 1..d)."""

    name: str
    d: int | None = None

    def __post_init__(self):
        if self.name not in {"continuous", "binary", "d-partite"}:
            raise ValueError(f"unknown response kind {self.name!r}")
        if self.name == "d-partite":
            if self.d is None or self.d < 2:
                raise ValueError("d-partite kind needs d >= 2")
        elif self.d is not None:
            raise ValueError("d is only meaningful for d-partite responses")

    @property
    def is_discrete(self):
        return self.name != "continuous"


CONTINUOUS = ResponseKind("continuous")
BINARY = ResponseKind("binary")


def dpartite(d: int) -> ResponseKind:
    return ResponseKind("d-partite", d)


@dataclass(frozen=True)
class Dataset:
    """Regressor matrix X (n x p), response vector Y (n,) and response kind.

    Continuous responses must be pairwise distinct (otherwise the true
    coefficient could be 0_p, an inlier breakdown we exclude); binary and
    d-partite responses must not all coincide.
    """

    X: np.ndarray
    Y: np.ndarray
    kind: ResponseKind = CONTINUOUS

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        Y = np.asarray(self.Y, dtype=np.float64)
        object.__setattr__(self, "X", _freeze(X))
        object.__setattr__(self, "Y", _freeze(Y))
        if X.ndim != 2 or Y.ndim != 1 or X.shape[0] != Y.shape[0]:
            raise ValueError("X must be (n, p) and Y (n,) with matching n")
        n, p = X.shape
        if n < 2 or p < 1:
            raise ValueError("need n >= 2 and p >= 1")
        if not (np.isfinite(X).all() and np.isfinite(Y).all()):
            raise ValueError("entries must be finite")
        if self.kind.name == "continuous":
            if np.unique(Y).size != n:
                raise ValueError("continuous responses must be pairwise distinct")
        else:
            if np.unique(Y).size < 2:
                raise ValueError("discrete responses must not all be equal")
            if self.kind.name == "binary" and not np.isin(Y, (-1.0, 1.0)).all():
                raise ValueError("binary responses must lie in {-1, +1}")
            if self.kind.name == "d-partite":
                labels = np.arange(1, self.kind.d + 1, dtype=np.float64)
                if not np.isin(Y, labels).all():
                    raise ValueError(f"d-partite responses must lie in 1..{self.kind.d}")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class LinearScorer:
    """Linear scoring function s(x) = x beta + b with finite intercept."""

    beta: np.ndarray
    b: float = 0.0

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.beta, dtype=np.float64))
        object.__setattr__(self, "beta", _freeze(beta))
        if not np.isfinite(self.b):
            raise ValueError("intercept must be finite")

    @property
    def p(self):
        return self.beta.shape[0]


@dataclass(frozen=True)
class ContaminatedSample:
    """Index partition of a sample of size n into clean part I and outliers I0.

    Arrays are kept separate from :class:`Dataset` because the clean subset of
    a discrete sample may lose the not-all-equal invariant and outlier
    responses may tie.
    """

    clean_X: np.ndarray
    clean_Y: np.ndarray
    out_X: np.ndarray
    out_Y: np.ndarray
    clean_idx: np.ndarray
    out_idx: np.ndarray
    kind: ResponseKind = CONTINUOUS
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("clean_X", "clean_Y", "out_X", "out_Y"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))
        ci = np.asarray(self.clean_idx, dtype=np.int64)
        oi = np.asarray(self.out_idx, dtype=np.int64)
        object.__setattr__(self, "clean_idx", ci)
        object.__setattr__(self, "out_idx", oi)
        n = ci.size + oi.size
        union = np.union1d(ci, oi)
        if union.size != n or union.min() != 0 or union.max() != n - 1:
            raise ValueError("clean_idx and out_idx must partition 0..n-1")
        if self.clean_X.shape[0] != ci.size or self.out_X.shape[0] != oi.size:
            raise ValueError("index sets do not match array sizes")

    @property
    def n(self):
        return self.clean_idx.size + self.out_idx.size

    @property
    def m(self):
        return self.out_idx.size

    @property
    def p(self):
        return self.clean_X.shape[1] if self.clean_X.size else self.out_X.shape[1]

    def merged(self):
        """(X, Y) of the full contaminated sample in original index order."""
        n, p = self.n, self.p
        X = np.empty((n, p))
        Y = np.empty(n)
        X[self.clean_idx] = self.clean_X
        Y[self.clean_idx] = self.clean_Y
        X[self.out_idx] = self.out_X
        Y[self.out_idx] = self.out_Y
        return X, Y

    def group_mask(self):
        """int64 vector over original indices: 0 = clean, 1 = outlier."""
        g = np.zeros(self.n, dtype=np.int64)
        g[self.out_idx] = 1
        return g


def uncontaminated(data: Dataset) -> ContaminatedSample:
    """Wrap a clean dataset as a contamination-free sample (m = 0)."""
    return ContaminatedSample(
        clean_X=data.X,
        clean_Y=data.Y,
        out_X=np.empty((0, data.p)),
        out_Y=np.empty(0),
        clean_idx=np.arange(data.n),
        out_idx=np.empty(0, dtype=np.int64),
        kind=data.kind,
    )


@dataclass(frozen=True)
class BreakdownSet:
    """Sign-reversal orthant intersection over the support of a reference.

    A candidate belongs to the set iff every component on the reference's
    support has strictly opposite sign (dead-band tau widens "strictly" to
    candidate_j * reference_j < -tau for numerical estimators).
    """

    reference: np.ndarray
    variant: str = "population"
    tau: float = 0.0

    def __post_init__(self):
        ref = np.atleast_1d(np.asarray(self.reference, dtype=np.float64))
        object.__setattr__(self, "reference", _freeze(ref))
        if not np.any(ref != 0.0):
            raise ValueError("reference must not be the zero vector")
        if self.variant not in {"population", "sample"}:
            raise ValueError("variant must be 'population' or 'sample'")
        if self.tau < 0.0:
            raise ValueError("tau must be nonnegative")


def in_breakdown_set(candidate, bset: BreakdownSet) -> bool:
    """True iff candidate_j * reference_j < -tau on every nonzero reference
    component. Zero reference components impose no constraint."""
    cand = np.atleast_1d(np.asarray(candidate, dtype=np.float64))
    ref = bset.reference
    if cand.shape != ref.shape:
        raise ValueError("candidate/reference dimension mismatch")
    support = ref != 0.0
    return bool(np.all(cand[support] * ref[support] < -bset.tau))


def classical_norm_breakdown(candidate, threshold: float = BIG) -> bool:
    """Norm-divergence test: the candidate's Euclidean norm reaches the
    configured divergence threshold."""
    cand = np.atleast_1d(np.asarray(candidate, dtype=np.float64))
    return bool(np.linalg.norm(cand) >= threshold)


def angular_breakdown(candidate, reference) -> bool:
    """Angular test: non-positive inner product with the reference."""
    cand = np.atleast_1d(np.asarray(candidate, dtype=np.float64))
    ref = np.atleast_1d(np.asarray(reference, dtype=np.float64))
    if cand.shape != ref.shape:
        raise ValueError("candidate/reference dimension mismatch")
    if not np.any(ref != 0.0):
        raise ValueError("reference must not be the zero vector")
    return bool(cand @ ref <= 0.0)


def score_all(scorer: LinearScorer, X):
    """Scores x beta + b per row, or RANDOM_GUESS on any undefined form.

    Components with |beta_j| >= BIG are treated as diverging. A diverging
    component multiplying a zero regressor entry, or two diverging
    contributions of opposite sign in the same row, are undefined forms; the
    whole model then degrades to random guessing (beta = 0_p, scores = b).
    Rows with a well-defined diverging contribution score +-BIG so that
    equal-direction divergences tie.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if not np.isfinite(X).all():
        raise ValueError("X must be finite")
    if X.shape[1] != scorer.p:
        raise ValueError(f"scorer has p={scorer.p} but X has {X.shape[1]} columns")
    beta = scorer.beta
    div = ~np.isfinite(beta) | (np.abs(beta) >= BIG)
    if not div.any():
        return X @ beta + scorer.b
    finite = ~div
    scores = X[:, finite] @ beta[finite] + scorer.b
    sign_contrib = np.sign(beta[div])[None, :] * np.sign(X[:, div])
    if np.any(np.sign(X[:, div]) == 0.0):
        return RANDOM_GUESS
    has_pos = (sign_contrib > 0).any(axis=1)
    has_neg = (sign_contrib < 0).any(axis=1)
    if np.any(has_pos & has_neg):
        return RANDOM_GUESS
    scores = np.where(has_pos, BIG, scores)
    scores = np.where(has_neg, -BIG, scores)
    return scores


@dataclass(frozen=True)
class BreakdownReport:
    """Minimal contamination count with its BDP ratio and provenance.

    ``exists=False`` means no contamination size forces a breakdown; then
    ``m_min`` and ``bdp`` are None. ``interval`` carries the early-stopping
    uncertainty range [m_lo, m_hi] with m_lo <= m_min <= m_hi.
    """

    m_min: int | None
    n: int
    regime: str = ""
    interval: tuple[int, int] | None = None
    exists: bool = True
    scheme: str = ""

    def __post_init__(self):
        if self.exists != (self.m_min is not None):
            raise ValueError("exists must mirror m_min being defined")
        if self.m_min is not None and not (1 <= self.m_min <= self.n):
            raise ValueError("m_min out of range")
        if self.interval is not None and self.m_min is not None:
            lo, hi = self.interval
            if not (lo <= self.m_min <= hi):
                raise ValueError("interval must bracket m_min")

    @property
    def bdp(self) -> Fraction | None:
        if self.m_min is None:
            return None
        return Fraction(self.m_min, self.n)


SCHEMA_VERSION = "1"


def report_to_dict(report: BreakdownReport) -> dict:
    """JSON-ready dict with the frozen field set of the report schema."""
    return {
        "schema_version": SCHEMA_VERSION,
        "m_min": report.m_min,
        "n": report.n,
        "bdp": None if report.bdp is None else float(report.bdp),
        "regime": report.regime,
        "interval": None if report.interval is None else list(report.interval),
        "exists": report.exists,
        "scheme": report.scheme,
    }


def load_csv(path, kind: ResponseKind = CONTINUOUS) -> Dataset:
    """Read a dataset CSV with header ``x1,...,xp,y`` (kind supplied out-of-band)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        cols = header.split(",")
        if len(cols) < 2 or cols[-1] != "y" or cols[:-1] != [f"x{i + 1}" for i in range(len(cols) - 1)]:
            raise ValueError(f"malformed dataset header {header!r}; expected x1,...,xp,y")
        body = np.loadtxt(fh, delimiter=",", ndmin=2)
    if body.shape[1] != len(cols):
        raise ValueError("row width does not match header")
    return Dataset(X=body[:, :-1], Y=body[:, -1], kind=kind)


def save_csv(path, X, Y) -> None:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    header = ",".join(f"x{i + 1}" for i in range(X.shape[1])) + ",y"
    body = np.column_stack([X, np.asarray(Y, dtype=np.float64)])
    np.savetxt(path, body, delimiter=",", header=header, comments="", newline="\n")
