"""Constructive adversarial outlier generators, one per worst-case proof.

"to infinity" limits are realized at a finite magnitude well below the global
cap, with strictly spaced ladders so no unintended ties are created. Where a
proof does not pin down which instances are replaced, the largest-index
instances are taken (the choice is immaterial to pairwise counts and keeps
the constructions deterministic).
"""

from dataclasses import dataclass

import numpy as np

from .model import BIG, CONTINUOUS, ContaminatedSample, Dataset, uncontaminated


@dataclass(frozen=True)
class AttackConfig:
    magnitude: float = 1e9
    gap: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.magnitude <= BIG:
            raise ValueError("magnitude must lie in (0, BIG]")
        if self.gap <= 0.0:
            raise ValueError("gap must be positive")


def _replace(data: Dataset, out_idx, out_X, out_Y, scheme: str, **meta) -> ContaminatedSample:
    out_idx = np.asarray(out_idx, dtype=np.int64)
    mask = np.ones(data.n, dtype=bool)
    mask[out_idx] = False
    clean_idx = np.nonzero(mask)[0]
    info = {"scheme": scheme, "m": int(out_idx.size)}
    info.update(meta)
    return ContaminatedSample(
        clean_X=data.X[clean_idx],
        clean_Y=data.Y[clean_idx],
        out_X=np.asarray(out_X, dtype=np.float64).reshape(out_idx.size, data.p),
        out_Y=np.asarray(out_Y, dtype=np.float64),
        clean_idx=clean_idx,
        out_idx=np.sort(out_idx),
        kind=data.kind,
        meta=info,
    )


def _largest_indices(n: int, m: int) -> np.ndarray:
    return np.arange(n - m, n, dtype=np.int64)


def univariate_hard_attack(
    data: Dataset, m: int, cfg: AttackConfig = AttackConfig(), beta_sign: float = 1.0
) -> ContaminatedSample:
    """m outliers strictly beyond the regressor range on the increasing-score
    side, responses descending along the ladder and all below every original
    response."""
    if data.p != 1:
        raise ValueError("univariate scheme needs p = 1")
    if not 0 <= m <= data.n:
        raise ValueError(f"m must lie in 0..{data.n}")
    if m == 0:
        return uncontaminated(data)
    s = 1.0 if beta_sign > 0 else -1.0
    edge = float(np.max(s * data.X[:, 0]))
    steps = np.arange(1, m + 1, dtype=np.float64)
    out_X = (s * (edge + cfg.gap * steps))[:, None]
    out_Y = float(np.min(data.Y)) - cfg.gap * steps
    return _replace(data, _largest_indices(data.n, m), out_X, out_Y, "univariate-hard")


def _corner(data: Dataset, signs: np.ndarray) -> np.ndarray:
    hi = data.X.max(axis=0)
    lo = data.X.min(axis=0)
    return np.where(signs > 0, hi, lo)


def _normalize_signs(data: Dataset, beta_signs) -> np.ndarray:
    signs = np.atleast_1d(np.asarray(beta_signs, dtype=np.float64))
    if signs.shape != (data.p,) or np.any(signs == 0.0):
        raise ValueError("beta_signs must give a nonzero sign per axis")
    return np.sign(signs)


def axiswise_hard_attack(
    data: Dataset,
    k: int,
    cfg: AttackConfig = AttackConfig(),
    beta_signs=None,
    unbounded_mode: bool = False,
    partial_axes: int = 0,
    anchor_on_clean: bool = False,
) -> ContaminatedSample:
    """Starting point at the componentwise signed extremum plus per-axis
    ladders of k outliers (the first ``partial_axes`` axes get one extra),
    responses equal within a ladder step and strictly descending step by
    step. ``unbounded_mode`` emits the single-step p+1 configuration with
    ladder responses at -magnitude. ``anchor_on_clean`` reuses the last
    remaining original point instead of spending an outlier on the start."""
    if data.p < 2:
        raise ValueError("axiswise scheme needs p >= 2")
    signs = (
        np.ones(data.p) if beta_signs is None else _normalize_signs(data, beta_signs)
    )
    if unbounded_mode:
        k, partial_axes = 1, 0
    if k < 0 or not 0 <= partial_axes < data.p:
        raise ValueError("need k >= 0 and 0 <= partial_axes < p")
    lengths = [k + (1 if j < partial_axes else 0) for j in range(data.p)]
    m = (0 if anchor_on_clean else 1) + sum(lengths)
    if m > data.n or (anchor_on_clean and m >= data.n):
        raise ValueError("insufficient clean points for the requested ladders")
    out_idx = _largest_indices(data.n, m)
    y_min = float(np.min(data.Y))
    if anchor_on_clean:
        keep = np.ones(data.n, dtype=bool)
        keep[out_idx] = False
        corner = data.X[np.nonzero(keep)[0][-1]].copy()
    else:
        corner = _corner(data, signs)
    xs, ys = [], []
    if not anchor_on_clean:
        xs.append(corner)
        ys.append(y_min - cfg.gap)
    for j in range(data.p):
        for step in range(1, lengths[j] + 1):
            x = corner.copy()
            x[j] += signs[j] * cfg.gap * step
            xs.append(x)
            if unbounded_mode:
                ys.append(-cfg.magnitude)
            else:
                ys.append(y_min - cfg.gap * (1 + step))
    return _replace(
        data, out_idx, np.asarray(xs), np.asarray(ys), "axiswise-hard",
        k=k, partial_axes=partial_axes, unbounded=unbounded_mode,
        anchor_on_clean=anchor_on_clean,
    )


def axiswise_attack_for_m(
    data: Dataset, m: int, cfg: AttackConfig = AttackConfig(), beta_signs=None
) -> ContaminatedSample:
    """Axiswise attack at an arbitrary budget m >= 1: a starting point plus
    (m - 1) ladder outliers distributed round-robin over the axes."""
    if m < 1:
        raise ValueError("need m >= 1")
    k, extra = divmod(m - 1, data.p)
    return axiswise_hard_attack(data, k, cfg, beta_signs, partial_axes=extra)


def _flip_labels(kind) -> tuple[float, float]:
    """(low, high) extreme labels for the response kind."""
    if kind.name == "binary":
        return -1.0, 1.0
    if kind.name == "d-partite":
        return 1.0, float(kind.d)
    raise ValueError("binary scheme needs a discrete response kind")


def binary_flip_attack(
    data: Dataset, m: int, cfg: AttackConfig = AttackConfig(), beta_sign: float = 1.0
) -> ContaminatedSample:
    """Flip the responses of the ceil(m/2) top-score-side and floor(m/2)
    bottom-score-side instances to the opposite extreme label, keeping the
    regressors (Y-outliers only)."""
    if data.p != 1:
        raise ValueError("flip scheme needs p = 1")
    lo_label, hi_label = _flip_labels(data.kind)
    if not 0 <= m <= data.n:
        raise ValueError(f"m must lie in 0..{data.n}")
    if m == 0:
        return uncontaminated(data)
    s = 1.0 if beta_sign > 0 else -1.0
    order = np.argsort(s * data.X[:, 0], kind="stable")
    k_right = (m + 1) // 2
    k_left = m // 2
    right = order[-k_right:]
    left = order[:k_left] if k_left else np.empty(0, dtype=np.int64)
    out_idx = np.concatenate([left, right]).astype(np.int64)
    out_Y = np.concatenate([np.full(k_left, hi_label), np.full(k_right, lo_label)])
    order_pos = np.argsort(out_idx, kind="stable")
    return _replace(
        data, out_idx[order_pos], data.X[out_idx[order_pos]], out_Y[order_pos],
        "binary-flip", k_left=int(k_left), k_right=int(k_right),
    )


def binary_attack(
    data: Dataset, k: int, cfg: AttackConfig = AttackConfig(), beta_signs=None
) -> ContaminatedSample:
    """Univariate: k simultaneous flips per side. Multivariate: a starting
    point at the signed corner with the high extreme label plus, per axis,
    k outliers beyond the data labeled with the low extreme on the
    increasing-score side and k labeled high on the opposite side."""
    lo_label, hi_label = _flip_labels(data.kind)
    if data.p == 1:
        if 2 * k > data.n:
            raise ValueError("need 2k <= n")
        sign = 1.0 if beta_signs is None else float(np.atleast_1d(beta_signs)[0])
        return binary_flip_attack(data, 2 * k, cfg, sign)
    signs = (
        np.ones(data.p) if beta_signs is None else _normalize_signs(data, beta_signs)
    )
    m = 1 + 2 * data.p * k
    if m > data.n:
        raise ValueError("insufficient instances for 1 + 2pk outliers")
    corner = _corner(data, signs)
    xs = [corner]
    ys = [hi_label]
    for j in range(data.p):
        for step in range(1, k + 1):
            up = corner.copy()
            up[j] += signs[j] * cfg.gap * step
            xs.append(up)
            ys.append(lo_label)
            down = corner.copy()
            down[j] -= signs[j] * cfg.gap * step
            xs.append(down)
            ys.append(hi_label)
    return _replace(
        data, _largest_indices(data.n, m), np.asarray(xs), np.asarray(ys),
        "binary-axiswise", k=k,
    )


def localized_attack(
    data: Dataset, K: int, m: int, cfg: AttackConfig = AttackConfig(), beta_sign: float = 1.0
) -> ContaminatedSample:
    """Raise the responses of the m bottom-of-the-list instances above every
    original response, ordered so that the sign-reverted coefficient ranks
    them perfectly (responses descend along the increasing-score direction).
    Regressors are kept. The attack saturates at m = K."""
    if data.p != 1:
        raise ValueError("localized scheme needs p = 1; compose axiswise ladders for p >= 2")
    if not 1 <= K <= data.n:
        raise ValueError(f"K must lie in 1..{data.n}")
    if m > K:
        raise ValueError("m > K: the localized attack saturates at K")
    if m == 0:
        return uncontaminated(data)
    s = 1.0 if beta_sign > 0 else -1.0
    order = np.argsort(s * data.X[:, 0], kind="stable")
    bottom = np.sort(order[:m])
    y_max = float(np.max(data.Y))
    score_rank = np.argsort(s * data.X[bottom, 0], kind="stable")
    out_Y = np.empty(m)
    out_Y[score_rank] = y_max + cfg.gap * np.arange(m, 0, -1, dtype=np.float64)
    return _replace(data, bottom, data.X[bottom], out_Y, "localized-raise", K=K)


def hypercube_attack(
    data: Dataset, k: int, p: int | None = None, cfg: AttackConfig = AttackConfig(),
    beta_signs=None,
) -> ContaminatedSample:
    """k^p grid outliers spanned from the signed corner, responses descending
    in lexicographic grid order (compatible with the axiswise partial order).
    Inferior to the axiswise ladders for large n; kept for comparison."""
    p = data.p if p is None else p
    if p != data.p:
        raise ValueError("grid dimension must match the data")
    if k < 1:
        raise ValueError("need k >= 1")
    count = k**p
    if count > data.n:
        raise ValueError("grid exceeds the sample size")
    signs = (
        np.ones(p) if beta_signs is None else _normalize_signs(data, beta_signs)
    )
    corner = _corner(data, signs)
    offsets = np.stack(
        np.meshgrid(*[np.arange(k, dtype=np.float64)] * p, indexing="ij"), axis=-1
    ).reshape(-1, p)
    xs = corner[None, :] + (cfg.gap * offsets) * signs[None, :]
    y_min = float(np.min(data.Y))
    ys = y_min - cfg.gap * np.arange(1, count + 1, dtype=np.float64)
    return _replace(
        data, _largest_indices(data.n, count), xs, ys, "hypercube",
        k=k, axis_comparisons=count * (k - 1) // 2,
    )


def compact_attack(
    data: Dataset, x_bounds, y_bounds, m: int, cfg: AttackConfig = AttackConfig()
) -> ContaminatedSample:
    """Compact-space scheme: m outliers descending from the upper regressor
    corner into the interior, (x_hi - eps_i, y_lo + eps_i) with a strictly
    decreasing eps ladder, everything inside the given bounds."""
    x_bounds = np.asarray(x_bounds, dtype=np.float64).reshape(data.p, 2)
    y_lo, y_hi = (float(v) for v in y_bounds)
    if np.any(data.X < x_bounds[:, 0]) or np.any(data.X > x_bounds[:, 1]):
        raise ValueError("data regressors violate the bounds")
    if data.Y.min() < y_lo or data.Y.max() > y_hi:
        raise ValueError("data responses violate the bounds")
    if not 0 <= m <= data.n:
        raise ValueError(f"m must lie in 0..{data.n}")
    if m == 0:
        return uncontaminated(data)
    widths = np.append(x_bounds[:, 1] - x_bounds[:, 0], y_hi - y_lo)
    eps0 = float(widths.min()) / 4.0
    eps = eps0 / 2.0 ** np.arange(m, dtype=np.float64)
    xs = x_bounds[None, :, 1] - eps[:, None]
    ys = y_lo + eps
    order = np.lexsort((-np.arange(data.n), -data.Y))
    out_idx = np.sort(order[:m])
    return _replace(data, out_idx, xs, ys, "compact", epsilons=tuple(eps))


def binary_attack_for_m(
    data: Dataset, m: int, cfg: AttackConfig = AttackConfig(), beta_signs=None
) -> ContaminatedSample:
    """Binary attack at an arbitrary budget m: label flips for p = 1, else a
    starting point plus up/down axis outliers filled round-robin."""
    if data.p == 1:
        sign = 1.0 if beta_signs is None else float(np.atleast_1d(beta_signs)[0])
        return binary_flip_attack(data, m, cfg, sign)
    lo_label, hi_label = _flip_labels(data.kind)
    if not 1 <= m <= data.n:
        raise ValueError(f"m must lie in 1..{data.n}")
    signs = (
        np.ones(data.p) if beta_signs is None else _normalize_signs(data, beta_signs)
    )
    corner = _corner(data, signs)
    xs = [corner]
    ys = [hi_label]
    slot = 0
    while len(xs) < m:
        rnd, rem = divmod(slot, 2 * data.p)
        axis, side = divmod(rem, 2)
        x = corner.copy()
        step = (rnd + 1) * cfg.gap
        if side == 0:
            x[axis] += signs[axis] * step
            ys.append(lo_label)
        else:
            x[axis] -= signs[axis] * step
            ys.append(hi_label)
        xs.append(x)
        slot += 1
    return _replace(
        data, _largest_indices(data.n, m), np.asarray(xs), np.asarray(ys),
        "binary-axiswise", partial=True,
    )
