"""Desk-scale ranking ERM fitters and a miniature SVR dual solver.

The indicator-loss fitter exploits scale invariance and searches unit
directions covering every sign orthant; ties between orthants break toward
the reference orthant, which under-reports breakdown and keeps the formula
bounds valid upper bounds. The SVR solver is a two-index working-set method
on theta = alpha* - alpha maintaining the sum constraint exactly.
"""

from dataclasses import dataclass

import numpy as np

from .losses import (
    INDICATOR,
    LossSpec,
    NO_PENALTY,
    Penalty,
    _xy,
    full_objective,
    hard_loss,
    localized_loss,
    weak_loss,
)
from .model import Dataset, LinearScorer


@dataclass(frozen=True)
class FitConfig:
    method: str = "orthant-grid"
    directions: int = 16
    restarts: int = 3
    max_iter: int = 500
    step_size: float = 1.0
    penalty: Penalty = NO_PENALTY
    seed: int = 0

    def __post_init__(self):
        if self.method not in {"orthant-grid", "subgradient"}:
            raise ValueError("method: orthant-grid or subgradient")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def orthant_direction_grid(p: int, directions: int, seed: int = 0) -> np.ndarray:
    """Unit directions covering all 2^p sign orthants (at least one apiece),
    deterministic given the seed. No direction has a zero component."""
    if p == 1:
        return np.array([[1.0], [-1.0]])
    if p == 2:
        count = max(directions, 8)
        theta = (np.arange(count) + 0.5) * (2.0 * np.pi / count)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    per_orthant = max(1, directions // (1 << p))
    rng = np.random.default_rng(seed)
    bases = [np.ones(p)]
    for _ in range(per_orthant - 1):
        bases.append(np.abs(rng.standard_normal(p)) + 0.1)
    bases = np.asarray(bases)
    bases /= np.linalg.norm(bases, axis=1, keepdims=True)
    dirs = []
    for mask in range(1 << p):
        signs = np.array([1.0 if (mask >> j) & 1 == 0 else -1.0 for j in range(p)])
        dirs.append(bases * signs[None, :])
    return np.vstack(dirs)


def _task_loss(data, scorer, spec, task, K, variant):
    if task.startswith("hard"):
        return hard_loss(data, scorer, spec)
    if task.startswith("localized"):
        v = variant if variant else ("predicted-bestk" if task.endswith("predicted") else "true-bestk")
        return localized_loss(data, scorer, K, v)
    if task == "weak":
        return weak_loss(data, scorer, K)
    raise ValueError(f"unknown task {task!r}")


def _sign_agreements(direction, reference):
    ref = np.asarray(reference, dtype=np.float64)
    support = ref != 0.0
    return int(np.sum(np.sign(direction[support]) == np.sign(ref[support])))


def erm_fit(
    data,
    spec: LossSpec = INDICATOR,
    task: str = "hard",
    cfg: FitConfig = FitConfig(),
    K: int | None = None,
    variant: str | None = None,
    reference=None,
) -> LinearScorer:
    """Minimize the selected ranking loss (+ penalty for surrogates) over the
    configured search family; deterministic given cfg.seed."""
    X, Y = _xy(data)
    p = X.shape[1]
    if cfg.method == "orthant-grid":
        if spec.family != "indicator":
            raise ValueError("orthant-grid handles the indicator loss")
        dirs = orthant_direction_grid(p, cfg.directions, cfg.seed)
        if dirs.size == 0:
            raise ValueError("empty search family")
        losses = np.array(
            [_task_loss((X, Y), LinearScorer(d), spec, task, K, variant) for d in dirs]
        )
        best = losses.min()
        tied = np.nonzero(losses == best)[0]
        if reference is not None and tied.size > 1:
            agree = np.array([_sign_agreements(dirs[i], reference) for i in tied])
            tied = tied[agree == agree.max()]
        return LinearScorer(dirs[tied[0]])
    return _subgradient_fit(X, Y, spec, cfg)


def _surrogate_grad_factor(spec: LossSpec, u: np.ndarray) -> np.ndarray:
    """dL/du for the supplied shapes."""
    if spec.shape == "exp":
        with np.errstate(over="ignore"):
            return -np.exp(-u)
    if spec.shape == "hinge":
        return -(u < 1.0).astype(np.float64)
    cl = spec.c_l if spec.c_l is not None else 1.0
    with np.errstate(over="ignore"):
        sig = 1.0 / (1.0 + np.exp(-np.clip(u, -700, 700)))
    return -cl * sig * (1.0 - sig)


def _subgradient_fit(X, Y, spec, cfg):
    if spec.family == "indicator":
        raise ValueError("subgradient descent needs a surrogate loss")
    n, p = X.shape
    iu, ju = np.triu_indices(n, 1)
    D = X[iu] - X[ju]
    dy = Y[iu] - Y[ju]
    norm = n * (n - 1)
    penalty = cfg.penalty

    def objective(beta):
        u = dy * (D @ beta)
        return 2.0 * spec.evaluate(u).sum() / norm + penalty(beta)

    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(p)]
    for _ in range(max(cfg.restarts - 1, 0)):
        starts.append(rng.standard_normal(p))
    best_beta = np.zeros(p)
    best_obj = objective(best_beta)
    for start in starts:
        beta = start.astype(np.float64).copy()
        obj = objective(beta)
        if obj < best_obj:
            best_obj, best_beta = obj, beta.copy()
        for t in range(1, cfg.max_iter + 1):
            u = dy * (D @ beta)
            gl = _surrogate_grad_factor(spec, u)
            grad = 2.0 * (D.T @ (gl * dy)) / norm
            if penalty.lam > 0.0:
                if penalty.family == "l1":
                    grad = grad + penalty.lam * np.sign(beta)
                elif penalty.family == "l2":
                    grad = grad + 2.0 * penalty.lam * beta
                else:
                    raise ValueError("subgradient supports l1/l2 penalties")
            beta = beta - (cfg.step_size / np.sqrt(t)) * grad
            obj = objective(beta)
            if obj < best_obj:
                best_obj, best_beta = obj, beta.copy()
    return LinearScorer(best_beta)


@dataclass(frozen=True)
class NormBound:
    kind: str  # "finite" | "unbounded" | "degenerate"
    radius: float | None


def regularized_norm_bound(
    spec: LossSpec, penalty: Penalty, data
) -> NormBound:
    """Radius R with every minimizer inside {||beta|| <= R}: the penalty alone
    exceeds the zero-coefficient objective beyond R. lambda = 0 gives no bound;
    a zero objective at 0_p (indicator under the tie convention) is degenerate
    and the caller falls back to an unpenalized search."""
    if penalty.family == "custom":
        raise ValueError("cannot bound a custom penalty (coercivity rate unknown)")
    if penalty.lam == 0.0:
        return NormBound("unbounded", None)
    obj0 = full_objective(data, LinearScorer(np.zeros(_xy(data)[0].shape[1])), spec, penalty)
    if obj0 == 0.0:
        return NormBound("degenerate", 0.0)
    if penalty.family == "l2":
        return NormBound("finite", float(np.sqrt(obj0 / penalty.lam)))
    # ||beta||_1 >= ||beta||_2, so lam * R > obj0 bounds the l2 norm too
    return NormBound("finite", float(obj0 / penalty.lam))


# ---------------------------------------------------------------------------
# support vector regression dual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SvrSolution:
    alpha: np.ndarray
    alpha_star: np.ndarray
    b: float
    objective: float
    kkt_residual: float
    converged: bool
    iterations: int

    @property
    def theta(self) -> np.ndarray:
        return self.alpha_star - self.alpha


def gram_matrix(X, kernel: str = "linear", degree: int = 3) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    G = X @ X.T
    if kernel == "linear":
        return G
    if kernel == "poly":
        return (1.0 + G) ** degree
    raise ValueError("kernel: linear or poly")


def _theta_objective(K, y, eps, th):
    return eps * float(np.abs(th).sum()) - float(y @ th) + 0.5 * float(th @ (K @ th))


def svr_dual_solve(
    data,
    C: float,
    eps_tube: float,
    kernel: str = "linear",
    degree: int = 3,
    gram: np.ndarray | None = None,
    tol: float = 1e-6,
    max_iter: int | None = None,
) -> SvrSolution:
    """Solve the boxed SVR dual with the equality constraint by exact
    two-index working-set updates on theta = alpha* - alpha (maximal violating
    pair, piecewise-quadratic line search). Complementarity alpha_i alpha*_i = 0
    holds by construction."""
    if C <= 0 or eps_tube < 0:
        raise ValueError("need C > 0 and eps_tube >= 0")
    if isinstance(data, Dataset):
        X, y = data.X, data.Y
    else:
        X, y = data
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    if n > 200:
        raise ValueError("desk-scale solver: n <= 200")
    K = gram if gram is not None else gram_matrix(X, kernel, degree)
    K = np.asarray(K, dtype=np.float64)
    if max_iter is None:
        max_iter = 500 * n
    eps = float(eps_tube)
    th = np.zeros(n)
    g = -y.astype(np.float64).copy()  # g = K theta - y at theta = 0
    box = C - 1e-12
    it = 0
    viol = np.inf
    while it < max_iter:
        up_pen = np.where(th >= 0.0, eps, -eps)
        dn_pen = np.where(th > 0.0, eps, -eps)
        cand_up = np.where(th < box, g + up_pen, np.inf)
        cand_dn = np.where(th > -box, g + dn_pen, -np.inf)
        i = int(np.argmin(cand_up))
        j = int(np.argmax(cand_dn))
        viol = cand_dn[j] - cand_up[i]
        if viol <= tol:
            break
        it += 1
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta < 0.0:
            eta = 0.0
        d_max = min(C - th[i], th[j] + C)
        base = g[i] - g[j]
        cuts = {0.0, d_max}
        if th[i] < 0.0 and 0.0 < -th[i] < d_max:
            cuts.add(-th[i])
        if th[j] > 0.0 and 0.0 < th[j] < d_max:
            cuts.add(th[j])
        knots = sorted(cuts)
        abs0 = np.abs(th[i]) + np.abs(th[j])

        def delta_obj(d):
            move = (abs(th[i] + d) + abs(th[j] - d)) - abs0
            return 0.5 * eta * d * d + base * d + eps * move

        best_d, best_val = 0.0, 0.0
        for a, bnd in zip(knots[:-1], knots[1:]):
            for cand in (a, bnd):
                val = delta_obj(cand)
                if val < best_val:
                    best_d, best_val = cand, val
            if eta > 0.0:
                midpoint = 0.5 * (a + bnd)
                s_i = 1.0 if th[i] + midpoint >= 0.0 else -1.0
                s_j = 1.0 if th[j] - midpoint > 0.0 else -1.0
                interior = -(base + (eps * s_i - eps * s_j)) / eta
                if a < interior < bnd:
                    val = delta_obj(interior)
                    if val < best_val:
                        best_d, best_val = interior, val
        if best_val >= -1e-15:
            break  # numerically stalled
        th[i] += best_d
        th[j] -= best_d
        g = g + best_d * (K[:, i] - K[:, j])

    alpha = np.maximum(-th, 0.0)
    alpha_star = np.maximum(th, 0.0)
    in_up = (th > 1e-8) & (th < C - 1e-8)
    in_dn = (th < -1e-8) & (th > -C + 1e-8)
    kth = K @ th
    b_cands = np.concatenate([(y - kth - eps)[in_up], (y - kth + eps)[in_dn]])
    if b_cands.size:
        b = float(b_cands.mean())
    else:
        lo = np.where(th > -box, g + np.where(th > 0.0, eps, -eps), -np.inf).max()
        hi = np.where(th < box, g + np.where(th >= 0.0, eps, -eps), np.inf).min()
        b = -0.5 * (lo + hi) if np.isfinite(lo) and np.isfinite(hi) else 0.0
    return SvrSolution(
        alpha=alpha,
        alpha_star=alpha_star,
        b=b,
        objective=_theta_objective(K, y, eps, th),
        kkt_residual=float(max(viol, 0.0)),
        converged=bool(viol <= tol),
        iterations=it,
    )


def svr_swap_check(
    data,
    C: float,
    eps_tube: float,
    tol: float = 1e-5,
    kernel: str = "linear",
    degree: int = 3,
) -> bool:
    """Response negation swaps (alpha, alpha*): solve on Y and -Y and compare
    coefficient blocks (sup-norm) and objectives."""
    if isinstance(data, Dataset):
        X, y = data.X, data.Y
    else:
        X, y = data
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
    G = gram_matrix(X, kernel, degree)
    sol = svr_dual_solve((X, y), C, eps_tube, gram=G)
    neg = svr_dual_solve((X, -y), C, eps_tube, gram=G)
    if not (sol.converged and neg.converged):
        raise RuntimeError("svr_dual_solve did not converge on both problems")
    return (
        float(np.max(np.abs(neg.alpha - sol.alpha_star))) <= tol
        and float(np.max(np.abs(neg.alpha_star - sol.alpha))) <= tol
        and abs(neg.objective - sol.objective) <= tol
    )
