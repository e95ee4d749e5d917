"""Hot pairwise kernels behind the ranking losses and the verification scans.

Every kernel has a pure-numpy implementation (suffix ``_py``). When the numba
backend is active (see :mod:`oibdp._backend`) the public names point at jitted
loop versions compiled from the same arithmetic; otherwise they alias the
numpy fallbacks. ``benchmarks/bench_kernels.py`` times the two paths against
each other.

Loss shape codes shared by all kernels:

====  ==========================================
code  loss on the pairwise product u
====  ==========================================
0     indicator  I(u < 0)          (ties -> 0)
1     exp        e^{-u}            (unbounded)
2     hinge      max(0, 1 - u)     (unbounded)
3     sigmoid    c_l / (1 + e^u)   (bounded c_l)
====  ==========================================
"""

import math

import numpy as np

from ._backend import USE_NUMBA, jit

CODE_INDICATOR = 0
CODE_EXP = 1
CODE_HINGE = 2
CODE_SIGMOID = 3


# ---------------------------------------------------------------------------
# pure-numpy fallbacks
# ---------------------------------------------------------------------------

def _loss_matrix(s, y, code, cl):
    u = (y[:, None] - y[None, :]) * (s[:, None] - s[None, :])
    if code == CODE_INDICATOR:
        out = (u < 0.0).astype(np.float64)
    elif code == CODE_EXP:
        with np.errstate(over="ignore"):
            out = np.exp(-u)
    elif code == CODE_HINGE:
        out = np.maximum(0.0, 1.0 - u)
    elif code == CODE_SIGMOID:
        out = np.empty_like(u)
        pos = u >= 0.0
        with np.errstate(over="ignore"):
            t = np.exp(-u[pos])
            out[pos] = cl * t / (1.0 + t)
            out[~pos] = cl / (1.0 + np.exp(u[~pos]))
    else:
        raise ValueError(f"unknown loss code {code}")
    np.fill_diagonal(out, 0.0)
    return out


def pair_loss_total_py(s, y, code, cl):
    return float(_loss_matrix(s, y, code, cl).sum())


def pair_loss_groups_py(s, y, grp, code, cl):
    m = _loss_matrix(s, y, code, cl)
    out_i = grp[:, None].astype(bool)
    out_j = grp[None, :].astype(bool)
    clean = float(m[~out_i & ~out_j].sum())
    outl = float(m[out_i & out_j].sum())
    mixed = float(m[out_i ^ out_j].sum())
    return clean, outl, mixed


def misrank_count_py(s, y):
    dy = y[:, None] - y[None, :]
    ds = s[:, None] - s[None, :]
    return int(np.count_nonzero(dy * ds < 0.0))


def misrank_count_subset_py(s, y, idx):
    ss = s[idx]
    yy = y[idx]
    dy = yy[:, None] - yy[None, :]
    ds = ss[:, None] - ss[None, :]
    # ordered count over the subset, halved -> unordered pairs
    return int(np.count_nonzero(dy * ds < 0.0)) // 2


def weak_miss_count_py(s, best_idx, K):
    miss = 0
    for i in best_idx:
        rank = 1 + int(np.sum(s > s[i])) + int(np.sum(s[:i] == s[i]))
        if rank > K:
            miss += 1
    return miss


# ---------------------------------------------------------------------------
# numba loop versions (same arithmetic, scalar loops)
# ---------------------------------------------------------------------------

def _loss_scalar(u, code, cl):
    if code == 0:
        return 1.0 if u < 0.0 else 0.0
    if code == 1:
        return math.exp(-u)
    if code == 2:
        v = 1.0 - u
        return v if v > 0.0 else 0.0
    # sigmoid, numerically stable on both tails
    if u >= 0.0:
        t = math.exp(-u)
        return cl * t / (1.0 + t)
    return cl / (1.0 + math.exp(u))


def _pair_loss_total_loop(s, y, code, cl):
    n = s.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            acc += _loss_scalar((y[i] - y[j]) * (s[i] - s[j]), code, cl)
    return 2.0 * acc


def _pair_loss_groups_loop(s, y, grp, code, cl):
    n = s.shape[0]
    clean = 0.0
    outl = 0.0
    mixed = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            v = 2.0 * _loss_scalar((y[i] - y[j]) * (s[i] - s[j]), code, cl)
            k = grp[i] + grp[j]
            if k == 0:
                clean += v
            elif k == 2:
                outl += v
            else:
                mixed += v
    return clean, outl, mixed


def _misrank_count_loop(s, y):
    n = s.shape[0]
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            if (y[i] - y[j]) * (s[i] - s[j]) < 0.0:
                c += 1
    return 2 * c


def _misrank_count_subset_loop(s, y, idx):
    k = idx.shape[0]
    c = 0
    for a in range(k):
        i = idx[a]
        for b in range(a + 1, k):
            j = idx[b]
            if (y[i] - y[j]) * (s[i] - s[j]) < 0.0:
                c += 1
    return c


def _weak_miss_count_loop(s, best_idx, K):
    n = s.shape[0]
    miss = 0
    for a in range(best_idx.shape[0]):
        i = best_idx[a]
        rank = 1
        for j in range(n):
            if s[j] > s[i]:
                rank += 1
            elif s[j] == s[i] and j < i:
                rank += 1
        if rank > K:
            miss += 1
    return miss


if USE_NUMBA:
    _loss_scalar = jit(_loss_scalar)
    pair_loss_total = jit(_pair_loss_total_loop)
    pair_loss_groups = jit(_pair_loss_groups_loop)
    misrank_count = jit(_misrank_count_loop)
    misrank_count_subset = jit(_misrank_count_subset_loop)
    weak_miss_count = jit(_weak_miss_count_loop)
else:
    pair_loss_total = pair_loss_total_py
    pair_loss_groups = pair_loss_groups_py
    misrank_count = misrank_count_py
    misrank_count_subset = misrank_count_subset_py
    weak_miss_count = weak_miss_count_py


def backends():
    """Kernel name -> {'numpy': fn, 'numba': fn or None}; used by the benchmark."""
    table = {
        "pair_loss_total": pair_loss_total_py,
        "pair_loss_groups": pair_loss_groups_py,
        "misrank_count": misrank_count_py,
        "misrank_count_subset": misrank_count_subset_py,
        "weak_miss_count": weak_miss_count_py,
    }
    out = {}
    for name, py_fn in table.items():
        out[name] = {"numpy": py_fn, "numba": globals()[name] if USE_NUMBA else None}
    return out


def warm_up():
    """Trigger JIT compilation of every kernel on tiny inputs."""
    s = np.array([1.0, 2.0, 3.0])
    y = np.array([1.0, 3.0, 2.0])
    grp = np.array([0, 0, 1], dtype=np.int64)
    idx = np.array([0, 1], dtype=np.int64)
    for code in (0, 1, 2, 3):
        pair_loss_total(s, y, code, 1.0)
    pair_loss_groups(s, y, grp, 0, 1.0)
    misrank_count(s, y)
    misrank_count_subset(s, y, idx)
    weak_miss_count(s, idx, 2)
