"""Numba/numpy backend selection for the hot pairwise kernels.

Two environment variables control execution:

* ``OIBDP_DISABLE_NUMBA`` -- any truthy value ("1", "true", "yes") forces the
  pure-numpy fallback path even when numba is installed.
* ``OIBDP_THREADS`` -- caps parallelism (numba's thread pool and the CLI
  sweep fan-out).
"""

import os


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_DISABLED = _env_flag("OIBDP_DISABLE_NUMBA")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not NUMBA_DISABLED


def thread_cap() -> int:
    """Maximum worker count honoring OIBDP_THREADS (>= 1)."""
    raw = os.environ.get("OIBDP_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        cap = os.cpu_count() or 1
    return cap


if USE_NUMBA:
    try:
        numba.set_num_threads(min(thread_cap(), numba.get_num_threads()))
    except ValueError:  # pragma: no cover - single-core containers
        pass


def jit(func):
    """Apply ``numba.njit`` when the numba path is active, else return as-is."""
    if not USE_NUMBA:
        return func
    try:
        return numba.njit(cache=True)(func)
    except RuntimeError:  # pragma: no cover - unwritable cache dir
        return numba.njit(func)
