"""Kernel backend selection.

The two hot loops (tuple-orbit BFS and induced-subgraph membership) exist
twice: a numba-compiled version and a pure numpy/Python version with the
same contract.  The environment variable GROWTHLAB_BACKEND picks one:

    auto    use numba when importable, else the pure path (default)
    numba   require numba, error if missing
    numpy   force the pure path even when numba is available

The variable is read on every call, so tests and benchmarks can flip it
without reimporting anything.
"""

import os

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    HAS_NUMBA = False

_CHOICES = ("auto", "numba", "numpy")


def resolve_backend(override: str | None = None) -> str:
    """Return the effective backend name, "numba" or "numpy".

    ``override`` takes precedence over the environment variable; both
    accept the three choices above.
    """
    choice = override if override is not None else os.environ.get("GROWTHLAB_BACKEND", "auto")
    choice = choice.strip().lower()
    if choice not in _CHOICES:
        raise ValueError(f"unknown backend {choice!r}; expected one of {_CHOICES}")
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba" and not HAS_NUMBA:
        raise RuntimeError("backend 'numba' requested but numba is not importable")
    return choice
