"""Named test potentials used by the CLI, the tests and the benchmarks."""

import math

import numpy as np

from .potential import Potential

WITNESSES = {
    "zero": lambda x: np.zeros_like(x),
    "const": lambda x: np.full_like(x, 2.0),
    "mathieu": lambda x: 2.0 * np.cos(2.0 * x),
    "abs": lambda x: np.abs(x - 0.5 * math.pi),
    "x": lambda x: np.asarray(x, dtype=float),
    "xsin": lambda x: x * (math.pi - x) * np.sin(x) + x,
}

SYMMETRIC = ("zero", "const", "mathieu", "abs")
ASYMMETRIC = ("x", "xsin")


def witness(name, M=1024):
    """Potential sampled from a named witness; ``name`` may carry ``:M``."""
    if ":" in name:
        name, m = name.split(":", 1)
        M = int(m)
    try:
        f = WITNESSES[name]
    except KeyError:
        raise ValueError(f"unknown witness {name!r}; choose from {sorted(WITNESSES)}") from None
    return Potential.from_function(f, M=M)
