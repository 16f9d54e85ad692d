"""Seeded random metric families for the verification runs.

Coefficients follow the template c0 + c1 * f(x_i)^2 with f drawn from
{cosh, scaled exp, affine}; c0 > 0 and c1 >= 0 make every sample
positive on the whole of R^3, so no rejection step is needed.  Sources
are emitted as expression text, which keeps the parser in the loop of
every randomized run.
"""

from __future__ import annotations

import numpy as np

from .structures import MetricSpec


def sample_coefficient_source(rng: np.random.Generator) -> str:
    c0 = rng.uniform(0.5, 1.5)
    c1 = rng.uniform(0.05, 0.8)
    var = f"x{rng.integers(1, 4)}"
    kind = rng.integers(0, 3)
    if kind == 0:
        core = f"cosh({var})"
    elif kind == 1:
        core = f"exp({rng.uniform(0.2, 0.6):.6f}*{var})"
    else:
        core = f"({rng.uniform(0.2, 0.7):.6f}*{var} + {rng.uniform(-0.5, 0.5):.6f})"
    return f"{c0:.6f} + {c1:.6f}*{core}^2"


def sample_spec(rng: np.random.Generator) -> MetricSpec:
    return MetricSpec.from_strings(sample_coefficient_source(rng),
                                   sample_coefficient_source(rng))


def sample_parallel_spec(rng: np.random.Generator) -> MetricSpec:
    """A member of the parallel subfamily: A = A(x1, x2), B = B(x3)."""
    a_var = f"x{rng.integers(1, 3)}"   # x1 or x2 only
    a = f"{rng.uniform(0.5, 1.5):.6f} + {rng.uniform(0.05, 0.8):.6f}*cosh({a_var})^2"
    b = f"{rng.uniform(0.5, 1.5):.6f} + {rng.uniform(0.05, 0.8):.6f}*exp({rng.uniform(0.2, 0.6):.6f}*x3)^2"
    return MetricSpec.from_strings(a, b)


def sample_point(rng: np.random.Generator, box: tuple = (-1.5, 1.5)) -> np.ndarray:
    return rng.uniform(box[0], box[1], size=3)


def sample_vector(rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=3)


def sample_basis_vector(rng: np.random.Generator) -> np.ndarray:
    """A vector bounded away from the orbit-degeneracy locus."""
    while True:
        v = rng.uniform(-1.0, 1.0, size=3)
        if abs(v[2] * (v[0] ** 2 + v[1] ** 2)) > 1e-2:
            return v
