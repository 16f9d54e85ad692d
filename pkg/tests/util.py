"""Shared helpers for the test suite: a grammar-covering expression corpus
that is total on the sampling box, and a random safe-expression builder."""

from __future__ import annotations

import numpy as np

from qmanifold import MetricSpec, parse

# Every production of the grammar appears at least once; each entry is
# defined (and smooth) everywhere on [-2, 2]^3.
GRAMMAR_CORPUS = [
    "2",
    "0.5e1 + 1e-2",
    "x1",
    "x2 - x3",
    "x1 + x2 - x3",
    "x1*x2/(1 + x3^2)",
    "-x1^2",
    "(-x1)^2",
    "x1^3",
    "(3 + x1)^-2",
    "(3 + x1)^1.5",
    "(3 + x1)^(x2/4)",
    "sqrt(5 + x1*x2)",
    "log(3 + x2)",
    "sin(x1)*cos(x2) + sinh(x3)*cosh(x1)",
    "tanh(x1*x2)",
    "exp(0.3*x1 - x2)",
    "cosh(x1)^2",
    "x1^2*x2 - 3/(1 + x2^2)",
    "--x1 + -(x2*x3)",
    "cosh(x1)^2 + sinh(x2)^2",
]

SAFE_BOX = (-2.0, 2.0)


def random_safe_expression(rng: np.random.Generator, depth: int = 3) -> str:
    """Random expression text, total on the safe box by construction.

    log, sqrt and division only ever see arguments of the form
    1 + (...)^2, so no domain guard can fire during property runs.
    """
    if depth == 0:
        choice = rng.integers(0, 4)
        if choice == 0:
            return f"{rng.uniform(-2, 2):.4f}"
        return f"x{rng.integers(1, 4)}"
    a = random_safe_expression(rng, depth - 1)
    b = random_safe_expression(rng, depth - 1)
    kind = rng.integers(0, 8)
    if kind == 0:
        return f"({a} + {b})"
    if kind == 1:
        return f"({a} - {b})"
    if kind == 2:
        return f"({a})*({b})"
    if kind == 3:
        return f"({a})/(1 + ({b})^2)"
    if kind == 4:
        return f"-({a})"
    if kind == 5:
        fn = ("sin", "cos", "sinh", "cosh", "tanh")[rng.integers(0, 5)]
        return f"{fn}(({a})/4)"
    if kind == 6:
        return f"log(1 + ({a})^2)"
    return f"({a})^2"


def random_point(rng: np.random.Generator, box=SAFE_BOX) -> np.ndarray:
    return rng.uniform(box[0], box[1], size=3)


def spec_from(a_source: str, b_source: str) -> MetricSpec:
    return MetricSpec(A=parse(a_source), B=parse(b_source))
