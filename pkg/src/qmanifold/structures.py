"""Fixed structure tensors and pointwise metric data.

The structure Q is the constant rotation (x1, x2, x3) -> (-x2, x1, x3);
its square P = diag(-1, -1, 1) is an almost product structure.  A metric
compatible with Q is forced to the diagonal form g = diag(A, A, B) with
A, B > 0, and the associated metric is gt = diag(-A, -A, B), i.e.
gt(x, y) = g(x, Py).

Matrix components are stored with the upper (output) index as the row,
so ``Q_COMPONENTS @ v`` applies the structure to a vector.  See
CONVENTIONS.md.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import NotPositiveDefiniteError
from .expr import Jet2, ScalarField, eval_jet2, parse

Which = Literal["g", "gt"]

Q_COMPONENTS = np.array([
    [0.0, -1.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0],
])
Q_COMPONENTS.setflags(write=False)

P_COMPONENTS = Q_COMPONENTS @ Q_COMPONENTS  # diag(-1, -1, 1)
P_COMPONENTS.setflags(write=False)

_Q_POWERS = (np.eye(3), Q_COMPONENTS, P_COMPONENTS, Q_COMPONENTS.T)


def q_matrix(power: int = 1) -> np.ndarray:
    """Q^power as a 3x3 matrix; power is taken mod 4."""
    return _Q_POWERS[power % 4]


def q_apply(v, power: int = 1) -> np.ndarray:
    """Apply Q^power to a vector: power 1 sends (a, b, c) to (-b, a, c)."""
    return q_matrix(power) @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class MetricSpec:
    """The two coefficient fields that determine g = diag(A, A, B)."""

    A: ScalarField
    B: ScalarField

    @classmethod
    def from_strings(cls, a_source: str, b_source: str) -> "MetricSpec":
        return cls(A=parse(a_source), B=parse(b_source))


FLAT_SPEC = MetricSpec.from_strings("1", "1")


@dataclass(frozen=True)
class MetricAt:
    """All pointwise metric data: components, inverses and coefficient jets.

    The four matrices are diagonal; they are exposed as full 3x3 arrays
    so that downstream index formulas stay literal.
    """

    point: np.ndarray
    jet_a: Jet2
    jet_b: Jet2
    g: np.ndarray
    g_inv: np.ndarray
    gt: np.ndarray
    gt_inv: np.ndarray

    def metric(self, which: Which) -> np.ndarray:
        return self.g if which == "g" else self.gt

    def inverse(self, which: Which) -> np.ndarray:
        return self.g_inv if which == "g" else self.gt_inv

    def d_metric(self, which: Which) -> np.ndarray:
        """dm[i, a, b] = partial_i m_ab, assembled from the coefficient jets."""
        sign = 1.0 if which == "g" else -1.0
        dm = np.zeros((3, 3, 3))
        for i in range(3):
            dm[i, 0, 0] = dm[i, 1, 1] = sign * self.jet_a.grad[i]
            dm[i, 2, 2] = self.jet_b.grad[i]
        return dm

    def dd_metric(self, which: Which) -> np.ndarray:
        """ddm[m, i, a, b] = partial_m partial_i m_ab."""
        sign = 1.0 if which == "g" else -1.0
        ddm = np.zeros((3, 3, 3, 3))
        for m in range(3):
            for i in range(3):
                ddm[m, i, 0, 0] = ddm[m, i, 1, 1] = sign * self.jet_a.hess[m, i]
                ddm[m, i, 2, 2] = self.jet_b.hess[m, i]
        return ddm

    def frame_scales(self) -> np.ndarray:
        """Scale factors of the g-orthonormal frame e_i = diag-scaled basis."""
        return 1.0 / np.sqrt(np.diag(self.g))


def metric_at(spec: MetricSpec, point) -> MetricAt:
    """Evaluate the metric family at a point.

    Raises :class:`NotPositiveDefiniteError` if A <= 0 or B <= 0 there;
    domain errors from the coefficient expressions propagate.
    """
    pt = np.asarray(point, dtype=float)
    jet_a = eval_jet2(spec.A, pt)
    jet_b = eval_jet2(spec.B, pt)
    if jet_a.value <= 0.0:
        raise NotPositiveDefiniteError("A", jet_a.value, pt)
    if jet_b.value <= 0.0:
        raise NotPositiveDefiniteError("B", jet_b.value, pt)
    a, b = jet_a.value, jet_b.value
    return MetricAt(
        point=pt,
        jet_a=jet_a,
        jet_b=jet_b,
        g=np.diag([a, a, b]),
        g_inv=np.diag([1.0 / a, 1.0 / a, 1.0 / b]),
        gt=np.diag([-a, -a, b]),
        gt_inv=np.diag([-1.0 / a, -1.0 / a, 1.0 / b]),
    )


def inner(mat: MetricAt, v, w, which: Which = "g") -> float:
    """Inner product v^T m w with m = g or the associated metric gt."""
    return float(np.asarray(v) @ mat.metric(which) @ np.asarray(w))
