"""Orbit bases {x, Qx, Q^2x, Q^3x}, their angles and curvatures.

A vector induces an orbit basis exactly when x3*((x1)^2 + (x2)^2) is
nonzero; the triple product of {x, Qx, Q^2x} equals twice that number.
The two angles live entirely in g: phi between x and Qx, psi between x
and Q^2x, with the exact relation cos(psi) = 2 cos(phi) - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classify import DEFAULT_TOL_CURV, DEFAULT_TOL_FIRST, con_ae_coefficients
from .curvature import RicciData, Riemann4, ricci, riemann, riemann_apply
from .errors import DegeneratePlaneError, DegenerateVectorError, NullDirectionError
from .structures import MetricAt, MetricSpec, metric_at, q_apply

PLANE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PLANE_LABELS = ("k(x,Qx)", "k(x,Q2x)", "k(x,Q3x)",
                "k(Qx,Q2x)", "k(Qx,Q3x)", "k(Q2x,Q3x)")

COS_PSI_TOL = 1e-6  # below this the tilde Ricci quotient is treated as undefined


@dataclass(frozen=True)
class QBasisReport:
    x: tuple
    orbit: np.ndarray            # rows x, Qx, Q^2 x, Q^3 x
    phi: float
    psi: float
    ricci_dirs: tuple            # r(Q^k x) for k = 0..3, with respect to g
    sectional: dict              # PLANE_LABELS -> k of the spanned 2-plane
    con_r_residual: Optional[float]
    psi_right_angle: bool        # cos(psi) ~ 0: the tilde quotient is undefined


def orbit_condition(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x[2] * (x[0] ** 2 + x[1] ** 2))


def induces_q_basis(x, tol: float = 1e-10) -> bool:
    """Orbit-basis test; equivalently |triple product of {x,Qx,Q^2x}| > 2 tol."""
    return abs(orbit_condition(x)) > tol


def orbit(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.stack([q_apply(x, k) for k in range(4)])


def angles(mat: MetricAt, x) -> tuple[float, float]:
    """(phi, psi) from the closed forms

    cos(phi) = B t / (A s + B t),  cos(psi) = (B t - A s) / (A s + B t)

    with s = (x1)^2 + (x2)^2 and t = (x3)^2.  Raises
    :class:`DegenerateVectorError` when x induces no orbit basis.
    """
    if not induces_q_basis(x):
        raise DegenerateVectorError(
            f"vector {tuple(float(c) for c in x)} induces no orbit basis: "
            "x3*((x1)^2 + (x2)^2) = 0")
    x = np.asarray(x, dtype=float)
    a, b = mat.jet_a.value, mat.jet_b.value
    s = x[0] ** 2 + x[1] ** 2
    t = x[2] ** 2
    norm = a * s + b * t
    cos_phi = b * t / norm
    cos_psi = (b * t - a * s) / norm
    return math.acos(cos_phi), math.acos(cos_psi)


def ricci_direction(ric: RicciData, mat: MetricAt, v) -> float:
    """Directional quotient rho(v, v) / m(v, v) for the matching metric.

    The associated metric is indefinite, so its quadratic form can
    vanish on nonzero vectors; those directions are rejected.
    """
    v = np.asarray(v, dtype=float)
    m = mat.metric(ric.which)
    denom = float(v @ m @ v)
    scale = float(v @ mat.g @ v)  # positive-definite norm for the tolerance
    if abs(denom) <= 1e-12 * max(scale, 1.0):
        raise NullDirectionError(
            f"direction {tuple(v)} is null for the {ric.which}-metric")
    return float(v @ ric.rho @ v) / denom


def sectional(riem: Riemann4, mat: MetricAt, x, y) -> float:
    """k(x, y) = R(x,y,x,y) / (m(x,x) m(y,y) - m(x,y)^2) for the metric the
    curvature was built from.  Degenerate 2-planes are rejected with a
    scale-aware tolerance (the associated metric admits many of them)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = mat.metric(riem.which)
    denom = float((x @ m @ x) * (y @ m @ y) - (x @ m @ y) ** 2)
    scale = max(float(x @ mat.g @ x) * float(y @ mat.g @ y), 1.0)
    if abs(denom) <= 1e-10 * scale:
        raise DegeneratePlaneError(
            f"2-plane spanned by {tuple(x)}, {tuple(y)} is degenerate for "
            f"the {riem.which}-metric")
    return riemann_apply(riem, x, y, x, y) / denom


def q_basis_report(spec: MetricSpec, point, x,
                   mat: Optional[MetricAt] = None) -> QBasisReport:
    """Full orbit-basis geometry at a point.

    The residual field checks the relation between the two directional
    Ricci quotients,

    r~(x) = r(x)/cos(psi) + (3 tau~* + tau~ - 3 tau - tau*) / (8 cos(psi))
            + (3 tau~ + tau~* - 3 tau* - tau) / 8,

    which is undefined at psi = pi/2 (flagged instead of computed).
    """
    if mat is None:
        mat = metric_at(spec, point)
    if not induces_q_basis(x):
        raise DegenerateVectorError(
            f"vector {tuple(float(c) for c in x)} induces no orbit basis: "
            "x3*((x1)^2 + (x2)^2) = 0")
    vecs = orbit(x)
    phi, psi = angles(mat, x)
    riem_g = riemann(mat, "g")
    riem_gt = riemann(mat, "gt")
    ric_g = ricci(riem_g, mat)
    ric_gt = ricci(riem_gt, mat)
    ricci_dirs = tuple(ricci_direction(ric_g, mat, v) for v in vecs)
    sectional_values = {
        label: sectional(riem_g, mat, vecs[i], vecs[j])
        for label, (i, j) in zip(PLANE_LABELS, PLANE_PAIRS)
    }
    cos_psi = math.cos(psi)
    psi_right_angle = abs(cos_psi) <= COS_PSI_TOL
    con_r_residual = None
    if not psi_right_angle:
        c1, c2 = con_ae_coefficients(ric_g, ric_gt)
        r_tilde = ricci_direction(ric_gt, mat, vecs[0])
        predicted = ricci_dirs[0] / cos_psi + c1 / cos_psi + c2
        con_r_residual = abs(r_tilde - predicted)
    return QBasisReport(
        x=tuple(float(c) for c in np.asarray(x, dtype=float)),
        orbit=vecs,
        phi=phi,
        psi=psi,
        ricci_dirs=ricci_dirs,
        sectional=sectional_values,
        con_r_residual=con_r_residual,
        psi_right_angle=psi_right_angle,
    )
