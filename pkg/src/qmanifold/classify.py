"""Classification predicates and identity residuals.

Two of the residuals implement theorems that hold for every admissible
metric in the family: membership in the locally-conformal-product class
(the trace-determined form of F) and the relation tying the two Ricci
tensors together through the four scalar traces.  They are exposed as
residuals rather than booleans so the verification runs can report how
far from zero the identities actually sit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .connection import FundamentalF, ThetaForm, christoffel, fundamental_f, theta
from .curvature import RicciData, almost_einstein_r, ricci, riemann, riemann_apply
from .structures import MetricAt, MetricSpec, metric_at

DEFAULT_TOL_FIRST = 1e-8   # identities with one derivative of A, B
DEFAULT_TOL_CURV = 1e-7    # identities at curvature level (two derivatives)


@dataclass(frozen=True)
class EinsteinClassification:
    """Outcome of fitting rho = alpha g + beta gt at a point."""

    kind: str  # "einstein" | "almost_einstein" | "generic"
    alpha: Optional[float]
    beta: Optional[float]
    residual: float

    @property
    def is_generic(self) -> bool:
        return self.kind == "generic"


@dataclass(frozen=True)
class ClassificationReport:
    point: tuple
    w1_residual: float
    is_locally_product: bool
    parallel_triple: tuple  # (A_3, B_1, B_2) at the point
    einstein: EinsteinClassification
    con_ae_residual: float
    fr_residual: Optional[float]  # populated when kind != generic


def check_w1(f: FundamentalF, th: ThetaForm, mat: MetricAt) -> float:
    """Max-norm residual of the trace-determined form of F:

    F_ijk = (1/8) (g_ik (3 th_j - tht_j) + g_ij (3 th_k - tht_k)
                   - gt_ik (3 tht_j - th_j) - gt_ij (3 tht_k - th_k))
    """
    a = 3 * th.theta - th.theta_tilde
    b = 3 * th.theta_tilde - th.theta
    rhs = (np.einsum("ik,j->ijk", mat.g, a) + np.einsum("ij,k->ijk", mat.g, a)
           - np.einsum("ik,j->ijk", mat.gt, b) - np.einsum("ij,k->ijk", mat.gt, b))
    return float(np.max(np.abs(f.f - rhs / 8.0)))


def parallel_triple(mat: MetricAt) -> tuple:
    return (float(mat.jet_a.grad[2]), float(mat.jet_b.grad[0]),
            float(mat.jet_b.grad[1]))


def is_locally_product(mat: MetricAt, tol: float = DEFAULT_TOL_FIRST) -> bool:
    """True when A_3, B_1, B_2 all vanish at the point, i.e. the structure
    is parallel there (A = A(x1, x2), B = B(x3) in the exact statement)."""
    return max(abs(v) for v in parallel_triple(mat)) < tol


def einstein_classify(ric: RicciData, mat: MetricAt,
                      tol: float = DEFAULT_TOL_CURV) -> EinsteinClassification:
    """Fit rho = alpha g + beta gt from the diagonal entries.

    The family is diagonal, so the least-squares fit collapses to a 2x2
    solve: alpha - beta from rho_11, rho_22 and alpha + beta from
    rho_33.  Off-diagonal entries of rho enter the residual only.
    """
    rho = ric.rho
    a = mat.jet_a.value
    b = mat.jet_b.value
    x = (rho[0, 0] + rho[1, 1]) / (2 * a)   # alpha - beta
    y = rho[2, 2] / b                       # alpha + beta
    alpha = (x + y) / 2.0
    beta = (y - x) / 2.0
    fit = alpha * mat.g + beta * mat.gt
    residual = float(np.max(np.abs(rho - fit)))
    scale = 1.0 + float(np.max(np.abs(rho)))
    if residual >= tol * scale:
        return EinsteinClassification("generic", None, None, residual)
    if abs(beta) < tol * scale:
        return EinsteinClassification("einstein", float(alpha), float(beta), residual)
    return EinsteinClassification("almost_einstein", float(alpha), float(beta),
                                  residual)


def check_einstein_scalar_relation(tau: float, tau_star: float,
                                   kind: EinsteinClassification) -> Optional[float]:
    """|tau* + tau/3| at Einstein points; None (absent) otherwise."""
    if kind.kind != "einstein":
        return None
    return abs(tau_star + tau / 3.0)


def check_con_ae(ricci_g: RicciData, ricci_gt: RicciData, mat: MetricAt) -> float:
    """Max-norm residual of the two-Ricci relation

    rho~ = rho + (1/8)(3 tau~* + tau~ - 3 tau - tau*) g
               + (1/8)(3 tau~ + tau~* - 3 tau* - tau) gt
    """
    c1, c2 = con_ae_coefficients(ricci_g, ricci_gt)
    rhs = ricci_g.rho + c1 * mat.g + c2 * mat.gt
    return float(np.max(np.abs(ricci_gt.rho - rhs)))


def con_ae_coefficients(ricci_g: RicciData, ricci_gt: RicciData) -> tuple:
    tau, tau_star = ricci_g.tau, ricci_g.tau_star
    tau_t, tau_t_star = ricci_gt.tau, ricci_gt.tau_star
    c1 = (3 * tau_t_star + tau_t - 3 * tau - tau_star) / 8.0
    c2 = (3 * tau_t + tau_t_star - 3 * tau_star - tau) / 8.0
    return c1, c2


def classification_report(spec: MetricSpec, point,
                          tol_first: float = DEFAULT_TOL_FIRST,
                          tol_curv: float = DEFAULT_TOL_CURV,
                          mat: Optional[MetricAt] = None) -> ClassificationReport:
    """Run every classification check at one point."""
    if mat is None:
        mat = metric_at(spec, point)
    gamma_g = christoffel(mat, "g")
    f = fundamental_f(mat, gamma_g)
    th = theta(mat, f)
    riem_g = riemann(mat, "g")
    riem_gt = riemann(mat, "gt")
    ric_g = ricci(riem_g, mat)
    ric_gt = ricci(riem_gt, mat)
    einstein = einstein_classify(ric_g, mat, tol_curv)
    fr_residual = None
    if not einstein.is_generic:
        fr_residual = 0.0
        basis = np.eye(3)
        for x in basis:
            for y in basis:
                for z in basis:
                    for u in basis:
                        predicted = almost_einstein_r(ric_g.tau, ric_g.tau_star,
                                                      mat, x, y, z, u)
                        fr_residual = max(fr_residual,
                                          abs(riemann_apply(riem_g, x, y, z, u)
                                              - predicted))
    return ClassificationReport(
        point=tuple(float(c) for c in mat.point),
        w1_residual=check_w1(f, th, mat),
        is_locally_product=is_locally_product(mat, tol_first),
        parallel_triple=parallel_triple(mat),
        einstein=einstein,
        con_ae_residual=check_con_ae(ric_g, ric_gt, mat),
        fr_residual=fr_residual,
    )
