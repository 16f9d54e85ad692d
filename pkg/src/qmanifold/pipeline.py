"""One-stop evaluation of every tensor quantity at a point, plus the
residual suite that backs both the CLI verification runs and the tests.

Residual naming is stable: the verify command prints one line per key
of ``residual_suite`` and CI gates on them, so treat the keys as API.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classify import check_con_ae, check_w1
from .connection import (Christoffel, FundamentalF, ThetaForm, christoffel,
                         christoffel_closed_form, covariant_metric_derivative,
                         deformation_tensor, fundamental_f,
                         fundamental_f_closed_form, nabla_q,
                         nabla_q_closed_form, theta, theta_closed_form)
from .curvature import RicciData, Riemann4, reconstruct_from_ricci, ricci, riemann
from .structures import MetricAt, MetricSpec, P_COMPONENTS, metric_at

# Dual-path tolerances: closed form vs defining formula.  One extra
# differentiation costs roughly a decimal digit in doubles.
DUAL_TOL_FIRST = 1e-10   # Christoffel, F, theta, nabla Q
DUAL_TOL_SECOND = 1e-9   # deformation tensor, Riemann symmetries


@dataclass(frozen=True)
class CurvatureQuantities:
    """Everything the pipeline computes at one point."""

    mat: MetricAt
    gamma_g: Christoffel
    gamma_gt: Christoffel
    deformation: np.ndarray
    f: FundamentalF
    th: ThetaForm
    nq: np.ndarray
    riem_g: Riemann4
    riem_gt: Riemann4
    ric_g: RicciData
    ric_gt: RicciData


def curvature_quantities(spec: MetricSpec, point,
                         mat: Optional[MetricAt] = None) -> CurvatureQuantities:
    if mat is None:
        mat = metric_at(spec, point)
    gamma_g = christoffel(mat, "g")
    gamma_gt = christoffel(mat, "gt")
    f = fundamental_f(mat, gamma_g)
    th = theta(mat, f)
    riem_g = riemann(mat, "g")
    riem_gt = riemann(mat, "gt")
    return CurvatureQuantities(
        mat=mat,
        gamma_g=gamma_g,
        gamma_gt=gamma_gt,
        deformation=deformation_tensor(mat, th),
        f=f,
        th=th,
        nq=nabla_q(mat, gamma_g),
        riem_g=riem_g,
        riem_gt=riem_gt,
        ric_g=ricci(riem_g, mat),
        ric_gt=ricci(riem_gt, mat),
    )


def riemann_symmetry_residual(riem: Riemann4) -> float:
    r = riem.r
    anti_12 = np.max(np.abs(r + r.transpose(1, 0, 2, 3)))
    anti_34 = np.max(np.abs(r + r.transpose(0, 1, 3, 2)))
    pair = np.max(np.abs(r - r.transpose(2, 3, 0, 1)))
    bianchi = np.max(np.abs(r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)))
    return float(max(anti_12, anti_34, pair, bianchi))


def f_symmetry_residual(q: CurvatureQuantities) -> float:
    """F(x,y,z) = F(x,z,y) and F(x,Py,Pz) = -F(x,y,z), from the definition."""
    f = q.f.f
    swap = np.max(np.abs(f - f.transpose(0, 2, 1)))
    p_image = np.einsum("iab,aj,bk->ijk", f, P_COMPONENTS, P_COMPONENTS)
    return float(max(swap, np.max(np.abs(p_image + f))))


def reconstruction_residual(q: CurvatureQuantities, rng: np.random.Generator,
                            samples: int = 4) -> float:
    """Direct curvature vs its Ricci reconstruction (a 3D identity), for
    both metrics, on random vector 4-tuples."""
    worst = 0.0
    for riem, ric in ((q.riem_g, q.ric_g), (q.riem_gt, q.ric_gt)):
        for _ in range(samples):
            x, y, z, u = rng.uniform(-1.0, 1.0, size=(4, 3))
            direct = float(np.einsum("ijst,i,j,s,t->", riem.r, x, y, z, u))
            rebuilt = reconstruct_from_ricci(ric, q.mat, x, y, z, u)
            worst = max(worst, abs(direct - rebuilt))
    return worst


def residual_suite(q: CurvatureQuantities,
                   rng: Optional[np.random.Generator] = None) -> dict:
    """Every identity residual at one point, keyed by stable names.

    The reconstruction entry needs random vectors, so it only appears
    when an ``rng`` is supplied.
    """
    mat = q.mat
    out = {
        "gamma_closed_form": float(np.max(np.abs(
            q.gamma_g.gamma - christoffel_closed_form(mat)))),
        "metric_compat_g": float(np.max(np.abs(
            covariant_metric_derivative(mat, q.gamma_g, "g")))),
        "metric_compat_gt": float(np.max(np.abs(
            covariant_metric_derivative(mat, q.gamma_gt, "gt")))),
        "f_closed_form": float(np.max(np.abs(
            q.f.f - fundamental_f_closed_form(mat)))),
        "f_symmetries": f_symmetry_residual(q),
        "theta_closed_form": float(np.max(np.abs(
            q.th.theta - theta_closed_form(mat)))),
        "theta_tilde_raise": float(np.max(np.abs(
            mat.gt_inv @ q.th.theta - q.th.theta_tilde_up))),
        "nabla_q_closed_form": float(np.max(np.abs(
            q.nq - nabla_q_closed_form(mat)))),
        "deformation_dual_path": float(np.max(np.abs(
            q.deformation - (q.gamma_gt.gamma - q.gamma_g.gamma)))),
        "w1": check_w1(q.f, q.th, mat),
        "con_ae": check_con_ae(q.ric_g, q.ric_gt, mat),
        "riemann_symmetries_g": riemann_symmetry_residual(q.riem_g),
        "riemann_symmetries_gt": riemann_symmetry_residual(q.riem_gt),
        "ricci_trace_recompute": float(max(
            abs(q.ric_g.tau - np.einsum("ij,ij->", mat.g_inv, q.ric_g.rho)),
            abs(q.ric_g.tau_star - np.einsum("ij,ij->", mat.gt_inv, q.ric_g.rho)),
        )),
    }
    if rng is not None:
        out["reconstruction_3d"] = reconstruction_residual(q, rng)
    return out


# Gate for each residual key; verify runs fail when any entry exceeds
# its bound.  w1/con_ae bounds come from the caller's tolerances.
RESIDUAL_LIMITS = {
    "gamma_closed_form": DUAL_TOL_FIRST,
    "metric_compat_g": DUAL_TOL_FIRST,
    "metric_compat_gt": DUAL_TOL_FIRST,
    "f_closed_form": DUAL_TOL_FIRST,
    "f_symmetries": 1e-12,
    "theta_closed_form": DUAL_TOL_FIRST,
    "theta_tilde_raise": 1e-12,
    "nabla_q_closed_form": DUAL_TOL_FIRST,
    "deformation_dual_path": DUAL_TOL_SECOND,
    "riemann_symmetries_g": DUAL_TOL_SECOND,
    "riemann_symmetries_gt": DUAL_TOL_SECOND,
    "ricci_trace_recompute": 1e-12,
    "reconstruction_3d": 1e-8,
}
