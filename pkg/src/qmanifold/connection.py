"""Levi-Civita connections, the fundamental tensor F, the trace form and
the structure's covariant derivative.

Every component list that has a closed form for the diagonal metric
family is implemented twice: once through the defining general formula
and once through the closed form.  Tests assert the two paths agree,
which catches transcription and index-convention slips in either one.

Index conventions (CONVENTIONS.md): christoffel ``gamma[k, i, j]`` is
the upper index first; ``nabla_q[i, k, j]`` is the derivative index,
then the upper index, then the lower one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .structures import MetricAt, Q_COMPONENTS, P_COMPONENTS, Which


@dataclass(frozen=True)
class Christoffel:
    """Connection coefficients gamma[k, i, j], symmetric in (i, j)."""

    which: Which
    gamma: np.ndarray


@dataclass(frozen=True)
class FundamentalF:
    """All-lower components f[i, j, k] of the covariant derivative of gt."""

    f: np.ndarray


@dataclass(frozen=True)
class ThetaForm:
    """Trace 1-form of F, its P-image, and both with the index raised by g."""

    theta: np.ndarray
    theta_tilde: np.ndarray
    theta_up: np.ndarray
    theta_tilde_up: np.ndarray


def christoffel(mat: MetricAt, which: Which = "g") -> Christoffel:
    """gamma[k,i,j] = (1/2) m^{ka} (d_i m_aj + d_j m_ai - d_a m_ij)."""
    minv = mat.inverse(which)
    dm = mat.d_metric(which)
    t = np.einsum("iaj->aij", dm) + np.einsum("jai->aij", dm) - dm
    return Christoffel(which=which, gamma=0.5 * np.einsum("ka,aij->kij", minv, t))


def christoffel_derivative(mat: MetricAt, which: Which = "g") -> np.ndarray:
    """dgamma[m,k,i,j] = partial_m gamma[k,i,j], exact from the jets."""
    minv = mat.inverse(which)
    dm = mat.d_metric(which)
    ddm = mat.dd_metric(which)
    dminv = -np.einsum("ka,mab,bl->mkl", minv, dm, minv)
    t = np.einsum("iaj->aij", dm) + np.einsum("jai->aij", dm) - dm
    dt = np.einsum("miaj->maij", ddm) + np.einsum("mjai->maij", ddm) - ddm
    return 0.5 * (np.einsum("mka,aij->mkij", dminv, t)
                  + np.einsum("ka,maij->mkij", minv, dt))


def christoffel_closed_form(mat: MetricAt) -> np.ndarray:
    """The eighteen nonzero coefficients of the g-connection, spelled out.

    Dual path to :func:`christoffel` for which="g"; the diagonal metric
    makes every coefficient a ratio of first derivatives of A and B.
    """
    a, da = mat.jet_a.value, mat.jet_a.grad
    b, db = mat.jet_b.value, mat.jet_b.grad
    a1, a2, a3 = da
    b1, b2, b3 = db
    gamma = np.zeros((3, 3, 3))

    def put(k, i, j, value):
        gamma[k, i, j] = gamma[k, j, i] = value

    put(0, 0, 0, a1 / (2 * a))
    put(1, 0, 0, -a2 / (2 * a))
    put(2, 0, 0, -a3 / (2 * b))
    put(0, 0, 1, a2 / (2 * a))
    put(1, 0, 1, a1 / (2 * a))
    put(0, 1, 1, -a1 / (2 * a))
    put(1, 1, 1, a2 / (2 * a))
    put(2, 1, 1, -a3 / (2 * b))
    put(0, 0, 2, a3 / (2 * a))
    put(2, 0, 2, b1 / (2 * b))
    put(1, 1, 2, a3 / (2 * a))
    put(2, 1, 2, b2 / (2 * b))
    put(0, 2, 2, -b1 / (2 * a))
    put(1, 2, 2, -b2 / (2 * a))
    put(2, 2, 2, b3 / (2 * b))
    return gamma


def covariant_metric_derivative(mat: MetricAt, gamma: Christoffel,
                                which: Which) -> np.ndarray:
    """nabla_i m_jk under the given connection; zero for the matching pair."""
    m = mat.metric(which)
    dm = mat.d_metric(which)
    return (dm - np.einsum("aij,ak->ijk", gamma.gamma, m)
            - np.einsum("aik,aj->ijk", gamma.gamma, m))


def fundamental_f(mat: MetricAt, gamma_g: Christoffel) -> FundamentalF:
    """F_ijk as the covariant derivative of gt under the g-connection."""
    return FundamentalF(f=covariant_metric_derivative(mat, gamma_g, "gt"))


def fundamental_f_closed_form(mat: MetricAt) -> np.ndarray:
    """Nonzero components F_113 = F_223 = A_3, F_313 = -B_1, F_323 = -B_2,
    plus the partners forced by the symmetry F(x,y,z) = F(x,z,y)."""
    a3 = mat.jet_a.grad[2]
    b1, b2 = mat.jet_b.grad[0], mat.jet_b.grad[1]
    f = np.zeros((3, 3, 3))
    f[0, 0, 2] = f[0, 2, 0] = a3
    f[1, 1, 2] = f[1, 2, 1] = a3
    f[2, 0, 2] = f[2, 2, 0] = -b1
    f[2, 1, 2] = f[2, 2, 1] = -b2
    return f


def theta(mat: MetricAt, f: FundamentalF) -> ThetaForm:
    """theta_k = g^{ij} F_ijk and the derived variants.

    theta_tilde is the P-image; raising either index with g gives the
    same vectors as raising theta with the inverse associated metric.
    """
    th = np.einsum("ij,ijk->k", mat.g_inv, f.f)
    th_tilde = P_COMPONENTS.T @ th
    return ThetaForm(
        theta=th,
        theta_tilde=th_tilde,
        theta_up=mat.g_inv @ th,
        theta_tilde_up=mat.g_inv @ th_tilde,
    )


def theta_closed_form(mat: MetricAt) -> np.ndarray:
    """theta = (-B_1/B, -B_2/B, 2 A_3/A)."""
    a, a3 = mat.jet_a.value, mat.jet_a.grad[2]
    b, b1, b2 = mat.jet_b.value, mat.jet_b.grad[0], mat.jet_b.grad[1]
    return np.array([-b1 / b, -b2 / b, 2 * a3 / a])


def deformation_tensor(mat: MetricAt, th: ThetaForm) -> np.ndarray:
    """Difference T = tilde-gamma - gamma of the two connections, closed form.

    T[k,i,j] = (1/8) (g_ij (3 theta-tilde^k - theta^k)
                      - gt_ij (3 theta^k - theta-tilde^k)).

    Note the swap of the tilde in the second factor relative to the
    first; with both factors equal the expression fails to reproduce
    christoffel(gt) - christoffel(g) (checked by the dual-path tests).
    """
    up = 3 * th.theta_tilde_up - th.theta_up
    up_p = 3 * th.theta_up - th.theta_tilde_up
    return (np.einsum("ij,k->kij", mat.g, up)
            - np.einsum("ij,k->kij", mat.gt, up_p)) / 8.0


def nabla_q(mat: MetricAt, gamma_g: Christoffel) -> np.ndarray:
    """nabla_q[i,k,j] = Gamma^k_{ia} Q^a_j - Gamma^a_{ij} Q^k_a (Q is constant)."""
    g = gamma_g.gamma
    return (np.einsum("kia,aj->ikj", g, Q_COMPONENTS)
            - np.einsum("aij,ka->ikj", g, Q_COMPONENTS))


def nabla_q_closed_form(mat: MetricAt) -> np.ndarray:
    """The twelve nonzero components of nabla Q for the diagonal family.

    Derived by substituting the closed-form connection into the defining
    formula; each entry is proportional to one of A_3, B_1, B_2, so the
    structure is parallel exactly when those three derivatives vanish.
    """
    a, a3 = mat.jet_a.value, mat.jet_a.grad[2]
    b, b1, b2 = mat.jet_b.value, mat.jet_b.grad[0], mat.jet_b.grad[1]
    nq = np.zeros((3, 3, 3))
    nq[0, 0, 2] = a3 / (2 * a)
    nq[0, 1, 2] = -a3 / (2 * a)
    nq[0, 2, 0] = a3 / (2 * b)
    nq[0, 2, 1] = a3 / (2 * b)
    nq[1, 0, 2] = a3 / (2 * a)
    nq[1, 1, 2] = a3 / (2 * a)
    nq[1, 2, 0] = -a3 / (2 * b)
    nq[1, 2, 1] = a3 / (2 * b)
    nq[2, 0, 2] = -(b1 + b2) / (2 * a)
    nq[2, 1, 2] = (b1 - b2) / (2 * a)
    nq[2, 2, 0] = (b2 - b1) / (2 * b)
    nq[2, 2, 1] = -(b1 + b2) / (2 * b)
    return nq
