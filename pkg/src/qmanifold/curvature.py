"""Riemann and Ricci curvature for both metrics, and the rank-one
reconstruction identities special to dimension three.

Sign conventions follow the source definitions R(x,y)z = [nabla_x,
nabla_y]z - nabla_{[x,y]}z, R(x,y,z,t) = m(R(x,y)z, t) and rho(y,z) =
m^{ij} R(e_i, y, z, e_j); with these choices the worked catenoid values
(positive R_1212 in the orthonormal frame, tau = -2/cosh^4 u) come out
exactly.  The all-lower storage is ``r[i, j, s, t]`` = R(d_i, d_j, d_s,
d_t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import christoffel, christoffel_derivative
from .structures import MetricAt, Which


@dataclass(frozen=True)
class Riemann4:
    """All-lower curvature components of the chosen metric."""

    which: Which
    r: np.ndarray


@dataclass(frozen=True)
class RicciData:
    """Ricci tensor plus its two traces.

    ``tau`` is the trace with the matching inverse metric, ``tau_star``
    the cross trace with the other one (tau* for which="g", the tilde
    starred trace for which="gt").
    """

    which: Which
    rho: np.ndarray
    tau: float
    tau_star: float


def riemann(mat: MetricAt, which: Which = "g") -> Riemann4:
    """Curvature from the coordinate formula, lowered with the same metric."""
    gamma = christoffel(mat, which).gamma
    dgamma = christoffel_derivative(mat, which)
    rup = (np.einsum("ikjs->kijs", dgamma) - np.einsum("jkis->kijs", dgamma)
           + np.einsum("kia,ajs->kijs", gamma, gamma)
           - np.einsum("kja,ais->kijs", gamma, gamma))
    return Riemann4(which=which, r=np.einsum("kijs,kt->ijst", rup, mat.metric(which)))


def ricci(riem: Riemann4, mat: MetricAt) -> RicciData:
    """First-last contraction of the curvature with the matching metric."""
    minv = mat.inverse(riem.which)
    other_inv = mat.inverse("gt" if riem.which == "g" else "g")
    rho = np.einsum("ij,iyzj->yz", minv, riem.r)
    return RicciData(
        which=riem.which,
        rho=rho,
        tau=float(np.einsum("ij,ij->", minv, rho)),
        tau_star=float(np.einsum("ij,ij->", other_inv, rho)),
    )


def pi_tensors(mat: MetricAt, x, y, z, u) -> tuple[float, float]:
    """The two curvature-like products built from g and gt:

    pi1 = g(y,z) g(x,u) - g(x,z) g(y,u)
    pi2 = g(y,z) gt(x,u) + g(x,u) gt(y,z) - g(x,z) gt(y,u) - g(y,u) gt(x,z)
    """
    x, y, z, u = (np.asarray(v, dtype=float) for v in (x, y, z, u))
    g, gt = mat.g, mat.gt
    pi1 = (y @ g @ z) * (x @ g @ u) - (x @ g @ z) * (y @ g @ u)
    pi2 = ((y @ g @ z) * (x @ gt @ u) + (x @ g @ u) * (y @ gt @ z)
           - (x @ g @ z) * (y @ gt @ u) - (y @ g @ u) * (x @ gt @ z))
    return float(pi1), float(pi2)


def riemann_apply(riem: Riemann4, x, y, z, u) -> float:
    """R(x, y, z, u) for arbitrary vectors."""
    return float(np.einsum("ijst,i,j,s,t->", riem.r, x, y, z, u))


def reconstruct_from_ricci(ric: RicciData, mat: MetricAt, x, y, z, u) -> float:
    """Rebuild R(x,y,z,u) from the Ricci tensor, valid in dimension three:

    -g(x,z) rho(y,u) - g(y,u) rho(x,z) + g(y,z) rho(x,u) + g(x,u) rho(y,z)
    + (tau/2) (g(x,z) g(y,u) - g(y,z) g(x,u))

    with g the metric the Ricci data was computed from.
    """
    x, y, z, u = (np.asarray(v, dtype=float) for v in (x, y, z, u))
    m = mat.metric(ric.which)
    rho = ric.rho
    return float(
        -(x @ m @ z) * (y @ rho @ u) - (y @ m @ u) * (x @ rho @ z)
        + (y @ m @ z) * (x @ rho @ u) + (x @ m @ u) * (y @ rho @ z)
        + 0.5 * ric.tau * ((x @ m @ z) * (y @ m @ u) - (y @ m @ z) * (x @ m @ u))
    )


def almost_einstein_r(tau: float, tau_star: float, mat: MetricAt,
                      x, y, z, u) -> float:
    """Curvature predicted when rho has the almost-Einstein shape:

    R = ((tau + tau*)/4) pi1 + ((3 tau* + tau)/8) pi2.

    The caller decides applicability; away from almost-Einstein points
    this is just a tensor, not the curvature.
    """
    pi1, pi2 = pi_tensors(mat, x, y, z, u)
    return (tau + tau_star) / 4.0 * pi1 + (3.0 * tau_star + tau) / 8.0 * pi2


def frame_components(tensor: np.ndarray, scales) -> np.ndarray:
    """Rescale an all-lower tensor into the orthonormal-frame basis.

    Each index i picks up the factor scales[i]; works for any rank.
    """
    out = np.asarray(tensor, dtype=float).copy()
    s = np.asarray(scales, dtype=float)
    for axis in range(out.ndim):
        shape = [1] * out.ndim
        shape[axis] = len(s)
        out = out * s.reshape(shape)
    return out
