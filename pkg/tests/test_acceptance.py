"""Acceptance gate: every exit criterion at its pinned tolerance.

Each criterion prints one PASS/FAIL line (run with ``pytest -s`` to see
them inline).  Criteria 2, 3, 5 and 6 share a single seeded battery of
1000 random (coefficient-spec, point) samples so that "the same sample
set" is literal.
"""

import math

import numpy as np
import pytest

from qmanifold import (CATENOID_SPEC, FLAT_SPEC, christoffel,
                       classification_report, einstein_classify, eval_jet2,
                       fd_oracle, fundamental_f, golden_report, inner,
                       metric_at, nabla_q, orbit, parse, q_apply, ricci,
                       ricci_direction, riemann)
from qmanifold.classify import con_ae_coefficients
from qmanifold.curvature import frame_components
from qmanifold.pipeline import curvature_quantities, residual_suite
from qmanifold.qbasis import angles
from qmanifold.sampling import (sample_basis_vector, sample_parallel_spec,
                                sample_point, sample_spec)
from qmanifold.classify import RicciData

from util import GRAMMAR_CORPUS, random_point

BATTERY_SEED = 20250810
BATTERY_SIZE = 1000
BATTERY_BOX = (-1.5, 1.5)


def criterion(number: int, description: str, passed: bool, detail: str = ""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {description}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert passed, line


@pytest.fixture(scope="module")
def battery():
    """Worst residual per identity over the shared random sample set."""
    rng = np.random.default_rng(BATTERY_SEED)
    worst = {
        "w1": 0.0, "con_ae": 0.0, "reconstruction": 0.0,
        "orbit_norms": 0.0, "g_cos": 0.0, "g_cos2": 0.0,
        "cos_psi_relation": 0.0, "con_r": 0.0,
        "gamma_closed": 0.0, "f_closed": 0.0, "theta_closed": 0.0,
        "nabla_q_closed": 0.0,
        "angles_in_range": True, "con_r_checked": 0,
    }
    for _ in range(BATTERY_SIZE):
        spec = sample_spec(rng)
        point = sample_point(rng, BATTERY_BOX)
        q = curvature_quantities(spec, point)
        res = residual_suite(q, rng)
        worst["w1"] = max(worst["w1"], res["w1"])
        worst["con_ae"] = max(worst["con_ae"], res["con_ae"])
        worst["reconstruction"] = max(worst["reconstruction"],
                                      res["reconstruction_3d"])
        worst["gamma_closed"] = max(worst["gamma_closed"],
                                    res["gamma_closed_form"])
        worst["f_closed"] = max(worst["f_closed"], res["f_closed_form"])
        worst["theta_closed"] = max(worst["theta_closed"],
                                    res["theta_closed_form"])
        worst["nabla_q_closed"] = max(worst["nabla_q_closed"],
                                      res["nabla_q_closed_form"])

        mat = q.mat
        x = sample_basis_vector(rng)
        vecs = orbit(x)
        norms = [inner(mat, v, v) for v in vecs]
        worst["orbit_norms"] = max(worst["orbit_norms"],
                                   max(norms) - min(norms))
        adjacent = [inner(mat, vecs[i], vecs[j])
                    for i, j in ((0, 1), (0, 3), (1, 2), (2, 3))]
        opposite = [inner(mat, vecs[0], vecs[2]), inner(mat, vecs[1], vecs[3])]
        worst["g_cos"] = max(worst["g_cos"],
                             max(adjacent) - min(adjacent),
                             abs(opposite[0] - opposite[1]))
        phi, psi = angles(mat, x)
        worst["angles_in_range"] = (worst["angles_in_range"]
                                    and 0.0 < phi < math.pi / 2 and psi > phi)
        worst["cos_psi_relation"] = max(
            worst["cos_psi_relation"],
            abs(math.cos(psi) - (2 * math.cos(phi) - 1)))
        worst["g_cos2"] = max(
            worst["g_cos2"],
            abs(inner(mat, x, x, "gt") - norms[0] * math.cos(psi)))
        cos_psi = math.cos(psi)
        if abs(cos_psi) > 1e-6:
            c1, c2 = con_ae_coefficients(q.ric_g, q.ric_gt)
            r_g = ricci_direction(q.ric_g, mat, x)
            r_gt = ricci_direction(q.ric_gt, mat, x)
            predicted = r_g / cos_psi + c1 / cos_psi + c2
            worst["con_r"] = max(worst["con_r"], abs(r_gt - predicted))
            worst["con_r_checked"] += 1
    return worst


def test_criterion_1_catenoid_golden_values():
    worst = 0.0
    for u in (0.5, 1.0, 2.0):
        rep = golden_report(u)
        worst = max(worst, rep.max_diff)
    criterion(1, "worked-example closed forms reproduced at u in {0.5, 1, 2} "
                 "within 1e-7", worst < 1e-7, f"max diff {worst:.3e}")


def test_criterion_2_w1_universality(battery):
    catenoid = classification_report(CATENOID_SPEC, (1.0, 0.3, 0.7)).w1_residual
    worst = max(battery["w1"], catenoid)
    criterion(2, "trace-form identity for F holds on 1000 random samples "
                 "and the worked example (residual < 1e-8)",
              worst < 1e-8, f"max residual {worst:.3e}")


def test_criterion_3_two_ricci_relation(battery):
    ok = battery["con_ae"] < 1e-8
    detail = f"max residual {battery['con_ae']:.3e}"
    for u in (0.5, 1.0, 2.0):
        rep = golden_report(u)
        ok = ok and abs(rep.con_ae_coefficient_g) < 1e-9
        ok = ok and abs(rep.con_ae_coefficient_gt) < 1e-9
        ok = ok and rep.rho_tilde_minus_rho_frame_max < 1e-9
    criterion(3, "two-Ricci relation holds on the sample set (< 1e-8); both "
                 "1/8-coefficients vanish and rho~ = rho on the worked example",
              ok, detail)


def test_criterion_4_parallelism_equivalence():
    rng = np.random.default_rng(BATTERY_SEED + 1)
    worst_parallel = 0.0
    for _ in range(100):
        mat = metric_at(sample_parallel_spec(rng), sample_point(rng, BATTERY_BOX))
        gamma_g = christoffel(mat, "g")
        worst_parallel = max(
            worst_parallel,
            float(np.max(np.abs(nabla_q(mat, gamma_g)))),
            float(np.max(np.abs(fundamental_f(mat, gamma_g).f))))
    mat = metric_at(CATENOID_SPEC, (1.0, 0.3, 0.7))
    gamma_g = christoffel(mat, "g")
    witness_nq = float(np.max(np.abs(nabla_q(mat, gamma_g))))
    witness_f = float(np.max(np.abs(fundamental_f(mat, gamma_g).f)))
    passed = worst_parallel < 1e-10 and witness_nq > 1e-2 and witness_f > 1e-2
    criterion(4, "structure tensors parallel exactly on the A(x1,x2)/B(x3) "
                 "family; nonparallel witness on the worked example",
              passed,
              f"parallel max {worst_parallel:.3e}, witness |nabla Q| "
              f"{witness_nq:.3f}, |F| {witness_f:.3f}")


def test_criterion_5_reconstruction_identity(battery):
    criterion(5, "Ricci reconstruction of the curvature tensor matches the "
                 "direct computation (< 1e-8) on 1000 random samples",
              battery["reconstruction"] < 1e-8,
              f"max residual {battery['reconstruction']:.3e}")


def test_criterion_6_orbit_basis_geometry(battery):
    exact = max(battery["orbit_norms"], battery["g_cos"], battery["g_cos2"],
                battery["cos_psi_relation"])
    passed = (exact < 1e-12 and battery["angles_in_range"]
              and battery["con_r"] < 1e-7 and battery["con_r_checked"] > 0)
    criterion(6, "orbit-norm/cosine identities exact to 1e-12, angle ranges, "
                 "and the directional-Ricci relation (< 1e-7) over 1000 samples",
              passed,
              f"max exact-identity residual {exact:.3e}, max quotient-relation "
              f"residual {battery['con_r']:.3e} over {battery['con_r_checked']} "
              f"admissible samples")


def test_criterion_7_einstein_machinery():
    flat = classification_report(FLAT_SPEC, (0.3, -0.2, 0.9))
    ok = flat.einstein.kind == "einstein" and flat.einstein.alpha == 0.0
    ok = ok and flat.fr_residual is not None and flat.fr_residual < 1e-7

    rng = np.random.default_rng(BATTERY_SEED + 2)
    worst_fit = 0.0
    for _ in range(50):
        mat = metric_at(sample_spec(rng), sample_point(rng, BATTERY_BOX))
        alpha, beta = rng.uniform(-2, 2, 2)
        rho = alpha * mat.g + beta * mat.gt
        ric = RicciData(which="g", rho=rho, tau=3 * alpha - beta,
                        tau_star=-alpha + 3 * beta)
        fit = einstein_classify(ric, mat, 1e-7)
        ok = ok and fit.kind in ("einstein", "almost_einstein")
        worst_fit = max(worst_fit, abs(fit.alpha - alpha), abs(fit.beta - beta))
        ok = ok and (3 * ric.tau + ric.tau_star) / 8 == pytest.approx(alpha, abs=1e-8)
        ok = ok and (3 * ric.tau_star + ric.tau) / 8 == pytest.approx(beta, abs=1e-8)
    ok = ok and worst_fit < 1e-8

    generic_everywhere = True
    for u in (0.5, 1.0, 2.0):
        for v, w in ((0.3, 0.7), (2.0, 1.0), (5.0, 4.5)):
            rep = classification_report(CATENOID_SPEC, (u, v, w))
            generic_everywhere = generic_everywhere and rep.einstein.is_generic
    ok = ok and generic_everywhere
    criterion(7, "flat metric classified Einstein(0); (alpha, beta) recovered "
                 "to 1e-8 from constructed Ricci data; worked example generic "
                 "everywhere; Einstein-form curvature matches directly on the "
                 "flat case",
              ok, f"max (alpha, beta) recovery error {worst_fit:.3e}")


def test_criterion_8_derivative_correctness(battery):
    worst_fd = 0.0
    rng = np.random.default_rng(BATTERY_SEED + 3)
    for source in GRAMMAR_CORPUS:
        field = parse(source)
        for _ in range(3):
            point = random_point(rng)
            jet = eval_jet2(field, point)
            fd = fd_oracle(field, point, step=1e-5)
            worst_fd = max(worst_fd, float(np.max(
                np.abs(fd.grad - jet.grad) / (1 + np.abs(jet.grad)))))
            worst_fd = max(worst_fd, float(np.max(
                np.abs(fd.hess - jet.hess) / (1 + np.abs(jet.hess)))))
    closed = max(battery["gamma_closed"], battery["f_closed"],
                 battery["theta_closed"], battery["nabla_q_closed"])
    passed = worst_fd < 1e-6 and closed < 1e-10
    criterion(8, "jets match the finite-difference oracle (step 1e-5, rel "
                 "< 1e-6) on the grammar corpus; connection-level closed "
                 "forms match their defining formulas (< 1e-10)",
              passed, f"max fd error {worst_fd:.3e}, max closed-form "
                      f"residual {closed:.3e}")


def test_criterion_9_theta1_discrepancy_documented():
    ok = True
    details = []
    for u in (0.5, 1.0, 2.0):
        rep = golden_report(u)
        record = rep.theta1
        ok = ok and record.computed == pytest.approx(
            -2.0 / (u * math.cosh(u)), rel=1e-12)
        ok = ok and record.printed == pytest.approx(
            -2.0 * u / math.cosh(u), rel=1e-12)
        ok = ok and len(record.note) > 0 and "only at |u| = 1" in record.note
        if u != 1.0:
            # substituting the printed value violates the trace identity
            # by an order-one amount: the verifier demonstrably catches it
            ok = ok and record.trace_identity_residual_if_printed > 0.1
            details.append(f"u={u:g}: residual "
                           f"{record.trace_identity_residual_if_printed:.3f}")
    criterion(9, "report carries computed frame theta(e1) = -2/(u cosh u) "
                 "plus a note that the published -2u/cosh u fails the trace "
                 "identity (order-one residual away from |u| = 1)",
              ok, "; ".join(details))
