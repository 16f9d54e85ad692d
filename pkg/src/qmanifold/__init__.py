"""Curvature and identity verification for 3-dimensional diagonal metrics
g = diag(A, A, B) carrying the fourth-root structure Q: (x1,x2,x3) ->
(-x2, x1, x3), its square P = Q^2 and the associated indefinite metric
gt = diag(-A, -A, B)."""

__version__ = "0.1.0"

from .errors import (DegenerateParameterError, DegeneratePlaneError,
                     DegenerateVectorError, DomainError, ExprSyntaxError,
                     NonFiniteError, NotPositiveDefiniteError,
                     NullDirectionError, QManifoldError,
                     UnknownIdentifierError)
from .expr import Jet2, ScalarField, eval_jet2, eval_value, fd_oracle, parse
from .structures import (FLAT_SPEC, MetricAt, MetricSpec, P_COMPONENTS,
                         Q_COMPONENTS, inner, metric_at, q_apply, q_matrix)
from .connection import (Christoffel, FundamentalF, ThetaForm, christoffel,
                         christoffel_closed_form, deformation_tensor,
                         fundamental_f, fundamental_f_closed_form, nabla_q,
                         nabla_q_closed_form, theta, theta_closed_form)
from .curvature import (RicciData, Riemann4, almost_einstein_r,
                        frame_components, pi_tensors, reconstruct_from_ricci,
                        ricci, riemann, riemann_apply)
from .classify import (ClassificationReport, EinsteinClassification,
                       check_con_ae, check_einstein_scalar_relation, check_w1,
                       classification_report, con_ae_coefficients,
                       einstein_classify, is_locally_product)
from .qbasis import (QBasisReport, angles, induces_q_basis, orbit,
                     q_basis_report, ricci_direction, sectional)
from .catenoid import (CATENOID_SPEC, CatenoidReport, commutator_check,
                       embedding, golden_report, slice_samples)
from .pipeline import CurvatureQuantities, curvature_quantities, residual_suite
from .manifest import Manifest, Tolerances, load_manifest, parse_manifest, to_json

__all__ = [name for name in dir() if not name.startswith("_")]
