"""Conformal solitons of the position field on pseudo-Riemannian hypersurfaces.

Compute the extrinsic geometry of a parametric hypersurface in
pseudo-Euclidean space with exact third-order jets, certify the soliton
identities for the tangential position field, and decide whether the
hypersurface lies in a hyperplane, a cone, a pseudo-sphere or a
pseudo-hyperbolic space.
"""

__version__ = "0.1.0"

from .chart import ImmersionChart, eval_chart, make_grid  # noqa: E402
from .classifier import (  # noqa: E402
    ClassificationVerdict,
    Family,
    classify,
    fit_umbilic_geometry,
    radial_geodesic_check,
)
from .corpus import BUILTINS, builtin_chart  # noqa: E402
from .expr import parse, to_string  # noqa: E402
from .hypersurface import curvature_residuals, frame_at, shape_operator_type  # noqa: E402
from .jet import Jet3, eval_jet3  # noqa: E402
from .linalg import (  # noqa: E402
    AmbientMetric,
    ShapeType,
    ambient_dot,
    eigen_structure,
    generalized_cross,
    normalize_normal,
)
from .soliton import (  # noqa: E402
    SolitonVerdict,
    lie_derivative_direct,
    lie_derivative_via_shape,
    soliton_check,
    split_position,
)
from .tolerances import Tolerances  # noqa: E402

_ESTIMATORS = ("ConformalSolitonClassifier", "HypersurfaceFrameTransformer")


def __getattr__(name):
    # scikit-learn is slow to import; load the estimator facade on first use
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
