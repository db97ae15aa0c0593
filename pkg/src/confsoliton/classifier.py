"""Decide which of the four model families contains a soliton hypersurface.

The decision follows the support function ``lambda = g~(N, x)`` on the
sample grid:

* ``lambda`` bounded away from zero: the hypersurface must be totally
  umbilical; ``alpha = 0`` gives a hyperplane, otherwise ``x + eps_N
  alpha^-1 N`` is a fixed centre and the hypersurface lies in a
  pseudo-sphere or pseudo-hyperbolic space according to ``eps_N``;
* ``lambda`` vanishing on the whole grid: ``V = V^T`` and the hypersurface
  is a cone with vertex at the origin;
* mixed: the umbilic fit is run on the samples with ``lambda != 0``.

"Everywhere" means "at every sample point" here; the verdict records how
many points were used.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .chart import eval_chart
from .errors import NotApplicable, ZeroRadius
from .hypersurface import frame_from_jets
from .linalg import ambient_dot
from .soliton import soliton_check, split_position, tangential_derivative
from .tolerances import Tolerances

ZERO_RADIUS_TOL = 1e-9


class Family(str, Enum):
    HYPERPLANE = "Hyperplane"
    CONE = "Cone"
    PSEUDO_SPHERE = "PseudoSphere"
    PSEUDO_HYPERBOLIC = "PseudoHyperbolic"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Certificate:
    name: str
    value: float
    threshold: float

    @property
    def passed(self):
        return bool(self.value <= self.threshold)

    def as_dict(self):
        return {"name": self.name, "value": float(self.value), "threshold": float(self.threshold),
                "passed": self.passed}


@dataclass(frozen=True)
class ClassificationVerdict:
    tag: Family
    params: dict = field(default_factory=dict)
    certificates: tuple = ()
    diagnostics: tuple = ()
    samples: int = 0
    soliton: object = field(default=None, repr=False, compare=False)

    @property
    def reason(self):
        return self.diagnostics[0] if self.tag is Family.INDETERMINATE and self.diagnostics else None

    def as_dict(self):
        params = {k: (np.asarray(v).tolist() if isinstance(v, np.ndarray) else v)
                  for k, v in self.params.items()}
        return {
            "tag": self.tag.value,
            "params": params,
            "certificates": [c.as_dict() for c in self.certificates],
            "diagnostics": list(self.diagnostics),
            "samples": self.samples,
        }


def _indeterminate(reason, certificates=(), diagnostics=(), samples=0, soliton=None):
    return ClassificationVerdict(Family.INDETERMINATE, {}, tuple(certificates),
                                 (reason,) + tuple(diagnostics), samples, soliton)


def _align(normals):
    """Flip normals so each has a non-negative Euclidean dot with the first."""
    ref = normals[0]
    return np.array([v if v @ ref >= 0 else -v for v in normals])


def fit_umbilic_geometry(frames, tol=Tolerances()):
    """Hyperplane / pseudo-sphere / pseudo-hyperbolic fit for umbilic samples.

    Does not look at the soliton equation, so it also serves charts that
    are not solitons of the position field.
    """
    frames = list(frames)
    scale = 1.0 + max(float(np.max(np.abs(f.x))) for f in frames)
    umb = []
    for f in frames:
        n = f.n
        dev = f.A - (np.trace(f.A) / n) * np.eye(n)
        umb.append(float(np.max(np.abs(dev))) / max(1.0, float(np.max(np.abs(f.A)))))
    certs = [Certificate("umbilicity", max(umb), tol.certificate)]
    if not certs[0].passed:
        return _indeterminate("NotUmbilic", certs, samples=len(frames))

    alphas = np.array([f.alpha for f in frames])
    eps = {f.eps_N for f in frames}
    if len(eps) != 1:
        return _indeterminate("MixedNormalCausality", certs, samples=len(frames))
    eps_N = eps.pop()

    if np.max(np.abs(alphas)) <= tol.alpha:
        normals = _align(np.array([f.N for f in frames]))
        offsets = np.array([float(ambient_dot(N, f.x, f.ambient)) for N, f in zip(normals, frames)])
        mean_n = normals.mean(axis=0)
        mean_off = float(offsets.mean())
        if mean_off < 0:
            mean_n, mean_off = -mean_n, -mean_off
        certs += [
            Certificate("mean_curvature", float(np.max(np.abs(alphas))), tol.alpha),
            Certificate("normal_spread", float(np.max(np.abs(normals - normals.mean(axis=0)))),
                        tol.certificate),
            Certificate("offset_spread", float(np.max(np.abs(offsets - offsets.mean()))),
                        tol.certificate * scale),
        ]
        if not all(c.passed for c in certs):
            return _indeterminate("HyperplaneFitFailed", certs, samples=len(frames))
        return ClassificationVerdict(
            Family.HYPERPLANE,
            {"normal": mean_n, "offset": mean_off, "eps_N": eps_N},
            tuple(certs), (), len(frames),
        )

    centers = np.array([f.x + f.eps_N / f.alpha * f.N for f in frames])
    center = centers.mean(axis=0)
    curv = float(np.mean(alphas ** 2))
    G = frames[0].ambient
    rho = np.array([float(ambient_dot(f.x - center, f.x - center, G)) for f in frames])
    expected_rho = eps_N / alphas ** 2
    certs += [
        Certificate("alpha_spread", float(np.max(np.abs(alphas ** 2 - curv))) / max(1.0, curv),
                    tol.certificate),
        Certificate("center_spread", float(np.max(np.abs(centers - center))),
                    tol.certificate * scale),
        Certificate("radius_consistency",
                    float(np.max(np.abs(rho - expected_rho))) / max(1.0, float(np.max(np.abs(expected_rho)))),
                    tol.certificate),
    ]
    if not all(c.passed for c in certs):
        return _indeterminate("CenterFitFailed", certs, samples=len(frames))
    if eps_N > 0:
        return ClassificationVerdict(Family.PSEUDO_SPHERE, {"center": center, "curvature": curv},
                                     tuple(certs), (), len(frames))
    return ClassificationVerdict(Family.PSEUDO_HYPERBOLIC, {"center": center, "curvature": -curv},
                                 tuple(certs), (), len(frames))


def radial_derivative(frame):
    """Derivative of ``k = |x|`` along ``e = V^T / k``; equals 1 exactly when ``V = V^T``."""
    x = frame.x
    k = float(np.linalg.norm(x))
    if k <= ZERO_RADIUS_TOL:
        raise ZeroRadius(f"|x| = {k:.3e} at the vertex")
    dk = frame.tangents @ x / k
    t = split_position(frame).vT
    return float((t / k) @ dk)


def _radial_geodesic(frame):
    x = frame.x
    k = float(np.linalg.norm(x))
    X1 = frame.tangents.T
    t = split_position(frame).vT
    dt = tangential_derivative(frame)  # [j, i] = d_j t^i
    dk = frame.tangents @ x / k
    e = t / k
    de = dt / k - np.outer(dk, t) / k ** 2  # [j, i] = d_j e^i
    # d/ds of E = e^i d_i x along e
    acc = np.einsum("j,ji,ai->a", e, de, X1) + np.einsum("j,i,aij->a", e, e, frame.second)
    return float(np.max(np.abs(acc)))


def lambda_threshold(scale, tol=Tolerances()):
    return tol.lambda_rel * (1.0 + scale)


def radial_geodesic_check(chart, point, tol=Tolerances()):
    """Max-norm of the ambient covariant derivative of ``e = V^T/|x|`` along itself.

    Only meaningful where the position vector is tangent (``lambda = 0``).
    """
    jets = eval_chart(chart, point)
    k = float(np.linalg.norm([j.v for j in jets]))
    if k <= ZERO_RADIUS_TOL:
        raise ZeroRadius(f"|x| = {k:.3e} at {tuple(point)}: too close to the vertex")
    frame = frame_from_jets(jets, chart.ambient, point)
    if abs(frame.lam) > lambda_threshold(k, tol):
        raise NotApplicable(f"support function {frame.lam:.3e} is not zero at {tuple(point)}")
    return _radial_geodesic(frame)


def _cone_certificates(points, tol, scale):
    perp = max(abs(d.v_perp_coef) for d in points)
    a_vt = max(float(np.max(np.abs(d.frame.A @ d.vT))) for d in points)
    ek = max(abs(radial_derivative(d.frame) - 1.0) for d in points)
    geo = max(_radial_geodesic(d.frame) for d in points)
    return [
        Certificate("tangent_position", perp, tol.certificate * scale),
        Certificate("shape_kills_position", a_vt, tol.certificate * scale),
        Certificate("radial_unit_speed", ek, tol.certificate),
        Certificate("radial_geodesic", geo, tol.certificate),
    ]


def classify_report(report, tol=Tolerances()):
    """Classification from an existing soliton report."""
    if not report.is_soliton:
        return _indeterminate("NotASoliton", diagnostics=(
            f"max soliton residual {report.max_residual:.3e} ({report.verdict})",), soliton=report)
    points = report.points
    coverage = ()
    if report.excluded:
        total = len(points) + len(report.excluded)
        coverage = (f"Coverage: {len(report.excluded)} of {total} sample points excluded",)
    scale = max(float(np.max(np.abs(d.x))) for d in points)
    thr = lambda_threshold(scale, tol)
    lam = np.array([abs(d.lam) for d in points])

    if lam.min() > thr:
        v = fit_umbilic_geometry([d.frame for d in points], tol)
        return _with(v, coverage, report)

    if lam.max() <= thr:
        certs = _cone_certificates(points, tol, 1.0 + scale)
        if not all(c.passed for c in certs):
            return _indeterminate("ConeCertificateFailed", certs, coverage, len(points), report)
        return ClassificationVerdict(Family.CONE, {"vertex": np.zeros(points[0].x.shape[0])},
                                     tuple(certs), coverage, len(points), report)

    support = [d for d in points if abs(d.lam) > thr]
    v = fit_umbilic_geometry([d.frame for d in support], tol)
    mixed = (f"MixedSupport: {len(points) - len(support)} of {len(points)} samples have "
             f"|lambda| <= {thr:.3e}",)
    if v.tag is Family.HYPERPLANE:
        return _indeterminate("HyperplaneWithVanishingSupport", v.certificates,
                              mixed + coverage, len(points), report)
    return _with(v, mixed + coverage, report)


def _with(v, diagnostics, report):
    return ClassificationVerdict(v.tag, v.params, v.certificates, v.diagnostics + tuple(diagnostics),
                                 v.samples, report)


def classify(chart, grid, tol=Tolerances()):
    """Run the soliton gate and then the family decision on ``grid``."""
    report = soliton_check(chart, grid, soliton_tol=tol.soliton, borderline_tol=tol.borderline,
                           identity_tol=tol.identity, minimal_tol=tol.minimal)
    return classify_report(report, tol)
