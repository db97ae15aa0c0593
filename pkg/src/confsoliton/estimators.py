"""scikit-learn style wrappers.

Samples are chart parameter points, one row per point, so a grid from
:func:`confsoliton.chart.make_grid` is a valid ``X``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .chart import ImmersionChart
from .classifier import Family, classify, lambda_threshold
from .errors import POINT_ERRORS
from .soliton import soliton_point
from .tolerances import Tolerances


def _check_chart(chart):
    if not isinstance(chart, ImmersionChart):
        raise TypeError(f"chart must be an ImmersionChart, got {type(chart).__name__}")
    return chart


class HypersurfaceFrameTransformer(TransformerMixin, BaseEstimator):
    """Per-point geometric features of a chart.

    Parameters
    ----------
    chart : ImmersionChart
        The hypersurface to sample.

    Notes
    -----
    Points where the chart is singular or not admissible give a row of NaN.
    """

    feature_names = ("lambda", "alpha", "phi", "residual", "eps_N", "trace_A")

    def __init__(self, chart=None):
        self.chart = chart

    def fit(self, X, y=None):
        chart = _check_chart(self.chart)
        X = check_array(X)
        if X.shape[1] != chart.n:
            raise ValueError(f"X has {X.shape[1]} columns, chart has {chart.n} parameters")
        self.n_features_in_ = chart.n
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        out = np.full((X.shape[0], len(self.feature_names)), np.nan)
        for r, p in enumerate(X):
            try:
                d = soliton_point(self.chart, p, with_curvature=False)
            except POINT_ERRORS:
                continue
            out[r] = (d.lam, d.alpha, d.phi, d.residual, d.eps_N, d.trace_A)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(self.feature_names, dtype=object)


class ConformalSolitonClassifier(BaseEstimator):
    """Decide the model family of a chart from samples of its parameter domain.

    ``fit`` runs the soliton gate and the family decision on ``X``;
    ``predict`` gives the pointwise reading of the same case analysis
    (which family the local data at each row points to).

    Parameters
    ----------
    chart : ImmersionChart
    soliton_tol, borderline_tol, certificate_tol, lambda_rel, alpha_tol : float
        See :class:`confsoliton.tolerances.Tolerances`.

    Attributes
    ----------
    verdict_ : ClassificationVerdict
    family_ : Family
    soliton_report_ : SolitonReport
    phi_ : ndarray of shape (n_used_samples,)
    """

    def __init__(self, chart=None, soliton_tol=1e-8, borderline_tol=1e-4,
                 certificate_tol=1e-8, lambda_rel=1e-7, alpha_tol=1e-8):
        self.chart = chart
        self.soliton_tol = soliton_tol
        self.borderline_tol = borderline_tol
        self.certificate_tol = certificate_tol
        self.lambda_rel = lambda_rel
        self.alpha_tol = alpha_tol

    def _tolerances(self):
        return Tolerances(soliton=self.soliton_tol, borderline=self.borderline_tol,
                          certificate=self.certificate_tol, lambda_rel=self.lambda_rel,
                          alpha=self.alpha_tol)

    def fit(self, X, y=None):
        chart = _check_chart(self.chart)
        X = check_array(X)
        if X.shape[1] != chart.n:
            raise ValueError(f"X has {X.shape[1]} columns, chart has {chart.n} parameters")
        self.n_features_in_ = chart.n
        self.verdict_ = classify(chart, X, self._tolerances())
        self.family_ = self.verdict_.tag
        self.soliton_report_ = self.verdict_.soliton
        self.phi_ = self.soliton_report_.phi
        return self

    def predict(self, X):
        check_is_fitted(self, "verdict_")
        X = check_array(X)
        tol = self._tolerances()
        labels = []
        for p in X:
            try:
                d = soliton_point(self.chart, p, with_curvature=False)
            except POINT_ERRORS:
                labels.append(Family.INDETERMINATE.value)
                continue
            labels.append(_local_family(d, tol).value)
        return np.array(labels, dtype=object)


def _local_family(d, tol):
    if d.residual > tol.soliton:
        return Family.INDETERMINATE
    if abs(d.lam) <= lambda_threshold(float(np.max(np.abs(d.x))), tol):
        return Family.CONE
    A = d.frame.A
    n = A.shape[0]
    dev = np.max(np.abs(A - np.trace(A) / n * np.eye(n))) / max(1.0, np.max(np.abs(A)))
    if dev > tol.certificate:
        return Family.INDETERMINATE
    if abs(d.alpha) <= tol.alpha:
        return Family.HYPERPLANE
    return Family.PSEUDO_SPHERE if d.eps_N > 0 else Family.PSEUDO_HYPERBOLIC
