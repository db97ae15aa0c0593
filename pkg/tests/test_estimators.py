import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from confsoliton import ConformalSolitonClassifier, HypersurfaceFrameTransformer
from confsoliton.chart import make_grid
from confsoliton.classifier import Family
from confsoliton.corpus import builtin_chart


def test_params_round_trip_and_clone():
    chart = builtin_chart("cone")
    est = ConformalSolitonClassifier(chart=chart, soliton_tol=1e-7)
    params = est.get_params()
    assert params["chart"] is chart and params["soliton_tol"] == 1e-7
    twin = clone(est)
    assert twin is not est and twin.get_params()["soliton_tol"] == 1e-7
    est.set_params(alpha_tol=1e-6)
    assert est.alpha_tol == 1e-6


@pytest.mark.parametrize("name,family", [("sphere", Family.PSEUDO_SPHERE), ("cone", Family.CONE),
                                         ("hyperbolic", Family.PSEUDO_HYPERBOLIC),
                                         ("plane", Family.HYPERPLANE),
                                         ("paraboloid", Family.INDETERMINATE)])
def test_fit_matches_classify(name, family):
    chart = builtin_chart(name)
    X = make_grid(chart, 5)
    est = ConformalSolitonClassifier(chart=chart).fit(X)
    assert est.family_ is family
    assert est.n_features_in_ == 2 and est.phi_.shape == (25,)
    labels = est.predict(X)
    assert labels.shape == (25,)
    if name == "paraboloid":
        # the vertex sits at the origin, where the local data reads as a cone
        at_origin = np.all(np.abs(X) < 1e-12, axis=1)
        assert set(labels[at_origin]) == {Family.CONE.value}
        labels = labels[~at_origin]
    assert set(labels) == {family.value}


def test_predict_before_fit():
    est = ConformalSolitonClassifier(chart=builtin_chart("cone"))
    with pytest.raises(NotFittedError):
        est.predict([[0.1, 1.0]])


def test_bad_inputs():
    with pytest.raises(TypeError):
        ConformalSolitonClassifier().fit([[0.1, 0.2]])
    with pytest.raises(ValueError):
        ConformalSolitonClassifier(chart=builtin_chart("cone")).fit([[0.1, 0.2, 0.3]])


def test_transformer_features():
    chart = builtin_chart("cone")
    X = make_grid(chart, 3)
    t = HypersurfaceFrameTransformer(chart=chart)
    F = t.fit_transform(X)
    assert F.shape == (9, 6)
    names = list(t.get_feature_names_out())
    assert np.allclose(F[:, names.index("phi")], 1.0, atol=1e-10)
    assert np.max(np.abs(F[:, names.index("lambda")])) <= 1e-10


def test_transformer_nan_rows():
    chart = builtin_chart("cone")
    t = HypersurfaceFrameTransformer(chart=chart).fit(make_grid(chart, 3))
    F = t.transform([[1.0, 0.0], [1.0, 1.0]])
    assert np.all(np.isnan(F[0])) and not np.any(np.isnan(F[1]))
    with pytest.raises(ValueError):
        t.transform([[1.0]])


def test_pipeline_composition():
    chart = builtin_chart("sphere")
    pipe = Pipeline([("frames", HypersurfaceFrameTransformer(chart=chart))])
    F = pipe.fit_transform(make_grid(chart, 3))
    assert np.allclose(F[:, 0], 1.0, atol=1e-12)
