import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from heunflow import gswe, periodic
from heunflow.estimators import GsweCharacteristic, MathieuCharacteristic
from heunflow.params import GsweParams


def test_mathieu_transform_matches_hill_matrix():
    est = MathieuCharacteristic(cls=2, count=2).fit([[1.0]])
    out = est.transform([[0.5], [1.0]])
    assert out.shape == (2, 2)
    for row, k in zip(out, (0.5, 1.0)):
        assert np.max(np.abs(row - periodic.hill_oracle(k, 2, 2))) < 1e-8


def test_mathieu_clone_and_params():
    est = MathieuCharacteristic(cls=3, route="gswe")
    c = clone(est)
    assert c.get_params() == {"cls": 3, "route": "gswe", "count": 1}


@pytest.mark.parametrize("kw", [{"cls": 5}, {"route": "x"}])
def test_mathieu_rejects_bad_hyperparameters(kw):
    with pytest.raises(ValueError):
        MathieuCharacteristic(**kw).fit([[1.0]])


def test_transform_before_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        MathieuCharacteristic().transform([[1.0]])


def test_gswe_transform_in_pipeline():
    X = np.array([[-0.5, 1.3, 1.0, 0.7, 0.4], [-0.4, 1.2, 1.0, 0.6, 0.3]])
    out = make_pipeline(GsweCharacteristic(set_index=1)).fit(X).transform(X)
    for row, r in zip(out, X):
        ref = gswe.solve_b3(GsweParams(B1=r[0], B2=r[1], B3=0, z0=r[2], omega=r[3], eta=r[4]), 1)
        assert abs(row[0] - ref) < 1e-12


def test_gswe_shape_check():
    est = GsweCharacteristic().fit(np.zeros((1, 5)))
    with pytest.raises(ValueError):
        est.transform(np.zeros((1, 4)))
