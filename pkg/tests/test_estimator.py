from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qspir import QSPIRRetriever


def test_fit_predict_returns_queried_files():
    X = np.random.default_rng(0).integers(0, 4, size=(5, 6))
    est = QSPIRRetriever(n_servers=4).fit(X)
    np.testing.assert_array_equal(est.predict([1, 3, 5]), X[[0, 2, 4]])
    assert est.score([1, 2, 3, 4, 5]) == 1.0
    assert est.rate_ == Fraction(1, 2)
    assert len(est.transcripts_) == 5


@pytest.mark.parametrize("protocol, backend, rate", [("qspir", "dense", Fraction(1, 2)), ("classical", "frame", Fraction(1, 3))])
def test_backends_and_protocols(protocol, backend, rate):
    X = [[0, 1], [2, 3], [1, 1]]
    est = QSPIRRetriever(n_servers=3, protocol=protocol, backend=backend).fit(X)
    np.testing.assert_array_equal(est.predict(2), [[2, 3]])
    assert est.rate_ == rate


def test_params_and_clone():
    est = QSPIRRetriever(n_servers=5, random_state=3)
    assert est.get_params() == {"n_servers": 5, "protocol": "qspir", "backend": "frame", "random_state": 3}
    copy = clone(est).set_params(n_servers=2)
    assert copy.n_servers == 2 and est.n_servers == 5


def test_deterministic_given_random_state():
    X = np.arange(12).reshape(3, 4) % 4
    a = QSPIRRetriever(random_state=1).fit(X)
    b = QSPIRRetriever(random_state=1).fit(X)
    a.predict([1, 2])
    b.predict([1, 2])
    assert [t.to_json() for t in a.transcripts_] == [t.to_json() for t in b.transcripts_]


def test_validation_errors():
    with pytest.raises(NotFittedError):
        QSPIRRetriever().predict([1])
    with pytest.raises(ValueError):
        QSPIRRetriever().fit([[0, 4], [1, 1]])
    with pytest.raises(ValueError):
        QSPIRRetriever().fit([[0, 1]])
    with pytest.raises(TypeError):
        QSPIRRetriever().fit([[0.5, 1], [1, 1]])
    with pytest.raises(ValueError):
        QSPIRRetriever(n_servers=1).fit([[0], [1]])
    with pytest.raises(ValueError):
        QSPIRRetriever(protocol="qspir3").fit([[0], [1]])
    est = QSPIRRetriever().fit([[0], [1]])
    with pytest.raises(ValueError):
        est.predict([3])
    with pytest.raises(ValueError):
        est.predict([[1]])
