import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from aalpha_pm import SpectralMatchingCertifier, check_graphs
from aalpha_pm.graph import complete_graph, extremal_graph, to_graph6


def test_params_roundtrip():
    est = SpectralMatchingCertifier(alpha=0.3, oracle=True)
    assert est.get_params() == {"alpha": 0.3, "oracle": True, "threshold_override": None}
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    est.set_params(alpha=0.5)
    assert est.alpha == 0.5


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SpectralMatchingCertifier().predict([complete_graph(10)])


def test_fit_validates_alpha():
    with pytest.raises(ValueError):
        SpectralMatchingCertifier(alpha=1.5).fit()


def test_predict_and_transform():
    est = SpectralMatchingCertifier(alpha=0).fit()
    X = [complete_graph(10), to_graph6(extremal_graph(10))]
    assert list(est.predict(X)) == ["PM_GUARANTEED", "EXTREMAL_EXCEPTION"]
    t = est.fit_transform(X)
    assert t.shape == (2, 2)
    assert t[0, 0] == pytest.approx(9.0)
    assert t[1, 0] == pytest.approx(t[1, 1], abs=1e-9)
    assert list(est.guarantees(X)) == [True, False]


def test_empty_input():
    est = SpectralMatchingCertifier().fit()
    assert est.transform([]).shape == (0, 2)


def test_oracle_certificates():
    certs = SpectralMatchingCertifier(alpha=0.3, oracle=True).fit().certify([complete_graph(10)])
    assert certs[0].oracle_pm is True


def test_check_graphs_errors():
    with pytest.raises(TypeError, match="single graph"):
        check_graphs(complete_graph(4))
    with pytest.raises(TypeError, match="item 0"):
        check_graphs([np.zeros((2, 2))])
