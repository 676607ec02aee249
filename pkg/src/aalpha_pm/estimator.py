"""scikit-learn style front end for the A_alpha perfect-matching certifier.

>>> from aalpha_pm import SpectralMatchingCertifier, extremal_graph, complete_graph
>>> clf = SpectralMatchingCertifier(alpha=0.3).fit([complete_graph(10)])
>>> list(clf.predict([complete_graph(10), extremal_graph(10)]))
['PM_GUARANTEED', 'EXTREMAL_EXCEPTION']
"""

from __future__ import annotations

from numbers import Real

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .graph import Graph, parse_graph6
from .spectra import check_alpha
from .verifier import Certificate, Verdict, certify

__all__ = ["SpectralMatchingCertifier", "check_graphs"]


def check_graphs(X) -> list[Graph]:
    """Coerce a sequence of graphs or graph6 strings/bytes to a list of :class:`Graph`."""
    if isinstance(X, (Graph, str, bytes)):
        raise TypeError("expected a sequence of graphs, got a single graph; wrap it in a list")
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected an iterable of graphs, got {type(X).__name__}") from None
    out = []
    for i, item in enumerate(items):
        if isinstance(item, Graph):
            out.append(item)
        elif isinstance(item, (str, bytes)):
            out.append(parse_graph6(item))
        else:
            raise TypeError(f"item {i} is {type(item).__name__}, not a Graph or graph6 string")
    return out


class SpectralMatchingCertifier(TransformerMixin, BaseEstimator):
    """Certify perfect matchings from the A_alpha spectral radius.

    The certifier is stateless; ``fit`` only validates parameters so that the
    object can sit inside pipelines and grid searches.

    Parameters
    ----------
    alpha : float or Fraction in [0, 1)
    oracle : bool
        Also record an exact perfect-matching check in each certificate.
    threshold_override : float or None
        Replace the cubic threshold by a fixed value (strict comparison).
    """

    def __init__(self, alpha: Real = 0.0, oracle: bool = False, threshold_override: float | None = None):
        self.alpha = alpha
        self.oracle = oracle
        self.threshold_override = threshold_override

    def fit(self, X=None, y=None):
        self.alpha_ = check_alpha(self.alpha)
        if X is not None:
            check_graphs(X)
        return self

    def _check_fitted(self):
        if not hasattr(self, "alpha_"):
            raise NotFittedError("call fit before using this SpectralMatchingCertifier")

    def certify(self, X) -> list[Certificate]:
        self._check_fitted()
        return [certify(g, self.alpha, self.oracle, self.threshold_override) for g in check_graphs(X)]

    def transform(self, X) -> np.ndarray:
        """Columns ``[rho_alpha, threshold]`` per graph."""
        return np.array([[c.rho, c.threshold] for c in self.certify(X)]).reshape(-1, 2)

    def predict(self, X) -> np.ndarray:
        """Verdict names per graph."""
        return np.array([c.verdict.value for c in self.certify(X)], dtype=object)

    def guarantees(self, X) -> np.ndarray:
        """Boolean mask of graphs for which a perfect matching is certified."""
        return self.predict(X) == Verdict.PM_GUARANTEED.value
