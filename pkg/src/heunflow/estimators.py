"""scikit-learn style wrappers for batch characteristic-value computation.

Nothing is learned: ``fit`` only validates the hyperparameters, and
``transform`` maps each row of parameters to characteristic values.
This lets the solvers sit inside a Pipeline or be cloned and gridded.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .params import GsweParams, MathieuParams

__all__ = ["MathieuCharacteristic", "GsweCharacteristic"]


class MathieuCharacteristic(TransformerMixin, BaseEstimator):
    """k -> lowest ``count`` characteristic values a of one Mathieu class.

    Parameters
    ----------
    cls : int
        Solution class 1..4 (even π, even 2π, odd π, odd 2π).
    route : {"ince", "gswe", "dche"}
    count : int
    """

    def __init__(self, cls: int = 1, route: str = "ince", count: int = 1):
        self.cls = cls
        self.route = route
        self.count = count

    def fit(self, X, y=None):
        check_array(X)
        if self.cls not in (1, 2, 3, 4):
            raise ValueError("cls must be 1..4")
        if self.route not in ("ince", "gswe", "dche"):
            raise ValueError("route must be ince, gswe or dche")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        from .periodic import mathieu_characteristic_values

        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        if X.shape[1] != 1:
            raise ValueError("X must have one column (k)")
        out = [mathieu_characteristic_values(MathieuParams(k=k), self.cls, self.route, self.count)
               for k in X[:, 0]]
        return np.real_if_close(np.array(out), tol=1e3)


class GsweCharacteristic(TransformerMixin, BaseEstimator):
    """Rows (B1, B2, z0, ω, η) -> the characteristic B3 of set ``set_index``.

    ``guess`` seeds the root search; by default the lowest Hill-matrix
    seed is used.
    """

    def __init__(self, set_index: int = 1, guess=None, tol: float = 1e-13):
        self.set_index = set_index
        self.guess = guess
        self.tol = tol

    def fit(self, X, y=None):
        check_array(X, dtype=None)
        if self.set_index not in (1, 2, 3, 4):
            raise ValueError("set_index must be 1..4")
        self.n_features_in_ = 5
        return self

    def transform(self, X):
        from .gswe import solve_b3

        check_is_fitted(self, "n_features_in_")
        X = np.asarray(X, dtype=complex)
        if X.ndim != 2 or X.shape[1] != 5:
            raise ValueError("X must have columns B1, B2, z0, omega, eta")
        out = [solve_b3(GsweParams(B1=r[0], B2=r[1], B3=0, z0=r[2], omega=r[3], eta=r[4]), self.set_index,
                        guess=self.guess, tol=self.tol) for r in X]
        return np.real_if_close(np.array(out)[:, None], tol=1e3)
