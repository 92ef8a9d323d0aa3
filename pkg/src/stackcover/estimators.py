"""scikit-learn style wrappers.

``fit`` takes a scenario (a :class:`~stackcover.model.Scenario` or the
equivalent mapping) in place of a training matrix; everything learned from it
is stored on trailing-underscore attributes so ``get_params``/``set_params``,
``clone`` and ``check_is_fitted`` behave as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .allocation import assignment_from_marginals, marginals_from_assignment
from .exceptions import DimensionMismatch
from .induction import delta_forms, eliminate, solve
from .model import validate_scenario
from .oracle import DEFAULT_MAX_POINTS, stackelberg_grid


def _attack_rows(X, n):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != n:
        raise DimensionMismatch(f"attack: expected {n} columns, got {X.shape[1]}")
    return X


class BackwardInductionDefender(BaseEstimator):
    """Leader's backward-induction marginals as a function of the attack vector.

    Parameters
    ----------
    pivot, reference : int or None
        0-based indices of the target eliminated through the simplex
        constraint and of the free marginal. ``None`` means last and first.
    zero_tolerance : float
        ``|delta1|`` at or below this is treated as zero.
    """

    def __init__(self, pivot=None, reference=None, zero_tolerance=1e-9):
        self.pivot = pivot
        self.reference = reference
        self.zero_tolerance = zero_tolerance

    def fit(self, X, y=None):
        scenario = validate_scenario(X)
        n = scenario.n_targets
        self.pivot_ = n - 1 if self.pivot is None else self.pivot
        self.reference_ = 0 if self.reference is None else self.reference
        self.maps_ = eliminate(scenario, self.pivot_, self.reference_)
        self.delta1_, self.delta2_ = delta_forms(scenario, self.pivot_, self.reference_)
        self.feasible_interval_ = self.maps_.feasible_interval()
        self.scenario_ = scenario
        self.n_features_in_ = n
        return self

    def decision_function(self, X):
        """``delta1(A)`` per attack row; its sign selects the solution case."""
        check_is_fitted(self)
        return self.delta1_(_attack_rows(X, self.n_features_in_))

    def solve(self, attack):
        check_is_fitted(self)
        return solve(self.scenario_, attack, self.pivot_, self.reference_, self.zero_tolerance)

    def predict(self, X):
        """Protection marginals, one row per attack row."""
        check_is_fitted(self)
        rows = _attack_rows(X, self.n_features_in_)
        return np.vstack([self.solve(a).defence for a in rows])


class GridStackelbergOracle(BaseEstimator):
    """Brute-force leader optimum over a simplex grid of defence vectors."""

    def __init__(self, resolution=0.02, tie_break="favor_leader",
                 max_points=DEFAULT_MAX_POINTS, n_jobs=1):
        self.resolution = resolution
        self.tie_break = tie_break
        self.max_points = max_points
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        scenario = validate_scenario(X)
        self.result_ = stackelberg_grid(
            scenario, self.resolution, tie_break=self.tie_break,
            max_points=self.max_points, n_jobs=self.n_jobs,
        )
        self.defence_ = self.result_.defence
        self.leader_payoff_ = self.result_.leader_payoff
        self.follower_payoff_ = self.result_.follower_payoff
        self.n_features_in_ = scenario.n_targets
        return self


class MarginalTransformer(TransformerMixin, BaseEstimator):
    """Assignment matrices to protection marginals and back.

    ``transform`` maps a stack of n x m column-stochastic matrices to their
    row means; ``inverse_transform`` realizes marginals with the
    northwest-corner fill over ``resource_count`` resources.
    """

    def __init__(self, resource_count=None):
        self.resource_count = resource_count

    def fit(self, X=None, y=None):
        if X is not None:
            X = np.asarray(X, dtype=float)
            self.resource_count_ = X.shape[-1]
        else:
            self.resource_count_ = self.resource_count
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            return marginals_from_assignment(X)[None, :]
        return np.vstack([marginals_from_assignment(M) for M in X])

    def inverse_transform(self, X):
        m = self.resource_count if self.resource_count is not None else getattr(
            self, "resource_count_", None)
        if m is None:
            raise ValueError("resource_count is not set; pass it or fit on matrices first")
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        return np.stack([assignment_from_marginals(d, m) for d in X])
