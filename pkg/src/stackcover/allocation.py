"""Conversion between resource-assignment matrices and protection marginals.

Rows are targets, columns are resources. Each column is a distribution of one
resource over the targets, and the marginal of target ``j`` is the row mean.
"""

import numpy as np

from ._validation import SIMPLEX_TOL, _freeze, check_assignment, check_strategy
from .exceptions import InvalidMarginals, ValidationError

_EPS = 1e-12


def marginals_from_assignment(matrix):
    """Row means of a column-stochastic assignment matrix."""
    arr = check_assignment(matrix)
    m = arr.shape[1]
    return _freeze(arr.sum(axis=1) / m)


def assignment_from_marginals(defence, resource_count):
    """Realize protection marginals as a concrete n x m assignment matrix.

    Northwest-corner fill: target ``j`` demands ``m * D_j`` units, every
    resource supplies one unit. Walk targets and resources in index order,
    moving ``min(remaining demand, remaining capacity)`` at each step. The
    result has at most ``n + m - 1`` nonzeros and is deterministic.
    """
    if isinstance(resource_count, bool) or not isinstance(resource_count, (int, np.integer)):
        raise InvalidMarginals(f"resource_count: expected an integer, got {resource_count!r}")
    if resource_count < 1:
        raise InvalidMarginals(f"resource_count: must be >= 1, got {resource_count}")
    try:
        d = check_strategy(defence, name="defence")
    except ValidationError as exc:
        raise InvalidMarginals(str(exc)) from None

    n, m = d.shape[0], int(resource_count)
    demand = d * m
    capacity = np.ones(m)
    out = np.zeros((n, m))
    i = k = 0
    while i < n and k < m:
        amount = min(demand[i], capacity[k])
        out[i, k] += amount
        demand[i] -= amount
        capacity[k] -= amount
        if demand[i] <= _EPS:
            i += 1
        if capacity[k] <= _EPS:
            k += 1
    # float leftovers at the tail end are below SIMPLEX_TOL by construction
    assert np.all(np.abs(out.sum(axis=0) - 1.0) <= SIMPLEX_TOL)
    return _freeze(out)
