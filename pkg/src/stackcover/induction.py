"""Backward-induction solver for the leader's protection marginals.

The attacker's first-order conditions make it indifferent between every
non-pivot target ``j`` and a reference target ``r``::

    D_j * omega_attacker_j - reward_attacker_j = D_r * omega_attacker_r - reward_attacker_r

so every marginal is an affine function of the free marginal ``t = D_r``,
with the pivot ``p`` absorbing the simplex constraint. Substituting those maps
into the leader payoff gives ``t * delta1(A) + delta2(A)``, which is linear in
``t``; the sign of ``delta1`` picks the end of the feasible interval.
"""

from dataclasses import dataclass
import math

import numpy as np

from ._validation import _freeze, check_coverage, check_index, check_strategy
from .exceptions import InfeasibleIndifference, PivotEqualsReference, ValidationError
from .model import AttackLinearForm, follower_payoff_form, leader_payoff_form, omega

DELTA1_POSITIVE = "delta1_positive"
DELTA1_NEGATIVE = "delta1_negative"
DELTA1_ZERO = "delta1_zero"


@dataclass(frozen=True)
class EliminationMaps:
    """Affine maps ``D_j(t) = slope_j * t + intercept_j`` over the free marginal.

    Built by :func:`eliminate`, but any coefficients may be supplied, e.g. to
    replay a published table whose maps do not satisfy ``sum(D) == 1``.
    """

    pivot: int
    reference: int
    slope: np.ndarray
    intercept: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "slope", _freeze(self.slope))
        object.__setattr__(self, "intercept", _freeze(self.intercept))
        if self.slope.shape != self.intercept.shape or self.slope.ndim != 1:
            raise ValidationError("slope and intercept must be 1-d vectors of equal length")

    @property
    def n_targets(self):
        return self.slope.shape[0]

    def assemble(self, t):
        """Marginal vector(s) at free value(s) ``t``; a vector of t gives one row each."""
        t = np.asarray(t, dtype=float)
        return np.multiply.outer(t, self.slope) + self.intercept

    def feasible_interval(self):
        """Return ``(L, U)``: the set of ``t`` keeping every marginal in [0, 1].

        ``L > U`` means the set is empty.
        """
        lo, hi = -math.inf, math.inf
        for s, b in zip(self.slope, self.intercept):
            if s == 0.0:
                if b < 0.0 or b > 1.0:
                    return math.inf, -math.inf
                continue
            a0, a1 = (0.0 - b) / s, (1.0 - b) / s
            lo = max(lo, min(a0, a1))
            hi = min(hi, max(a0, a1))
        return lo, hi


@dataclass(frozen=True)
class InductionSolution:
    case_label: str
    delta1_value: float
    delta2_value: float
    free_marginal_value: float
    defence: np.ndarray
    feasible_interval: tuple
    leader_form: AttackLinearForm
    follower_form: AttackLinearForm
    leader_payoff: float
    follower_payoff: float
    pivot: int
    reference: int
    # set when delta1 < 0 but t = 0 is infeasible and t was moved up to L
    clamped: bool = False


def _check_pair(n, pivot, reference):
    p = check_index(pivot, n, name="pivot")
    r = check_index(reference, n, name="reference")
    if p == r:
        raise PivotEqualsReference(f"pivot and reference must differ (both {p})")
    return p, r


def eliminate(scenario, pivot, reference):
    """Express every marginal as an affine function of the reference marginal."""
    n = scenario.n_targets
    p, r = _check_pair(n, pivot, reference)
    om_r = omega(scenario).omega_attacker
    reward = scenario.reward_attacker

    slope = om_r[r] / om_r
    intercept = (reward - reward[r]) / om_r
    slope[r], intercept[r] = 1.0, 0.0
    others = np.arange(n) != p
    slope[p] = 0.0
    intercept[p] = 0.0
    slope[p] = -slope[others].sum()
    intercept[p] = 1.0 - intercept[others].sum()
    return EliminationMaps(p, r, slope, intercept)


def delta_forms(scenario, pivot, reference):
    """Return ``(delta1, delta2)`` with leader payoff ``= D_r * delta1(A) + delta2(A)``.

    Written out term by term: reference and pivot contribute directly, and
    each remaining target ``j`` contributes through its indifference map
    weighted by ``omega_defender_j * A_j - omega_defender_p * A_p``.
    """
    n = scenario.n_targets
    p, r = _check_pair(n, pivot, reference)
    om = omega(scenario)
    ob, orr = om.omega_defender, om.omega_attacker
    reward = scenario.reward_attacker

    d1 = np.zeros(n)
    d2 = -scenario.cost_defender.copy()
    d1[r] += ob[r]
    d1[p] -= ob[p]
    d2[p] += ob[p]
    for j in range(n):
        if j in (r, p):
            continue
        ratio = orr[r] / orr[j]
        shift = (reward[j] - reward[r]) / orr[j]
        # term * (ob_j A_j - ob_p A_p)
        d1[j] += ratio * ob[j]
        d1[p] -= ratio * ob[p]
        d2[j] += shift * ob[j]
        d2[p] -= shift * ob[p]
    return AttackLinearForm(d1), AttackLinearForm(d2)


def solve(scenario, attack, pivot, reference, zero_tolerance=1e-9):
    """Leader's backward-induction protection marginals for an observed attack.

    Raises InfeasibleIndifference when no ``t`` keeps every marginal in [0, 1].
    """
    if not zero_tolerance >= 0:
        raise ValidationError(f"zero_tolerance: must be >= 0, got {zero_tolerance}")
    a = check_strategy(attack, scenario.n_targets, name="attack")
    maps = eliminate(scenario, pivot, reference)
    delta1, delta2 = delta_forms(scenario, pivot, reference)
    lo, hi = maps.feasible_interval()
    if lo > hi:
        raise InfeasibleIndifference(
            f"no marginals satisfy attacker indifference within [0, 1] "
            f"(pivot {maps.pivot + 1}, reference {maps.reference + 1}); interval [{lo:.6g}, {hi:.6g}]"
        )

    d1_val = float(delta1(a))
    d2_val = float(delta2(a))
    clamped = False
    if d1_val > zero_tolerance:
        case, t = DELTA1_POSITIVE, hi
    elif d1_val < -zero_tolerance:
        case = DELTA1_NEGATIVE
        if lo <= 0.0 <= hi:
            t = 0.0
        else:
            t, clamped = lo, True
    else:
        case, t = DELTA1_ZERO, 0.5 * (lo + hi)

    d = maps.assemble(t)
    # endpoint arithmetic can land a hair outside the box
    d = np.clip(d, 0.0, 1.0)
    d = check_strategy(d, name="assembled defence")
    lf = leader_payoff_form(d, scenario)
    ff = follower_payoff_form(d, scenario)
    return InductionSolution(
        case_label=case,
        delta1_value=d1_val,
        delta2_value=d2_val,
        free_marginal_value=float(t),
        defence=d,
        feasible_interval=(float(lo), float(hi)),
        leader_form=lf,
        follower_form=ff,
        leader_payoff=float(lf(a)),
        follower_payoff=float(ff(a)),
        pivot=maps.pivot,
        reference=maps.reference,
        clamped=clamped,
    )


def scan_max_free_marginal(maps, step, tol=1e-12):
    """Largest multiple of ``step`` in [0, 1] at which all assembled marginals lie in [0, 1].

    A discrete counterpart of the upper end of :meth:`EliminationMaps.feasible_interval`,
    and usable with hand-entered map coefficients.
    """
    if not step > 0:
        raise ValidationError(f"step: must be > 0, got {step}")
    k = int(math.floor(1.0 / step + 1e-9))
    grid = np.arange(k + 1) * step
    d = maps.assemble(grid)
    ok = np.all((d >= -tol) & (d <= 1.0 + tol), axis=1)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        raise InfeasibleIndifference(f"no grid point with step {step} keeps marginals in [0, 1]")
    return float(grid[hits[-1]])


def full_indifference_residuals(defence, scenario, pivot):
    """Signed residuals of the attacker indifference equations against the pivot.

    Entry ``j`` (pivot skipped) is
    ``(D_p * om_p - reward_p) - (D_j * om_j - reward_j)``; zero means the
    attacker values target ``j`` and the pivot equally.
    """
    n = scenario.n_targets
    d = check_coverage(defence, n, name="defence")
    p = check_index(pivot, n, name="pivot")
    g = d * omega(scenario).omega_attacker - scenario.reward_attacker
    res = g[p] - g
    return _freeze(np.delete(res, p))


def indifference_spread(defence, scenario, pivot):
    """Max minus min of the residuals: zero iff all non-pivot targets are tied."""
    res = full_indifference_residuals(defence, scenario, pivot)
    return float(res.max() - res.min())

