"""Brute-force checks for the induction solver.

The attacker's payoff is linear in its own mixed strategy, so a pure best
response always exists; the oracle only ever needs per-target payoffs. The
leader's problem is searched exhaustively over a rational simplex grid.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from ._validation import SIMPLEX_TOL, _freeze, check_coverage
from .exceptions import DimensionMismatch, ResolutionTooFine, ValidationError
from .induction import delta_forms, indifference_spread
from .model import expected_payoffs, omega

TIE_TOL = 1e-9
TIE_RULES = ("favor_leader", "favor_follower", "lowest_index")
DEFAULT_MAX_POINTS = 50_000_000
_CHUNK = 200_000


@dataclass(frozen=True)
class BestResponse:
    best_targets: frozenset
    best_value: float
    chosen: int


@dataclass(frozen=True)
class OracleResult:
    defence: np.ndarray
    attack: np.ndarray
    leader_payoff: float
    follower_payoff: float
    resolution: float
    chosen: int
    grid_points: int


def _per_target(defence, scenario):
    """(leader, follower) per-target payoffs; rows of ``defence`` broadcast."""
    leader = defence * omega(scenario).omega_defender - scenario.cost_defender
    follower = scenario.reward_attacker - defence * omega(scenario).omega_attacker
    return leader, follower


def _check_tie_rule(tie_break):
    if tie_break not in TIE_RULES:
        raise ValidationError(f"tie_break: expected one of {', '.join(TIE_RULES)}, got {tie_break!r}")


def _choose(leader, follower, tie_break, tie_tol):
    """Vectorised best response over rows: returns (chosen index, tied mask)."""
    best = follower.max(axis=-1, keepdims=True)
    tied = follower >= best - tie_tol
    if tie_break == "lowest_index":
        chosen = np.argmax(tied, axis=-1)
    elif tie_break == "favor_leader":
        # argmax takes the first maximum, so ties within ties go to the lowest index
        chosen = np.argmax(np.where(tied, leader, -np.inf), axis=-1)
    else:
        chosen = np.argmax(np.where(tied, -leader, -np.inf), axis=-1)
    return chosen, tied


def attacker_best_response(defence, scenario, tie_break="lowest_index", tie_tol=TIE_TOL):
    """Pure best response of the attacker to protection marginals ``defence``.

    ``best_targets`` holds every target within ``tie_tol`` of the best
    attacker payoff. ``tie_break`` picks among them: ``favor_leader`` takes
    the one best for the defender (strong Stackelberg), ``favor_follower``
    the worst for the defender, ``lowest_index`` the first.
    """
    _check_tie_rule(tie_break)
    d = check_coverage(defence, scenario.n_targets, name="defence")
    leader, follower = _per_target(d, scenario)
    chosen, tied = _choose(leader, follower, tie_break, tie_tol)
    return BestResponse(
        best_targets=frozenset(int(i) for i in np.flatnonzero(tied)),
        best_value=float(follower.max()),
        chosen=int(chosen),
    )


def grid_size(n, resolution):
    k = _grid_denominator(resolution)
    return math.comb(k + n - 1, n - 1)


def _grid_denominator(resolution):
    if not 0 < resolution <= 1:
        raise ValidationError(f"resolution: must lie in (0, 1], got {resolution}")
    k = round(1.0 / resolution)
    if abs(k * resolution - 1.0) > 1e-12:
        raise ValidationError(f"resolution: {resolution} does not divide 1")
    return k


def compositions(n, k):
    """All compositions of ``k`` into ``n`` non-negative parts, lexicographically ascending.

    Yields integer tuples; divide by ``k`` for the grid point.
    """
    # stars and bars: bar tuples come out of combinations() in lex order, and
    # part i is the gap before bar i, so the compositions are in lex order too
    for bars in itertools.combinations(range(k + n - 1), n - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(k + n - 2 - prev)
        yield tuple(parts)


def _chunks(n, k, size):
    buf = []
    for c in compositions(n, k):
        buf.append(c)
        if len(buf) == size:
            yield np.array(buf, dtype=np.int64)
            buf = []
    if buf:
        yield np.array(buf, dtype=np.int64)


def _best_in_chunk(comps, k, scenario, tie_break, tie_tol):
    d = comps / k
    leader, follower = _per_target(d, scenario)
    chosen, _ = _choose(leader, follower, tie_break, tie_tol)
    value = leader[np.arange(len(d)), chosen]
    top = value.max()
    # rows are lexicographically ascending, so the first maximum is the lex-smallest
    i = int(np.flatnonzero(value == top)[0])
    return float(top), tuple(int(x) for x in comps[i]), int(chosen[i])


def stackelberg_grid(
    scenario,
    resolution,
    tie_break="favor_leader",
    max_points=DEFAULT_MAX_POINTS,
    n_jobs=1,
    tie_tol=TIE_TOL,
):
    """Exhaustive leader optimum over the defence grid with step ``resolution``.

    Each grid point is scored by the leader's payoff under the attacker's pure
    best response (ties per ``tie_break``). The maximum is taken under the
    total order (payoff desc, composition lexicographically asc), so the
    answer does not depend on ``n_jobs``.
    """
    _check_tie_rule(tie_break)
    n = scenario.n_targets
    k = _grid_denominator(resolution)
    size = math.comb(k + n - 1, n - 1)
    if size > max_points:
        raise ResolutionTooFine(
            f"grid at resolution {resolution} has {size} points, cap is {max_points}"
        )

    def work(comps):
        return _best_in_chunk(comps, k, scenario, tie_break, tie_tol)

    if n_jobs == 1:
        partials = [work(c) for c in _chunks(n, k, _CHUNK)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            partials = list(pool.map(work, _chunks(n, k, _CHUNK)))

    # (-payoff, composition) is a total order independent of chunking
    value, comp, chosen = min(partials, key=lambda p: (-p[0], p[1]))
    d = _freeze(np.array(comp, dtype=float) / k)
    a = np.zeros(n)
    a[chosen] = 1.0
    leader, follower = expected_payoffs(d, a, scenario)
    return OracleResult(
        defence=d,
        attack=_freeze(a),
        leader_payoff=leader,
        follower_payoff=follower,
        resolution=float(resolution),
        chosen=chosen,
        grid_points=size,
    )


@dataclass(frozen=True)
class AuditCheck:
    name: str
    value: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class AuditReport:
    checks: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def verify_solution(solution, scenario, pivot=None, reference=None, tol=SIMPLEX_TOL,
                    n_attacks=10, seed=0):
    """Audit a candidate defence vector (or an ``InductionSolution``).

    Checks normalization, the [0, 1] box, that all non-pivot targets are tied
    for the attacker, and that the leader payoff matches
    ``D_r * delta1(A) + delta2(A)`` on ``n_attacks`` random attack vectors.
    Never raises on a bad candidate; failures show up in the report.
    """
    n = scenario.n_targets
    if hasattr(solution, "defence"):
        raw = np.asarray(solution.defence, dtype=float)
        pivot = solution.pivot if pivot is None else pivot
        reference = solution.reference if reference is None else reference
    else:
        raw = np.asarray(solution, dtype=float)
    if raw.shape != (n,):
        raise DimensionMismatch(f"defence: expected {n} entries, got shape {raw.shape}")
    if pivot is None:
        pivot = n - 1
    if reference is None:
        reference = 0 if pivot != 0 else 1

    checks = []
    dev = abs(float(raw.sum()) - 1.0)
    checks.append(AuditCheck("normalization", dev, tol, dev <= tol))
    box = float(np.max(np.maximum(-raw, raw - 1.0).clip(min=0.0)))
    checks.append(AuditCheck("box", box, tol, box <= tol))

    d = np.clip(raw, 0.0, 1.0)
    spread = indifference_spread(d, scenario, pivot)
    checks.append(AuditCheck("indifference", spread, tol, spread <= tol))

    delta1, delta2 = delta_forms(scenario, pivot, reference)
    rng = np.random.default_rng(seed)
    attacks = rng.dirichlet(np.ones(n), size=n_attacks)
    lead = attacks @ (d * omega(scenario).omega_defender - scenario.cost_defender)
    reduced = d[reference] * delta1(attacks) + delta2(attacks)
    worst = float(np.max(np.abs(lead - reduced)))
    checks.append(AuditCheck("reduction", worst, tol, worst <= tol))
    return AuditReport(tuple(checks))
