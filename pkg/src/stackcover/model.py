"""Domain types and payoff evaluation for the attacker/defender coverage game.

The defender (leader) commits to per-target protection marginals ``D``; the
attacker (follower) picks attack probabilities ``A``. With target ``j``
protected with probability ``D_j`` the per-target payoffs are::

    leader_j   = D_j * reward_defender_j - (1 - D_j) * cost_defender_j
    follower_j = (1 - D_j) * reward_attacker_j - D_j * cost_attacker_j

and the expected payoffs are the ``A``-weighted sums of those. Sums are plain
(uncompensated); targets are expected to number in the tens, not thousands.
"""

from collections.abc import Mapping
from dataclasses import dataclass
import math
import numbers

import numpy as np

from ._validation import _freeze, check_coverage, check_index, check_strategy
from .exceptions import (
    DimensionMismatch,
    NegativeValuation,
    NonPositiveOmega,
    TooFewTargets,
    ValidationError,
)

VALUATION_FIELDS = ("reward_defender", "cost_defender", "reward_attacker", "cost_attacker")


@dataclass(frozen=True)
class TargetProfile:
    reward_defender: float
    cost_defender: float
    reward_attacker: float
    cost_attacker: float
    name: str = ""

    def __post_init__(self):
        for key in VALUATION_FIELDS:
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise ValidationError(f"{self._label()}.{key}: expected a number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f"{self._label()}.{key}: must be finite")
            if value < 0:
                raise NegativeValuation(f"{self._label()}.{key}: must be >= 0, got {value}")
            object.__setattr__(self, key, float(value))

    def _label(self):
        return self.name or "target"


@dataclass(frozen=True)
class Scenario:
    """Ordered targets plus the number of protection resources.

    Target order is the canonical index order used everywhere else.
    """

    targets: tuple
    resource_count: int

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))

    @property
    def n_targets(self):
        return len(self.targets)

    def _column(self, key):
        return _freeze([getattr(t, key) for t in self.targets])

    @property
    def reward_defender(self):
        return self._column("reward_defender")

    @property
    def cost_defender(self):
        return self._column("cost_defender")

    @property
    def reward_attacker(self):
        return self._column("reward_attacker")

    @property
    def cost_attacker(self):
        return self._column("cost_attacker")

    @property
    def names(self):
        return tuple(t.name or f"T{i + 1}" for i, t in enumerate(self.targets))

    def permuted(self, order):
        """Return the scenario with targets reordered so that new[i] = old[order[i]]."""
        return Scenario(tuple(self.targets[i] for i in order), self.resource_count)


@dataclass(frozen=True)
class OmegaTable:
    """Per-target reward + cost sums for each player."""

    omega_defender: np.ndarray
    omega_attacker: np.ndarray


@dataclass(frozen=True)
class AttackLinearForm:
    """A payoff that is affine in the attack vector: ``constant + coefficients @ A``."""

    coefficients: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _freeze(self.coefficients))
        object.__setattr__(self, "constant", float(self.constant))

    @property
    def n_targets(self):
        return self.coefficients.shape[0]

    def __call__(self, attack):
        attack = np.asarray(attack, dtype=float)
        if attack.shape[-1] != self.n_targets:
            raise DimensionMismatch(
                f"attack: expected {self.n_targets} entries, got {attack.shape[-1]}"
            )
        return self.constant + attack @ self.coefficients

    evaluate = __call__


def _target_from_mapping(raw, position):
    allowed = set(VALUATION_FIELDS) | {"name"}
    unknown = sorted(set(raw) - allowed)
    where = f"targets[{position}]"
    if unknown:
        raise ValidationError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in VALUATION_FIELDS if k not in raw]
    if missing:
        raise ValidationError(f"{where}: missing field(s) {', '.join(missing)}")
    name = raw.get("name", "")
    if not isinstance(name, str):
        raise ValidationError(f"{where}.name: expected a string")
    try:
        return TargetProfile(name=name, **{k: raw[k] for k in VALUATION_FIELDS})
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from None


def validate_scenario(candidate):
    """Build and validate a :class:`Scenario`.

    ``candidate`` may be a Scenario or a mapping shaped like the scenario file
    (``{"resources": m, "targets": [{...}, ...]}``). Unknown keys are rejected.
    """
    if isinstance(candidate, Scenario):
        targets, m = candidate.targets, candidate.resource_count
    elif isinstance(candidate, Mapping):
        unknown = sorted(set(candidate) - {"resources", "targets"})
        if unknown:
            raise ValidationError(f"scenario: unknown key(s) {', '.join(unknown)}")
        if "resources" not in candidate or "targets" not in candidate:
            raise ValidationError("scenario: 'resources' and 'targets' are required")
        m = candidate["resources"]
        raw_targets = candidate["targets"]
        if not isinstance(raw_targets, (list, tuple)):
            raise ValidationError("targets: expected an array")
        targets = []
        for i, raw in enumerate(raw_targets):
            if isinstance(raw, TargetProfile):
                targets.append(raw)
            elif isinstance(raw, Mapping):
                targets.append(_target_from_mapping(raw, i))
            else:
                raise ValidationError(f"targets[{i}]: expected an object")
    else:
        raise ValidationError(f"scenario: unsupported input type {type(candidate).__name__}")

    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise ValidationError(f"resources: expected an integer, got {m!r}")
    if m < 1:
        raise ValidationError(f"resources: must be >= 1, got {m}")
    if len(targets) < 2:
        raise TooFewTargets(f"targets: need at least 2, got {len(targets)}")
    for i, t in enumerate(targets):
        if not isinstance(t, TargetProfile):
            raise ValidationError(f"targets[{i}]: expected a TargetProfile")
        if t.reward_defender + t.cost_defender <= 0:
            raise NonPositiveOmega(f"targets[{i}]: reward_defender + cost_defender must be > 0")
        if t.reward_attacker + t.cost_attacker <= 0:
            raise NonPositiveOmega(f"targets[{i}]: reward_attacker + cost_attacker must be > 0")
    return Scenario(tuple(targets), int(m))


def omega(scenario):
    return OmegaTable(
        omega_defender=_freeze(scenario.reward_defender + scenario.cost_defender),
        omega_attacker=_freeze(scenario.reward_attacker + scenario.cost_attacker),
    )


def leader_payoff_form(defence, scenario):
    """Leader payoff as a linear form in the attack vector.

    Coefficient ``j`` is ``D_j * omega_defender_j - cost_defender_j``.
    """
    d = check_coverage(defence, scenario.n_targets, name="defence")
    om = omega(scenario)
    return AttackLinearForm(d * om.omega_defender - scenario.cost_defender)


def follower_payoff_form(defence, scenario):
    d = check_coverage(defence, scenario.n_targets, name="defence")
    coef = (1.0 - d) * scenario.reward_attacker - d * scenario.cost_attacker
    return AttackLinearForm(coef)


def expected_payoffs(defence, attack, scenario):
    """Return ``(leader_payoff, follower_payoff)`` for a strategy profile.

    ``defence`` is checked for length and the [0, 1] box only, so candidate
    strategies that break normalization can still be scored; ``attack`` must
    be a valid simplex point.
    """
    n = scenario.n_targets
    d = check_coverage(defence, n, name="defence")
    a = check_strategy(attack, n, name="attack")
    leader = np.sum(a * (d * scenario.reward_defender - (1.0 - d) * scenario.cost_defender))
    follower = np.sum(a * ((1.0 - d) * scenario.reward_attacker - d * scenario.cost_attacker))
    return float(leader), float(follower)


def reduce_form(form, eliminated_index):
    """Substitute ``A_k = 1 - sum_{j != k} A_j`` into a linear form.

    The returned form has a zero coefficient at ``k`` and agrees with
    ``form`` on every point of the simplex.
    """
    k = check_index(eliminated_index, form.n_targets, name="eliminated_index")
    pivot = form.coefficients[k]
    coef = form.coefficients - pivot
    coef = np.where(np.arange(form.n_targets) == k, 0.0, coef)
    return AttackLinearForm(coef, form.constant + pivot)
