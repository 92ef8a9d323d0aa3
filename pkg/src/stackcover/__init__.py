"""Leader-follower coverage games: backward induction, payoff evaluation and brute-force checks."""

from importlib import resources
import json

from .allocation import assignment_from_marginals, marginals_from_assignment
from .estimators import BackwardInductionDefender, GridStackelbergOracle, MarginalTransformer
from .exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    InfeasibleIndifference,
    InvalidMarginals,
    InvalidMatrix,
    NegativeValuation,
    NonPositiveOmega,
    PivotEqualsReference,
    ResolutionTooFine,
    StackcoverError,
    TooFewTargets,
    ValidationError,
)
from .induction import (
    EliminationMaps,
    InductionSolution,
    delta_forms,
    eliminate,
    full_indifference_residuals,
    scan_max_free_marginal,
    solve,
)
from .model import (
    AttackLinearForm,
    OmegaTable,
    Scenario,
    TargetProfile,
    expected_payoffs,
    follower_payoff_form,
    leader_payoff_form,
    omega,
    reduce_form,
    validate_scenario,
)
from .oracle import (
    AuditReport,
    BestResponse,
    OracleResult,
    attacker_best_response,
    stackelberg_grid,
    verify_solution,
)

__version__ = "0.1.0"


def example_table_path():
    """Filesystem path of the bundled four-target example scenario."""
    return resources.files(__name__).joinpath("data/example_table.json")


def load_example_scenario():
    with example_table_path().open(encoding="utf-8") as fh:
        return validate_scenario(json.load(fh))
