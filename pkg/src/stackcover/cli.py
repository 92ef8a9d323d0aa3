"""Command line interface.

Target indices on the command line are 1-based; everything internal is
0-based. Reals are printed with 6 decimals.

Exit codes: 0 ok, 2 validation/parse, 3 infeasible indifference, 4 I/O,
5 grid too fine, 6 audit failure.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from ._validation import check_coverage, check_strategy
from .allocation import assignment_from_marginals, marginals_from_assignment
from .exceptions import InfeasibleIndifference, ResolutionTooFine, ValidationError
from .induction import eliminate, scan_max_free_marginal, solve
from .model import expected_payoffs, reduce_form, validate_scenario
from .oracle import (
    DEFAULT_MAX_POINTS,
    TIE_RULES,
    attacker_best_response,
    compositions,
    grid_size,
    stackelberg_grid,
    verify_solution,
    _grid_denominator,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4
EXIT_RESOLUTION = 5
EXIT_AUDIT = 6


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x):
    s = f"{float(x):.6f}"
    return "0.000000" if s == "-0.000000" else s


def fmt_vec(v):
    return ",".join(fmt(x) for x in v)


def load_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise CLIError(f"cannot read scenario file {path}: {exc.strerror}", EXIT_IO) from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CLIError(f"scenario file {path}: invalid JSON ({exc})", EXIT_VALIDATION) from None
    if isinstance(raw, dict):
        for i, t in enumerate(raw.get("targets") or []):
            if isinstance(t, dict) and "name" not in t:
                raise CLIError(f"targets[{i}]: missing field name", EXIT_VALIDATION)
    return validate_scenario(raw)


def parse_vector(text, flag):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise CLIError(f"{flag}: expected a comma-separated list of numbers, got {text!r}",
                       EXIT_VALIDATION) from None


def parse_index(value, n, flag):
    if not 1 <= value <= n:
        raise CLIError(f"{flag}: must be between 1 and {n}, got {value}", EXIT_VALIDATION)
    return value - 1


def _open_out(path):
    if path is None or path == "-":
        return None
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _write_rows(path, header, rows, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    fh = _open_out(path)
    if fh is None:
        out.write(buf.getvalue())
        return
    try:
        with fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _form_line(form):
    return f"coefficients={fmt_vec(form.coefficients)} constant={fmt(form.constant)}"


def cmd_solve(args, out):
    scenario = load_scenario(args.scenario)
    n = scenario.n_targets
    attack = check_strategy(parse_vector(args.attack, "--attack"), n, name="--attack")
    p = parse_index(args.pivot, n, "--pivot")
    r = parse_index(args.ref, n, "--ref")
    sol = solve(scenario, attack, p, r, zero_tolerance=args.tolerance)
    lo, hi = sol.feasible_interval
    print(f"case: {sol.case_label}", file=out)
    print(f"pivot: {p + 1}", file=out)
    print(f"reference: {r + 1}", file=out)
    print(f"delta1: {fmt(sol.delta1_value)}", file=out)
    print(f"delta2: {fmt(sol.delta2_value)}", file=out)
    print(f"feasible_interval: [{fmt(lo)}, {fmt(hi)}]", file=out)
    print(f"free_marginal: {fmt(sol.free_marginal_value)}", file=out)
    print(f"clamped: {'yes' if sol.clamped else 'no'}", file=out)
    if args.scan_step is not None:
        scanned = scan_max_free_marginal(eliminate(scenario, p, r), args.scan_step)
        print(f"scan_max_free_marginal: {fmt(scanned)}", file=out)
    print(f"defence: {fmt_vec(sol.defence)}", file=out)
    print(f"leader_form: {_form_line(sol.leader_form)}", file=out)
    print(f"leader_form_reduced: {_form_line(reduce_form(sol.leader_form, p))}", file=out)
    print(f"follower_form: {_form_line(sol.follower_form)}", file=out)
    print(f"follower_form_reduced: {_form_line(reduce_form(sol.follower_form, p))}", file=out)
    print(f"leader_payoff: {fmt(sol.leader_payoff)}", file=out)
    print(f"follower_payoff: {fmt(sol.follower_payoff)}", file=out)
    return EXIT_OK


def cmd_evaluate(args, out):
    scenario = load_scenario(args.scenario)
    n = scenario.n_targets
    defence = check_coverage(parse_vector(args.defence, "--defence"), n, name="--defence")
    attack = check_strategy(parse_vector(args.attack, "--attack"), n, name="--attack")
    leader, follower = expected_payoffs(defence, attack, scenario)
    print(f"leader_payoff: {fmt(leader)}", file=out)
    print(f"follower_payoff: {fmt(follower)}", file=out)
    return EXIT_OK


def cmd_sweep(args, out):
    scenario = load_scenario(args.scenario)
    n = scenario.n_targets
    defence = check_coverage(parse_vector(args.defence, "--defence"), n, name="--defence")
    k = _grid_denominator(args.step)
    size = grid_size(n, args.step)
    if size > DEFAULT_MAX_POINTS:
        raise ResolutionTooFine(f"attack grid at step {args.step} has {size} points")
    comps = np.array(list(compositions(n, k)), dtype=float)
    attacks = comps / k
    leader = attacks @ (defence * scenario.reward_defender - (1 - defence) * scenario.cost_defender)
    follower = attacks @ ((1 - defence) * scenario.reward_attacker - defence * scenario.cost_attacker)
    header = [f"A{i + 1}" for i in range(n)] + ["leader_payoff", "follower_payoff"]
    rows = ([fmt(x) for x in a] + [fmt(lv), fmt(fv)]
            for a, lv, fv in zip(attacks, leader, follower))
    _write_rows(args.out, header, rows, out)
    if args.out not in (None, "-"):
        print(f"wrote {size} rows to {args.out}", file=out)
    return EXIT_OK


def cmd_oracle(args, out):
    scenario = load_scenario(args.scenario)
    res = stackelberg_grid(scenario, args.resolution, tie_break=args.tie_break)
    print(f"resolution: {fmt(res.resolution)}", file=out)
    print(f"tie_break: {args.tie_break}", file=out)
    print(f"grid_points: {res.grid_points}", file=out)
    print(f"defence: {fmt_vec(res.defence)}", file=out)
    print(f"chosen_target: {res.chosen + 1}", file=out)
    print(f"attack: {fmt_vec(res.attack)}", file=out)
    print(f"leader_payoff: {fmt(res.leader_payoff)}", file=out)
    print(f"follower_payoff: {fmt(res.follower_payoff)}", file=out)
    return EXIT_OK


def cmd_verify(args, out):
    scenario = load_scenario(args.scenario)
    n = scenario.n_targets
    raw = parse_vector(args.defence, "--defence")
    if len(raw) != n:
        raise ValidationError(f"--defence: expected {n} entries, got {len(raw)}")
    if not np.all(np.isfinite(raw)):
        raise ValidationError("--defence: entries must be finite")
    p = parse_index(args.pivot if args.pivot is not None else n, n, "--pivot")
    r = parse_index(args.ref if args.ref is not None else (1 if p != 0 else 2), n, "--ref")
    report = verify_solution(np.asarray(raw), scenario, pivot=p, reference=r)
    print(f"pivot: {p + 1}", file=out)
    print(f"reference: {r + 1}", file=out)
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.name}: {status} deviation={fmt(c.value)} tolerance={c.tolerance:g}", file=out)
    br = attacker_best_response(np.clip(raw, 0, 1), scenario)
    targets = ",".join(str(i + 1) for i in sorted(br.best_targets))
    print(f"attacker_best_targets: {targets} value={fmt(br.best_value)}", file=out)
    print(f"result: {'PASS' if report.passed else 'FAIL'}", file=out)
    return EXIT_OK if report.passed else EXIT_AUDIT


def cmd_decompose(args, out):
    scenario = load_scenario(args.scenario)
    n, m = scenario.n_targets, scenario.resource_count
    defence = check_strategy(parse_vector(args.defence, "--defence"), n, name="--defence")
    matrix = assignment_from_marginals(defence, m)
    header = [f"S{i + 1}" for i in range(m)]
    _write_rows(args.out, header, ([fmt(x) for x in row] for row in matrix), out)
    if args.out not in (None, "-"):
        print(f"wrote {n}x{m} assignment matrix to {args.out}", file=out)
    return EXIT_OK


def cmd_marginals(args, out):
    try:
        with open(args.matrix, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CLIError(f"cannot read {args.matrix}: {exc.strerror}", EXIT_IO) from None
    try:
        matrix = np.array([[float(x) for x in row] for row in rows[1:] if row])
    except ValueError as exc:
        raise CLIError(f"{args.matrix}: non-numeric entry ({exc})", EXIT_VALIDATION) from None
    print(f"defence: {fmt_vec(marginals_from_assignment(matrix))}", file=out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stackcover",
        description="Leader-follower coverage game: backward induction, payoffs, oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="backward-induction marginals for an observed attack")
    p.add_argument("--scenario", required=True)
    p.add_argument("--attack", required=True, help="comma-separated attack probabilities")
    p.add_argument("--pivot", type=int, required=True, help="1-based pivot target")
    p.add_argument("--ref", type=int, required=True, help="1-based reference target")
    p.add_argument("--scan-step", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=1e-9, help="|delta1| zero threshold")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", help="expected payoffs of a strategy profile")
    p.add_argument("--scenario", required=True)
    p.add_argument("--defence", required=True)
    p.add_argument("--attack", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="payoffs over the attack simplex grid, as CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--defence", required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="grid-search leader optimum")
    p.add_argument("--scenario", required=True)
    p.add_argument("--resolution", type=float, required=True)
    p.add_argument("--tie-break", choices=TIE_RULES, default="favor_leader")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="audit a candidate defence vector")
    p.add_argument("--scenario", required=True)
    p.add_argument("--defence", required=True)
    p.add_argument("--pivot", type=int, default=None, help="1-based pivot (default: last)")
    p.add_argument("--ref", type=int, default=None, help="1-based reference (default: first)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="assignment matrix realizing a defence vector")
    p.add_argument("--scenario", required=True)
    p.add_argument("--defence", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("marginals", help="protection marginals of an assignment-matrix CSV")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_marginals)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleIndifference as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResolutionTooFine as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
