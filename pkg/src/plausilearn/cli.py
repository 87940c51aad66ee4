"""Command-line entry point: grid, check, axioms, simulate.

Exit codes: 0 on success (and true verdicts), 1 when a checked formula is
not valid or the axiom suite finds a counterexample, 2 on usage or I/O
errors.  All randomness is seeded, so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import convergence, doxastic, logic, simplex
from .plausibility import CENTRE_OF_MASS, ENTROPY

_GRAMMAR_HELP = """\
Formula syntax:
  formula := impl ; impl := or ("->" impl)? ; or := and ("|" and)* ;
  and := unary ("&" unary)* ;
  unary := "~" unary | "K" unary | "B" unary | "B(" formula "|" cond ")"
         | "[" boxarg "]" unary | atom ;
  boxarg := obslist | formula ; cond := obslist | formula ;
  obslist := OUTCOME ("," OUTCOME)* ;
  atom := "T" | lin | "(" formula ")" ; lin := linsum REL rat ;
  REL := ">=" | "<=" | "=" | ">" | "<" ;
  linsum := term (("+"|"-") term)* ; term := (rat "*")? "w(" OUTCOME ")" ;
  rat := INT ("/" INT)? | DECIMAL .
Identifiers naming alphabet outcomes parse as observations inside B(.|.)
and [.]; anything else parses as a formula.
"""


class _UsageError(Exception):
    pass


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _load_model(path: str) -> doxastic.Model:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(
            f"malformed model JSON in {path} at line {exc.lineno}: {exc.msg}"
        ) from exc
    try:
        return doxastic.model_from_dict(payload)
    except (KeyError, ValueError) as exc:
        raise _UsageError(f"bad model file {path}: {exc}") from exc


def _cmd_grid(args) -> int:
    alphabet = simplex.make_alphabet(args.alphabet.split(","))
    worlds = simplex.simplex_grid(alphabet, args.resolution)
    fn = {"entropy": ENTROPY, "centre_of_mass": CENTRE_OF_MASS}[args.plausibility]
    model = doxastic.make_model(worlds, fn)
    if args.condition:
        event = simplex.parse_event(alphabet, args.condition)
        model = doxastic.update_sampling(model, event)
    payload = doxastic.model_to_dict(model, fn)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
            fh.write("\n")
        sys.stdout.write(
            f"wrote model with {len(worlds)} worlds to {args.output}\n"
        )
    else:
        _emit_json(payload)
    return 0


def _cmd_check(args) -> int:
    model = _load_model(args.model)
    try:
        formula = logic.parse(args.formula, model.alphabet)
    except (logic.ParseError, simplex.UnknownOutcomeError) as exc:
        raise _UsageError(f"bad formula: {exc}") from exc
    ext = logic.extension(model, formula)
    verdicts = [i in ext for i in range(len(model.worlds))]
    valid = all(verdicts)
    if args.format == "table":
        for i, (world, verdict) in enumerate(zip(model.worlds, verdicts)):
            sys.stdout.write(f"{i}\t{world}\t{verdict}\n")
        sys.stdout.write(f"valid\t{valid}\n")
    else:
        _emit_json(
            {
                "formula": logic.print_formula(formula),
                "verdicts": verdicts,
                "valid": valid,
            }
        )
    return 0 if valid else 1


def _cmd_axioms(args) -> int:
    report = logic.axiom_suite(
        trials=args.trials,
        seed=args.seed,
        formula_depth=args.depth,
        skip_relativization=args.skip_relativization,
    )
    _emit_json(report.to_dict())
    return 0 if report.ok else 1


def _parse_truth(alphabet, text: str) -> simplex.MassFunction:
    weights = [Fraction(part) for part in text.split(",")]
    return simplex.mass_function(alphabet, weights)


def _cmd_simulate(args) -> int:
    model = _load_model(args.model)
    payload_fn = None
    with open(args.model) as fh:
        payload_fn = doxastic._plausibility_from_spec(
            json.load(fh).get("plausibility", "entropy")
        )
    try:
        truth = _parse_truth(model.alphabet, args.truth)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"bad truth vector: {exc}") from exc
    cfg = convergence.TrialConfig(
        worlds=model.worlds,
        plausibility=payload_fn,
        truth=truth,
        horizon=args.horizon,
        seed=args.seed,
        epsilon=args.eps,
    )
    try:
        summary = convergence.run_experiment(
            cfg, args.trials, args.seed, include_baseline=args.baseline
        )
    except (
        convergence.TruthNotInWorldsError,
        convergence.ZeroPlausibilityTruthError,
    ) as exc:
        raise _UsageError(str(exc)) from exc
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["trial", "settled", "settle_time"]
            if args.baseline:
                header.append("baseline_settle_time")
            writer.writerow(header)
            for i, result in enumerate(summary.trial_results):
                row = [i, int(result.settled), result.settle_time]
                if args.baseline:
                    row.append(summary.baseline.trial_results[i].settle_time)
                writer.writerow(row)
    _emit_json(summary.to_dict())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plausilearn",
        description="Belief formation over unknown probability distributions.",
        epilog=_GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    grid = sub.add_parser("grid", help="enumerate a simplex grid model file")
    grid.add_argument("--alphabet", required=True, help="comma-separated outcomes")
    grid.add_argument("--resolution", type=int, required=True)
    grid.add_argument(
        "--plausibility",
        choices=["entropy", "centre_of_mass"],
        default="entropy",
    )
    grid.add_argument(
        "--condition", help='pre-condition on observations, e.g. "H H H"'
    )
    grid.add_argument("-o", "--output")
    grid.set_defaults(func=_cmd_grid)

    chk = sub.add_parser("check", help="model-check a formula")
    chk.add_argument("--model", required=True)
    chk.add_argument("--formula", required=True)
    chk.add_argument("--format", choices=["json", "table"], default="json")
    chk.set_defaults(func=_cmd_check)

    ax = sub.add_parser("axioms", help="randomized validity suite")
    ax.add_argument("--trials", type=int, default=100)
    ax.add_argument("--seed", type=int, default=0)
    ax.add_argument("--depth", type=int, default=2)
    ax.add_argument(
        "--skip-relativization",
        action="store_true",
        help="mutation-testing hook: corrupt the announcement semantics",
    )
    ax.set_defaults(func=_cmd_axioms)

    sim = sub.add_parser("simulate", help="convergence-of-belief experiment")
    sim.add_argument("--model", required=True)
    sim.add_argument("--truth", required=True, help='e.g. "5/10,3/10,2/10"')
    sim.add_argument("--eps", type=float, default=None)
    sim.add_argument("--horizon", type=int, required=True)
    sim.add_argument("--trials", type=int, default=100)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--baseline", action="store_true")
    sim.add_argument("--trace", help="per-trial CSV output path")
    sim.set_defaults(func=_cmd_simulate)
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
