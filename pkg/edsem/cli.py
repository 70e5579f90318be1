"""Command-line front end: `edsem validate | analyze | decide | solve | witness | fixture | census`.

Exit codes: 0 success, 1 census disagreement, 2 validation failure, 3 budget
exceeded, 4 construction failure.
"""
import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from .args import (
    BudgetArguments,
    RunArguments,
    add_budget_and_run_arguments,
    budget_and_run_from,
    load_config,
    peek_config,
)
from .decide import (
    census,
    cross_check_with_oracle,
    decide_ed,
    mgr_like,
    msem,
    verify_certificate,
)
from .errors import EdsemError, NotAssociative, ValidationError
from .files import (
    LoadedSemigroup,
    load_semigroup,
    read_points,
    read_system,
    rees_spec_to_dict,
    write_json,
    write_system,
)
from .fixtures import named_fixture, rs240_spec, rsing_spec
from .groups import find_zero_divisor
from .rees import analyze_kernel, is_matrix_nonsingular
from .semigroup import has_zero
from .terms import Equation, PointSet, System, Term, solve_system
from .translations import bound_checks, sim_partition
from .witness import build_tp_term, defining_system

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s -   %(message)s"
MAX_LISTED_POINTS = 100


@dataclass
class Report:
    """Self-contained result of one command."""

    command: str
    input: Dict[str, Any] = field(default_factory=dict)
    result: Dict[str, Any] = field(default_factory=dict)
    certificate: Optional[Dict[str, Any]] = None
    seconds: float = 0.0
    budget_notes: List[str] = field(default_factory=list)
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload.pop("exit_code")
        return payload

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.input.items():
            if key != "elements":
                lines.append(f"input.{key}: {value}")
        for key, value in self.result.items():
            lines.append(f"{key}: {_render_value(value)}")
        if self.certificate is not None:
            lines.append(f"certificate: {self.certificate.get('text', self.certificate)}")
        for note in self.budget_notes:
            lines.append(f"note: {note}")
        lines.append(f"time: {self.seconds:.3f}s")
        return "\n".join(lines)


def _render_value(value: Any) -> str:
    if isinstance(value, list) and len(value) > 12:
        return f"{json.dumps(value[:12])} ... ({len(value)} entries)"
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def _describe(loaded: LoadedSemigroup, path: str) -> Dict[str, Any]:
    return {
        "path": path,
        "kind": loaded.kind,
        "sha256": loaded.digest,
        "size": len(loaded.semigroup),
        "elements": list(loaded.semigroup.elements),
    }


def cmd_validate(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    loaded = load_semigroup(args.path, budget.size_cap)
    report = Report("validate", _describe(loaded, args.path), {"ok": True, "associative": True})
    if loaded.spec is not None:
        spec = loaded.spec
        report.result["materialized_size"] = spec.order
        report.result["rees"] = {
            "group_order": len(spec.group),
            "lambda": spec.lambda_size,
            "i": spec.i_size,
        }
        if spec.order > 512:
            report.budget_notes.append("associativity of the materialized table was not rechecked")
    return report


def cmd_analyze(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    loaded = load_semigroup(args.path, budget.size_cap)
    semigroup = loaded.semigroup
    analysis = analyze_kernel(semigroup)
    spec = analysis.spec
    result: Dict[str, Any] = {
        "kernel_size": len(analysis.kernel),
        "kernel": analysis.kernel.names(),
        "lambda": spec.lambda_size,
        "i": spec.i_size,
        "group_order": len(spec.group),
        "matrix": spec.matrix_names(),
        "matrix_verdict": str(is_matrix_nonsingular(spec)),
    }
    zero = has_zero(semigroup)
    if zero is not None and len(semigroup) > 1:
        result["zero"] = f"HasZero({semigroup.name(zero)})"
    witness = find_zero_divisor(spec.group)
    result["group_verdict"] = (
        "ED"
        if witness is None
        else "ZeroDivisor({},{})".format(
            semigroup.name(analysis.gamma(witness.x)), semigroup.name(analysis.gamma(witness.y))
        )
    )
    partition = sim_partition(semigroup, analysis.kernel)
    nontrivial = [members for members in partition.classes if len(members) > 1]
    result["sim_classes"] = len(partition)
    result["sim_verdict"] = (
        "Trivial"
        if not nontrivial
        else f"NontrivialSim({semigroup.name(nontrivial[0][0])},{semigroup.name(nontrivial[0][1])})"
    )
    bounds = bound_checks(semigroup, analysis)
    result["bounds"] = [str(bounds.ideal_bound), str(bounds.kernel_bound)]
    return Report("analyze", _describe(loaded, args.path), result)


def cmd_decide(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    loaded = load_semigroup(args.path, budget.size_cap)
    semigroup = loaded.semigroup
    decision = decide_ed(semigroup, use_bounds=run.use_bounds)
    payload = decision.to_dict()
    report = Report(
        "decide",
        _describe(loaded, args.path),
        {"verdict": payload["verdict"], "certificate_verified": verify_certificate(semigroup, decision)},
        certificate=payload["certificate"],
    )
    for key in ("kernel", "bounds"):
        if key in payload:
            report.result[key] = payload[key]
    if run.use_bounds:
        report.budget_notes.append("cardinality bounds may decide before the ~_K sweep")
    if args.oracle and len(semigroup) > budget.oracle_max_order:
        report.result["oracle"] = "Skipped"
        report.budget_notes.append(
            f"oracle skipped: |S|={len(semigroup)} > oracle_max_order={budget.oracle_max_order}"
        )
    elif args.oracle:
        oracle = cross_check_with_oracle(
            semigroup, budget.closure_budget, budget.oracle_max_order, decision
        )
        report.result["oracle"] = str(oracle)
        if not oracle.agree:
            report.exit_code = 1
    return report


def cmd_solve(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    loaded = load_semigroup(args.path, budget.size_cap)
    semigroup = loaded.semigroup
    system = read_system(args.system, semigroup)
    solution = solve_system(semigroup, system, budget.sweep_budget, progress=run.verbose)
    result: Dict[str, Any] = {
        "arity": system.arity,
        "equations": len(system),
        "count": len(solution),
    }
    report = Report("solve", _describe(loaded, args.path), result)
    if len(solution) <= args.limit:
        result["points"] = solution.render()
    else:
        report.budget_notes.append(f"listing suppressed above {args.limit} points")
    return report


def _target_set(
    spec: str, arity: Optional[int], loaded: LoadedSemigroup, budget: BudgetArguments
) -> PointSet:
    semigroup = loaded.semigroup
    if spec == "msem":
        target = msem(semigroup, budget.sweep_budget)
    elif spec == "mgr-like":
        target = mgr_like(semigroup, budget=budget.sweep_budget)
    else:
        target = read_points(spec, semigroup, budget.sweep_budget)
    if arity is not None and arity != target.arity:
        raise ValidationError(f"Set {spec} has arity {target.arity}, expected {arity}")
    return target


def _single_term(
    args: argparse.Namespace, loaded: LoadedSemigroup, budget: BudgetArguments, run: RunArguments
) -> Report:
    semigroup = loaded.semigroup
    try:
        point = [semigroup.index(name) for name in args.point.split()]
    except KeyError as error:
        raise ValidationError(str(error.args[0]))
    arity = len(point)
    analysis = analyze_kernel(semigroup)
    term = build_tp_term(
        semigroup,
        analysis,
        point,
        sweep_budget=budget.sweep_budget,
        sample_size=budget.sample_size,
        seed=run.seed,
    )
    exhaustive = len(semigroup) ** arity <= budget.sweep_budget
    report = Report(
        "witness",
        _describe(loaded, args.path),
        {"arity": arity, "point": args.point.split(), "term_length": term.length, "verified": True},
    )
    if not exhaustive:
        report.budget_notes.append(
            f"vanishing checked on {budget.sample_size} random points (seed {run.seed})"
        )
    if args.out:
        one = Term.constant(arity, analysis.gamma_identity)
        write_system(
            args.out,
            semigroup,
            System(arity, [Equation(term, one)]),
            header=f"term vanishing off {args.point} over {args.path} (sha256 {loaded.digest})",
        )
        report.result["output"] = args.out
    return report


def cmd_witness(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    loaded = load_semigroup(args.path, budget.size_cap)
    if args.point is not None:
        return _single_term(args, loaded, budget, run)
    if args.set is None:
        raise ValidationError("witness needs --set or --point")
    semigroup = loaded.semigroup
    target = _target_set(args.set, args.arity, loaded, budget)
    analysis = analyze_kernel(semigroup) if len(semigroup) > 1 else None
    system = defining_system(
        semigroup,
        analysis,
        target,
        threads=run.threads,
        sweep_budget=budget.sweep_budget,
        progress=run.verbose,
    )
    result: Dict[str, Any] = {
        "arity": target.arity,
        "target_size": len(target),
        "equations": len(system),
        "verified": True,
    }
    if args.out:
        write_system(
            args.out,
            semigroup,
            system,
            header=f"defining system for {args.set} over {args.path} (sha256 {loaded.digest})",
        )
        result["output"] = args.out
    return Report("witness", _describe(loaded, args.path), result)


def cmd_fixture(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    if args.rees:
        specs = {"rs240": rs240_spec, "rsing": rsing_spec}
        if args.name.lower() not in specs:
            raise ValidationError(f"No Rees spec fixture named {args.name!r}, choose rs240 or rsing")
        payload = rees_spec_to_dict(specs[args.name.lower()]())
    else:
        try:
            payload = named_fixture(args.name, *args.params).to_dict()
        except ValueError as error:
            raise ValidationError(str(error))
    write_json(args.out, payload)
    return Report(
        "fixture",
        {"name": args.name, "params": list(args.params)},
        {"output": args.out, "rees": args.rees},
    )


def cmd_census(args: argparse.Namespace, budget: BudgetArguments, run: RunArguments) -> Report:
    summary: Dict[str, Any] = {}
    failures: List[str] = []
    max_order = budget.oracle_max_order if args.max_order is None else args.max_order
    if max_order > budget.oracle_max_order:
        raise ValidationError(
            f"--max-order {max_order} exceeds --oracle-max-order {budget.oracle_max_order}"
        )
    for order in range(1, max_order + 1):
        results = census(
            order,
            budget.closure_budget,
            args.up_to_isomorphism,
            progress=run.verbose,
            use_bounds=run.use_bounds,
            max_order=budget.oracle_max_order,
        )
        ed = [s for s, r in results if r.decision.is_ed]
        summary[str(order)] = {
            "semigroups": len(results),
            "ed": len(ed),
            "agree": sum(r.agree for _, r in results),
        }
        failures += [f"{s.to_dict()['table']}: {r}" for s, r in results if not r.agree]
    report = Report("census", {"max_order": max_order}, {"orders": summary})
    if failures:
        report.result["failures"] = failures
        report.exit_code = 1
    return report


COMMANDS: Dict[str, Callable[[argparse.Namespace, BudgetArguments, RunArguments], Report]] = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "decide": cmd_decide,
    "solve": cmd_solve,
    "witness": cmd_witness,
    "fixture": cmd_fixture,
    "census": cmd_census,
}


def build_parser(config: Optional[Dict[str, Any]] = None) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON file with parameters.")
    add_budget_and_run_arguments(common, config)

    parser = argparse.ArgumentParser(prog="edsem", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", parents=[common], help="Validate an input file.")
    validate.add_argument("path", type=str, help="Cayley-table or Rees-spec JSON file.")

    analyze = subparsers.add_parser("analyze", parents=[common], help="Kernel and ~_K analysis.")
    analyze.add_argument("path", type=str, help="Cayley-table or Rees-spec JSON file.")

    decide = subparsers.add_parser("decide", parents=[common], help="Decide the e.d. property.")
    decide.add_argument("path", type=str, help="Cayley-table or Rees-spec JSON file.")
    decide.add_argument(
        "--oracle", action="store_true", help="Cross-check with the algebraicity oracle."
    )

    solve = subparsers.add_parser("solve", parents=[common], help="Solve a system of equations.")
    solve.add_argument("path", type=str, help="Cayley-table or Rees-spec JSON file.")
    solve.add_argument("system", type=str, help="System file (`vars n` header).")
    solve.add_argument(
        "--limit", type=int, default=MAX_LISTED_POINTS, help="List solutions up to this many."
    )

    witness = subparsers.add_parser(
        "witness", parents=[common], help="Synthesize a system defining a set."
    )
    witness.add_argument("path", type=str, help="Cayley-table or Rees-spec JSON file.")
    witness.add_argument(
        "--set", type=str, default=None, help="Point list file, or 'msem' or 'mgr-like'."
    )
    witness.add_argument(
        "--point",
        type=str,
        default=None,
        help="Element names of one point; synthesize a term vanishing everywhere else.",
    )
    witness.add_argument("--arity", type=int, default=None, help="Expected arity of the set.")
    witness.add_argument("--out", type=str, default=None, help="Write the system to this file.")

    fixture = subparsers.add_parser("fixture", parents=[common], help="Emit a named fixture.")
    fixture.add_argument("name", type=str, help="Fixture name, e.g. rs240, cyclic, null.")
    fixture.add_argument("params", type=int, nargs="*", help="Fixture parameters.")
    fixture.add_argument("--out", type=str, required=True, help="Output JSON file.")
    fixture.add_argument("--rees", action="store_true", help="Emit the Rees spec instead.")

    census_parser = subparsers.add_parser(
        "census", parents=[common], help="Criterion against oracle on all small semigroups."
    )
    census_parser.add_argument(
        "--max-order", type=int, default=None, help="Largest order, defaults to --oracle-max-order."
    )
    census_parser.add_argument(
        "--up-to-isomorphism", action="store_true", help="One table per isomorphism class."
    )
    return parser


def emit(report: Report, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.to_dict(), indent=1))
    else:
        print(report.render())


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = load_config(peek_config(argv))
    except (ValueError, OSError) as error:
        build_parser().error(str(error))
    parser = build_parser(config)
    args = parser.parse_args(argv)
    budget, run = budget_and_run_from(args)
    logging.basicConfig(
        format=LOG_FORMAT,
        datefmt="%m/%d/%Y %H:%M:%S",
        level=logging.DEBUG if run.verbose else logging.WARNING,
    )
    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](args, budget, run)
    except EdsemError as error:
        report = Report(args.command, {"path": getattr(args, "path", None)})
        report.result = {"error": type(error).__name__, "message": str(error)}
        if isinstance(error, NotAssociative):
            report.result["triple"] = list(error.names)
        report.exit_code = error.exit_code
        logger.error(f"{type(error).__name__}: {error}")
    except OSError as error:
        report = Report(args.command, {"path": getattr(args, "path", None)})
        report.result = {"error": type(error).__name__, "message": str(error)}
        report.exit_code = ValidationError.exit_code
        logger.error(f"Cannot read input: {error}")
    report.seconds = time.perf_counter() - start
    emit(report, run.json)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
