import argparse
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional, Sequence, Tuple

from .utils import available_cores


@dataclass
class BudgetArguments:
    """
    Limits that keep exhaustive computations within desk scale.

    NOTE: Every limit fails loudly (see `edsem.errors.BudgetError`) or degrades to a
    sampled check with a warning; none of them changes a verdict silently.
    """

    size_cap: int = 4096
    sweep_budget: int = 2_000_000
    closure_budget: int = 50_000
    oracle_max_order: int = 3
    sample_size: int = 10_000


@dataclass
class RunArguments:
    """Arguments shared by all commands."""

    threads: int = field(default_factory=available_cores)
    seed: int = 42
    json: bool = False
    verbose: bool = False
    use_bounds: bool = False


SWITCHES = {
    "json": "Emit the report as a JSON document.",
    "verbose": "Log debug output and show progress bars.",
    "use_bounds": "Let a violated cardinality bound decide NotED before the ~_K sweep.",
}


def load_config(path: Optional[str]) -> Dict[str, Any]:
    """Load a JSON parameter file and reject keys no argument class knows.

    Args:
        path: path to the `.json` file or None.

    Raises:
        ValueError: if the file contains unknown keys.

    Returns:
        the parameters as a dict (empty if no path is given).
    """
    if path is None:
        return {}
    with open(path, "r") as f:
        params = json.load(f)
    if not isinstance(params, dict):
        raise ValueError(f"Config {path} must hold a JSON object")
    known = {f.name for f in fields(BudgetArguments)} | {
        f.name for f in fields(RunArguments)
    }
    unknown = sorted(set(params) - known)
    if unknown:
        raise ValueError(f"Unknown keys in config {path}: {unknown}")
    return params


def peek_config(argv: Optional[Sequence[str]] = None) -> Optional[str]:
    """The `--config` path among `argv`, if any, before the full parser exists."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", type=str, default=None)
    known, _ = parser.parse_known_args(argv)
    return known.config


def add_budget_and_run_arguments(
    parser: argparse.ArgumentParser, config: Optional[Dict[str, Any]] = None
) -> None:
    """Budget and run flags; values from `config` replace the built-in defaults.

    Every switch comes with a `--no-` form so a config file value can be turned off.
    """
    defaults = {**asdict(BudgetArguments()), **asdict(RunArguments()), **(config or {})}
    parser.add_argument(
        "--size-cap",
        type=int,
        default=defaults["size_cap"],
        help="Maximal number of elements when materializing a Rees spec.",
    )
    parser.add_argument(
        "--sweep-budget",
        "--budget-sweep",
        dest="sweep_budget",
        type=int,
        default=defaults["sweep_budget"],
        help="Maximal number of points of S^n visited by an exhaustive sweep.",
    )
    parser.add_argument(
        "--closure-budget",
        "--budget-closure",
        dest="closure_budget",
        type=int,
        default=defaults["closure_budget"],
        help="Maximal number of term functions in the algebraicity oracle.",
    )
    parser.add_argument(
        "--oracle-max-order",
        type=int,
        default=defaults["oracle_max_order"],
        help="Largest semigroup order the oracle cross-check accepts.",
    )
    parser.add_argument(
        "--sample-size",
        type=int,
        default=defaults["sample_size"],
        help="Number of random points for checks that are too big to be exhaustive.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=defaults["threads"],
        help="Worker threads for parallel synthesis. Defaults to all cores.",
    )
    parser.add_argument(
        "--seed", type=int, default=defaults["seed"], help="Seed for sampled checks."
    )
    for name, help_text in SWITCHES.items():
        flag = name.replace("_", "-")
        switch = parser.add_mutually_exclusive_group()
        switch.add_argument(
            f"--{flag}", dest=name, action="store_true", default=bool(defaults[name]), help=help_text
        )
        switch.add_argument(
            f"--no-{flag}", dest=name, action="store_false", default=bool(defaults[name])
        )


def budget_and_run_from(namespace: argparse.Namespace) -> Tuple[BudgetArguments, RunArguments]:
    budget = BudgetArguments(**{f.name: getattr(namespace, f.name) for f in fields(BudgetArguments)})
    run = RunArguments(**{f.name: getattr(namespace, f.name) for f in fields(RunArguments)})
    return budget, run
