"""
Criterion against oracle on every semigroup of small order
"""
import argparse
import json
import logging
import os
import sys
from time import time

from edsem.args import add_budget_and_run_arguments, budget_and_run_from, load_config, peek_config
from edsem.decide import census
from edsem.utils import find_safe_path, get_process_memory

logger = logging.getLogger(__name__)

parser = argparse.ArgumentParser()
parser.add_argument("output_dir", type=str, help="directory for the census summary.")
parser.add_argument(
    "--max_order", type=int, default=None, help="largest semigroup order (oracle_max_order)."
)
parser.add_argument(
    "--up_to_isomorphism", action="store_true", help="one table per isomorphism class."
)
parser.add_argument("--config", type=str, default=None, help="JSON file with budgets.")
add_budget_and_run_arguments(parser, load_config(peek_config()))


def main() -> int:
    args = parser.parse_args()
    budget, run = budget_and_run_from(args)
    max_order = budget.oracle_max_order if args.max_order is None else args.max_order
    if max_order > budget.oracle_max_order:
        parser.error(f"--max_order {max_order} exceeds oracle_max_order {budget.oracle_max_order}")

    logging.basicConfig(
        format="%(asctime)s - %(levelname)s - %(name)s -   %(message)s",
        datefmt="%m/%d/%Y %H:%M:%S",
        level=logging.INFO,
    )

    summary = {}
    disagreements = 0
    for order in range(1, max_order + 1):
        start = time()
        results = census(
            order,
            budget.closure_budget,
            args.up_to_isomorphism,
            progress=True,
            use_bounds=run.use_bounds,
            max_order=budget.oracle_max_order,
        )
        rows = [
            {
                "table": semigroup.to_dict()["table"],
                "criterion": report.decision.verdict.value,
                "certificate": str(report.decision.certificate),
                "oracle": str(report),
            }
            for semigroup, report in results
        ]
        failed = [row for row, (_, report) in zip(rows, results) if not report.agree]
        disagreements += len(failed)
        summary[order] = {
            "semigroups": len(rows),
            "ed": sum(row["criterion"] == "ED" for row in rows),
            "failures": failed,
            "seconds": round(time() - start, 2),
        }
        logger.info(
            f"Order {order}: {len(rows)} semigroups, {len(failed)} failures, "
            f"memory {get_process_memory():.1f}%"
        )

    os.makedirs(args.output_dir, exist_ok=True)
    path = find_safe_path(os.path.join(args.output_dir, "census.json"))
    with open(path, "w") as f:
        json.dump(summary, f, indent=4)
    logger.info(f"Census written to {path}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
