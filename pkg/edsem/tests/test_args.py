import argparse
import json

import pytest

from edsem.args import (
    BudgetArguments,
    add_budget_and_run_arguments,
    budget_and_run_from,
    load_config,
    peek_config,
)


def parse(argv, config=None):
    parser = argparse.ArgumentParser()
    add_budget_and_run_arguments(parser, config)
    return budget_and_run_from(parser.parse_args(argv))


def test_defaults():
    budget, run = parse([])
    assert budget == BudgetArguments()
    assert budget.sweep_budget == 2_000_000
    assert budget.size_cap == 4096
    assert not run.json and not run.use_bounds
    assert run.threads >= 1


def test_aliases():
    budget, _ = parse(["--budget-sweep", "7", "--budget-closure", "9"])
    assert (budget.sweep_budget, budget.closure_budget) == (7, 9)
    budget, run = parse(["--sweep-budget", "8", "--use-bounds"])
    assert budget.sweep_budget == 8
    assert run.use_bounds


def test_precedence():
    config = {"sweep_budget": 10, "seed": 3, "size_cap": 100}
    budget, run = parse(["--sweep-budget", "20"], config)
    assert budget.sweep_budget == 20
    assert budget.size_cap == 100
    assert run.seed == 3
    assert budget.closure_budget == BudgetArguments().closure_budget


def test_switches_from_config_can_be_turned_off():
    config = {"use_bounds": True, "json": True}
    _, run = parse([], config)
    assert run.use_bounds and run.json
    _, run = parse(["--no-use-bounds", "--no-json"], config)
    assert not run.use_bounds and not run.json
    with pytest.raises(SystemExit):
        parse(["--use-bounds", "--no-use-bounds"])


def test_peek_config():
    assert peek_config(["decide", "x.json", "--config", "c.json", "--json"]) == "c.json"
    assert peek_config(["decide", "x.json"]) is None


def test_load_config(tmp_path):
    assert load_config(None) == {}
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"threads": 2, "per_device_train_batch_size": 8}))
    with pytest.raises(ValueError, match="per_device_train_batch_size"):
        load_config(str(path))
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(ValueError):
        load_config(str(path))
    path.write_text(json.dumps({"threads": 2, "sweep_budget": 5}))
    assert load_config(str(path)) == {"threads": 2, "sweep_budget": 5}
