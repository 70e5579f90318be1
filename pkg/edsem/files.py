"""Reading and writing Cayley tables, Rees specs, point lists and system files."""
import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from .errors import ValidationError
from .groups import group_from_semigroup
from .rees import DEFAULT_SIZE_CAP, ReesSpec, build_cayley_from_rees, rees_spec_from_names
from .semigroup import FiniteSemigroup, validate_cayley
from .terms import DEFAULT_SWEEP_BUDGET, PointSet, System, format_system, parse_system
from .utils import content_hash

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadedSemigroup:
    """A validated input together with its source document."""

    semigroup: FiniteSemigroup
    payload: Dict[str, Any]
    spec: Optional[ReesSpec] = None

    @property
    def digest(self) -> str:
        return content_hash(self.payload)

    @property
    def kind(self) -> str:
        return "rees" if self.spec is not None else "cayley"


def semigroup_from_dict(payload: Dict[str, Any]) -> FiniteSemigroup:
    """Validate {"elements": [...], "table": [[...]]}.

    Raises:
        ValidationError: for missing keys or any table defect.
    """
    if "table" not in payload:
        raise ValidationError("Cayley document needs a 'table' entry")
    return validate_cayley(payload["table"], payload.get("elements"))


def rees_spec_from_dict(payload: Dict[str, Any]) -> ReesSpec:
    """Validate {"group": <cayley>, "lambda": m, "i": n, "P": [[names]]}; P has n rows."""
    missing = [key for key in ("group", "lambda", "i", "P") if key not in payload]
    if missing:
        raise ValidationError(f"Rees document misses {missing}")
    if not isinstance(payload["group"], dict):
        raise ValidationError("Rees document needs a Cayley table object as 'group'")
    sizes = (payload["lambda"], payload["i"])
    if not all(isinstance(size, int) and not isinstance(size, bool) for size in sizes):
        raise ValidationError(f"'lambda' and 'i' must be integers, got {sizes}")
    group = group_from_semigroup(semigroup_from_dict(payload["group"]))
    return rees_spec_from_names(group, payload["lambda"], payload["i"], payload["P"])


def rees_spec_to_dict(spec: ReesSpec) -> Dict[str, Any]:
    return {
        "group": spec.group.semigroup.to_dict(),
        "lambda": spec.lambda_size,
        "i": spec.i_size,
        "P": spec.matrix_names(),
    }


def load_semigroup(path: str, size_cap: int = DEFAULT_SIZE_CAP) -> LoadedSemigroup:
    """Load a Cayley-table or Rees-spec JSON file; Rees specs are materialized.

    Raises:
        ValidationError: for malformed documents.
        SizeCapExceeded: if a Rees spec is larger than `size_cap`.
    """
    with open(path, "r") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as error:
            raise ValidationError(f"{path} is not valid JSON: {error}")
    if not isinstance(payload, dict):
        raise ValidationError(f"{path} must hold a JSON object")
    if "group" in payload:
        spec = rees_spec_from_dict(payload)
        semigroup = build_cayley_from_rees(spec, size_cap)
        logger.info(f"Loaded Rees spec from {path}: {len(semigroup)} elements")
        return LoadedSemigroup(semigroup, payload, spec)
    semigroup = semigroup_from_dict(payload)
    logger.info(f"Loaded Cayley table from {path}: {len(semigroup)} elements")
    return LoadedSemigroup(semigroup, payload)


def write_json(path: str, payload: Dict[str, Any]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=1)
    logger.info(f"Wrote {path}")


def parse_points(
    text: str, semigroup: FiniteSemigroup, budget: int = DEFAULT_SWEEP_BUDGET
) -> PointSet:
    """One point per line as whitespace-separated element names; `#` comments.

    An optional first line `vars n` fixes the arity (needed for an empty set).
    """
    arity: Optional[int] = None
    points: List[List[int]] = []
    for number, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "vars" and arity is None and not points:
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ValidationError(f"Line {number}: expected 'vars n'")
            arity = int(tokens[1])
            continue
        if arity is None:
            arity = len(tokens)
        if len(tokens) != arity:
            raise ValidationError(f"Line {number}: point of length {len(tokens)}, expected {arity}")
        try:
            points.append([semigroup.index(token) for token in tokens])
        except KeyError as error:
            raise ValidationError(f"Line {number}: {error.args[0]}")
    if arity is None:
        raise ValidationError("Empty point list without a 'vars n' header")
    return PointSet.from_points(semigroup, arity, points, budget)


def read_points(path: str, semigroup: FiniteSemigroup, budget: int = DEFAULT_SWEEP_BUDGET) -> PointSet:
    with open(path, "r") as f:
        return parse_points(f.read(), semigroup, budget)


def format_points(points: PointSet) -> str:
    lines = [f"vars {points.arity}"] + [" ".join(point) for point in points.render()]
    return "\n".join(lines) + "\n"


def read_system(path: str, semigroup: FiniteSemigroup) -> System:
    with open(path, "r") as f:
        return parse_system(f.read(), semigroup)


def write_system(path: str, semigroup: FiniteSemigroup, system: System, header: str = "") -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(format_system(semigroup, system, header))
    logger.info(f"Wrote {len(system)} equations to {path}")
