"""The equational-domain criterion for finite semigroups, with re-checkable certificates.

A finite semigroup S is an e.d. iff its kernel K is an e.d. (nonsingular
sandwich matrix over a group without zero-divisors) and ~_K is trivial. A
nontrivial semigroup with a zero is never an e.d.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from tqdm import tqdm

from .groups import ZeroDivisorWitness, find_zero_divisor
from .rees import KernelAnalysis, analyze_kernel, is_matrix_nonsingular
from .semigroup import ElementSet, FiniteSemigroup, enumerate_semigroups, has_zero
from .terms import (
    DEFAULT_CLOSURE_BUDGET,
    DEFAULT_SWEEP_BUDGET,
    Inconclusive,
    PointSet,
    algebraic_closure,
)
from .translations import BoundReport, bound_checks, is_sim_trivial, show_number, sim_partition
from .utils import mixed_radix_points

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    ED = "ED"
    NOT_ED = "NotED"


@dataclass(frozen=True)
class Positive:
    lambda_size: int
    i_size: int
    group_order: int
    matrix: Tuple[Tuple[str, ...], ...]
    matrix_verdict: str = "Nonsingular"
    group_is_ed: bool = True
    sim_trivial: bool = True

    def __str__(self) -> str:
        return (
            f"Positive(|G|={self.group_order}, |Lambda|={self.lambda_size}, "
            f"|I|={self.i_size}, P nonsingular, G zero-divisor free, ~_K trivial)"
        )


@dataclass(frozen=True)
class HasZero:
    zero: str

    def __str__(self) -> str:
        return f"HasZero({self.zero})"


@dataclass(frozen=True)
class SingularMatrix:
    kind: str
    pair: Tuple[int, int]

    def __str__(self) -> str:
        which = "rows" if self.kind == "equal_rows" else "columns"
        return f"SingularMatrix({which} {self.pair[0] + 1},{self.pair[1] + 1})"


@dataclass(frozen=True)
class ZeroDivisor:
    x: str
    y: str

    def __str__(self) -> str:
        return f"ZeroDivisor({self.x},{self.y})"


@dataclass(frozen=True)
class NontrivialSim:
    alpha: str
    beta: str

    def __str__(self) -> str:
        return f"NontrivialSim({self.alpha},{self.beta})"


@dataclass(frozen=True)
class BoundViolation:
    bound_name: str
    bound: int
    size: int

    def __str__(self) -> str:
        return f"BoundViolation({self.bound_name}: |S|={self.size} > {show_number(self.bound)})"


Certificate = Union[Positive, HasZero, SingularMatrix, ZeroDivisor, NontrivialSim, BoundViolation]


@dataclass
class Decision:
    verdict: Verdict
    certificate: Certificate
    analysis: Optional[KernelAnalysis] = field(default=None, repr=False, compare=False)
    bounds: Optional[BoundReport] = field(default=None, compare=False)

    @property
    def is_ed(self) -> bool:
        return self.verdict is Verdict.ED

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "verdict": self.verdict.value,
            "certificate": {"kind": type(self.certificate).__name__, "text": str(self.certificate)},
        }
        for key, value in vars(self.certificate).items():
            payload["certificate"][key] = _jsonable(value)
        if self.analysis is not None:
            spec = self.analysis.spec
            payload["kernel"] = {
                "size": len(self.analysis.kernel),
                "group_order": len(spec.group),
                "lambda_size": spec.lambda_size,
                "i_size": spec.i_size,
            }
        if self.bounds is not None:
            payload["bounds"] = [
                {
                    "name": check.name,
                    "bound": show_number(check.bound),
                    "size": check.size,
                    "violated": check.violated,
                }
                for check in (self.bounds.ideal_bound, self.bounds.kernel_bound)
            ]
        return payload


def _jsonable(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, int) and not isinstance(value, bool):
        return value if abs(value) < 2**53 else show_number(value)
    return value


def _negative(
    certificate: Certificate,
    analysis: Optional[KernelAnalysis] = None,
    bounds: Optional[BoundReport] = None,
) -> Decision:
    logger.info(f"NotED: {certificate}")
    return Decision(Verdict.NOT_ED, certificate, analysis, bounds)


def decide_ed(semigroup: FiniteSemigroup, use_bounds: bool = False) -> Decision:
    """Decide whether S is an equational domain.

    Checks run cheapest first and the first failure becomes the certificate:
    zero element, kernel matrix, zero-divisors of the structure group,
    (optionally) the cardinality bounds, then triviality of ~_K.

    Raises:
        NotCompletelySimple: if the kernel cannot be coordinatized.
    """
    if len(semigroup) > 1:
        zero = has_zero(semigroup)
        if zero is not None:
            return _negative(HasZero(semigroup.name(zero)))
    analysis = analyze_kernel(semigroup)
    spec = analysis.spec
    verdict = is_matrix_nonsingular(spec)
    if not verdict.nonsingular:
        return _negative(SingularMatrix(verdict.kind, verdict.pair), analysis)  # type: ignore
    witness = find_zero_divisor(spec.group)
    if witness is not None:
        return _negative(
            ZeroDivisor(
                semigroup.name(analysis.gamma(witness.x)), semigroup.name(analysis.gamma(witness.y))
            ),
            analysis,
        )
    bounds = bound_checks(semigroup, analysis)
    if use_bounds and bounds.violated is not None:
        check = bounds.violated
        return _negative(BoundViolation(check.name, check.bound, check.size), analysis, bounds)
    sim = is_sim_trivial(semigroup, analysis.kernel)
    if not sim.trivial:
        alpha, beta = sim.pair  # type: ignore
        return _negative(
            NontrivialSim(semigroup.name(alpha), semigroup.name(beta)), analysis, bounds
        )
    certificate = Positive(
        lambda_size=spec.lambda_size,
        i_size=spec.i_size,
        group_order=len(spec.group),
        matrix=tuple(tuple(row) for row in spec.matrix_names()),
    )
    logger.info(f"ED: {certificate}")
    return Decision(Verdict.ED, certificate, analysis, bounds)


def is_homogroup(semigroup: FiniteSemigroup) -> bool:
    """Whether the kernel is a subgroup (|Lambda| = |I| = 1)."""
    spec = analyze_kernel(semigroup).spec
    return spec.lambda_size == 1 and spec.i_size == 1


def _translations_agree(semigroup: FiniteSemigroup, ideal: ElementSet, a: int, b: int) -> bool:
    members = ideal.indices
    table = semigroup.table
    return bool(
        np.array_equal(table[a, members], table[b, members])
        and np.array_equal(table[members, a], table[members, b])
    )


def verify_certificate(semigroup: FiniteSemigroup, decision: Decision) -> bool:
    """Re-check a certificate from scratch with independent operations."""
    certificate = decision.certificate
    if isinstance(certificate, HasZero):
        z = semigroup.index(certificate.zero)
        table = semigroup.table
        return len(semigroup) > 1 and bool((table[z] == z).all() and (table[:, z] == z).all())
    analysis = analyze_kernel(semigroup)
    spec = analysis.spec
    if isinstance(certificate, SingularMatrix):
        a, b = certificate.pair
        p = spec.matrix
        if certificate.kind == "equal_rows":
            return a != b and bool(np.array_equal(p[a], p[b]))
        return a != b and bool(np.array_equal(p[:, a], p[:, b]))
    if isinstance(certificate, ZeroDivisor):
        group = spec.group
        x = analysis.gamma_value(semigroup.index(certificate.x))
        y = analysis.gamma_value(semigroup.index(certificate.y))
        return ZeroDivisorWitness(x, y).verify(group)
    if isinstance(certificate, NontrivialSim):
        a, b = semigroup.index(certificate.alpha), semigroup.index(certificate.beta)
        return a != b and _translations_agree(semigroup, analysis.kernel, a, b)
    if isinstance(certificate, BoundViolation):
        checks = bound_checks(semigroup, analysis)
        matching = [
            c for c in (checks.ideal_bound, checks.kernel_bound) if c.name == certificate.bound_name
        ]
        return bool(matching) and matching[0].violated and matching[0].bound == certificate.bound
    if isinstance(certificate, Positive):
        nonsingular = is_matrix_nonsingular(spec).nonsingular
        zero_divisor_free = find_zero_divisor(spec.group) is None
        partition = sim_partition(semigroup, analysis.kernel)
        return (
            nonsingular
            and zero_divisor_free
            and len(partition) == len(semigroup)
            and spec.lambda_size == certificate.lambda_size
            and spec.i_size == certificate.i_size
        )
    raise TypeError(f"Unknown certificate {certificate!r}")


def msem(semigroup: FiniteSemigroup, budget: int = DEFAULT_SWEEP_BUDGET) -> PointSet:
    """{(x1, x2, x3, x4) : x1 = x2 or x3 = x4}."""
    full = PointSet.full(semigroup, 4, budget)
    points = mixed_radix_points(len(semigroup), 4)
    mask = (points[:, 0] == points[:, 1]) | (points[:, 2] == points[:, 3])
    return PointSet(semigroup, full.arity, mask)


def mgr_like(
    semigroup: FiniteSemigroup,
    analysis: Optional[KernelAnalysis] = None,
    budget: int = DEFAULT_SWEEP_BUDGET,
) -> PointSet:
    """{(x1, x2) : x1 = e or x2 = e} with e = (1,1,1) the identity of Gamma."""
    analysis = analysis or analyze_kernel(semigroup)
    e = analysis.gamma_identity
    full = PointSet.full(semigroup, 2, budget)
    points = mixed_radix_points(len(semigroup), 2)
    return PointSet(semigroup, full.arity, (points[:, 0] == e) | (points[:, 1] == e))


@dataclass
class OracleReport:
    decision: Decision
    oracle: Union[Verdict, Inconclusive]
    # points of S^4 in the algebraic closure of M_sem
    closure_points: Optional[int] = None

    @property
    def agree(self) -> bool:
        return not isinstance(self.oracle, Inconclusive) and self.oracle is self.decision.verdict

    def __str__(self) -> str:
        if isinstance(self.oracle, Inconclusive):
            return f"Inconclusive({self.oracle.reason})"
        if self.agree:
            return f"Agree({self.decision.verdict.value})"
        return (
            f"Disagree(criterion={self.decision.verdict.value}, oracle={self.oracle.value}, "
            f"certificate={self.decision.certificate})"
        )


def cross_check_with_oracle(
    semigroup: FiniteSemigroup,
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    max_order: int = 3,
    decision: Optional[Decision] = None,
) -> OracleReport:
    """Compare the criterion with the literal test "M_sem is algebraic".

    Raises:
        ValueError: if |S| exceeds `max_order`.
    """
    if len(semigroup) > max_order:
        raise ValueError(f"Oracle accepts semigroups of order <= {max_order}, got {len(semigroup)}")
    decision = decision or decide_ed(semigroup)
    target = msem(semigroup)
    closure = algebraic_closure(semigroup, target, closure_budget)
    if isinstance(closure, Inconclusive):
        report = OracleReport(decision, closure)
    else:
        oracle = Verdict.ED if closure == target else Verdict.NOT_ED
        report = OracleReport(decision, oracle, len(closure))
    if isinstance(report.oracle, Inconclusive) or not report.agree:
        logger.warning(f"Oracle cross-check: {report}")
    else:
        logger.debug(f"Oracle cross-check: {report}")
    return report


def census(
    order: int,
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    up_to_isomorphism: bool = False,
    progress: bool = False,
    use_bounds: bool = False,
    max_order: int = 3,
) -> List[Tuple[FiniteSemigroup, OracleReport]]:
    """Criterion and oracle over every semigroup of the given order.

    Raises:
        ValueError: if `order` exceeds `max_order`, the largest order the oracle accepts.
    """
    if order > max_order:
        raise ValueError(f"Census of order {order} exceeds the oracle limit {max_order}")
    results = []
    semigroups = list(enumerate_semigroups(order, up_to_isomorphism=up_to_isomorphism))
    for semigroup in tqdm(semigroups, disable=not progress, desc=f"Order {order}"):
        decision = decide_ed(semigroup, use_bounds=use_bounds)
        report = cross_check_with_oracle(semigroup, closure_budget, max_order, decision)
        results.append((semigroup, report))
    return results
