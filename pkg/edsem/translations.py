"""Inner translations of ideals, the ~_I equivalence and the kernel cardinality bounds."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import FormulaMismatch, NotAnIdeal
from .rees import KernelAnalysis
from .semigroup import ElementSet, FiniteSemigroup, is_ideal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActionTriple:
    """How an element alpha acts on the kernel: g_alpha, Lambda_alpha and I_alpha."""

    g_alpha: int
    lambda_map: Tuple[int, ...]
    i_map: Tuple[int, ...]


def multiplication_indices(
    semigroup: FiniteSemigroup, analysis: KernelAnalysis, alpha: int
) -> Tuple[int, int, int]:
    """(g_alpha, lambda_alpha, i_alpha) with alpha(1,1,1) = (lambda_alpha, g_alpha, 1)
    and (1,1,1)alpha = (1, g_alpha, i_alpha).

    Raises:
        FormulaMismatch: if the two group parts disagree.
    """
    one = analysis.gamma_identity
    lam_alpha, g_alpha, i_left = analysis.to_coords(semigroup.multiply(alpha, one))
    lam_right, g_right, i_alpha = analysis.to_coords(semigroup.multiply(one, alpha))
    if i_left != 0 or lam_right != 0 or g_alpha != g_right:
        raise FormulaMismatch(
            f"Products of {semigroup.name(alpha)} with (1,1,1) are inconsistent"
        )
    return g_alpha, lam_alpha, i_alpha


def action_triple(
    semigroup: FiniteSemigroup, analysis: KernelAnalysis, alpha: int
) -> ActionTriple:
    """Compute and exhaustively verify the action of alpha on the kernel.

    For all lambda, g, i:
        alpha(lambda,1,1) = (Lambda(lambda), g_alpha p[I(1)][lambda], 1)
        (1,1,i)alpha      = (1, p[i][Lambda(1)] g_alpha, I(i))
        alpha(lambda,g,i) = (Lambda(lambda), g_alpha p[I(1)][lambda] g, i)
        (lambda,g,i)alpha = (lambda, g p[i][Lambda(1)] g_alpha, I(i))

    Raises:
        FormulaMismatch: if any product disagrees (signals a kernel-analysis bug).
    """
    spec = analysis.spec
    group = spec.group
    identity = group.identity
    table = semigroup.table
    gtable = group.table
    p = spec.matrix
    g_alpha, lambda_alpha, i_alpha = multiplication_indices(semigroup, analysis, alpha)
    lambda_map = tuple(
        analysis.to_coords(semigroup.multiply(alpha, analysis.from_coords(lam, identity, 0))).lam
        for lam in range(spec.lambda_size)
    )
    i_map = tuple(
        analysis.to_coords(semigroup.multiply(analysis.from_coords(0, identity, i), alpha)).i
        for i in range(spec.i_size)
    )
    if lambda_map[0] != lambda_alpha or i_map[0] != i_alpha:
        raise FormulaMismatch("Lambda_alpha(1), I_alpha(1) differ from lambda_alpha, i_alpha")
    triple = ActionTriple(g_alpha, lambda_map, i_map)

    lam_grid, g_grid, i_grid = np.meshgrid(
        np.arange(spec.lambda_size),
        np.arange(len(group)),
        np.arange(spec.i_size),
        indexing="ij",
    )
    lam, g, i = lam_grid.ravel(), g_grid.ravel(), i_grid.ravel()
    lambdas = np.asarray(lambda_map)
    i_s = np.asarray(i_map)
    elements = analysis.elements[lam, g, i]

    left = analysis.coords[table[alpha, elements]]
    expected_left_g = gtable[gtable[g_alpha, p[i_map[0], lam]], g]
    right = analysis.coords[table[elements, alpha]]
    expected_right_g = gtable[gtable[g, p[i, lambda_map[0]]], g_alpha]
    checks = [
        np.array_equal(left[:, 0], lambdas[lam]),
        np.array_equal(left[:, 1], expected_left_g),
        np.array_equal(left[:, 2], i),
        np.array_equal(right[:, 0], lam),
        np.array_equal(right[:, 1], expected_right_g),
        np.array_equal(right[:, 2], i_s[i]),
    ]
    if not all(checks):
        raise FormulaMismatch(
            f"Action of {semigroup.name(alpha)} on the kernel violates the product formulas"
        )
    return triple


@dataclass(frozen=True, eq=False)
class SimPartition:
    """Partition of S by ~_I: alpha ~ beta iff alpha x = beta x and x alpha = x beta on I."""

    ideal: ElementSet
    classes: Tuple[Tuple[int, ...], ...]

    def class_of(self, x: int) -> Tuple[int, ...]:
        for members in self.classes:
            if x in members:
                return members
        raise ValueError(f"{x} is not an element")

    def __len__(self) -> int:
        return len(self.classes)

    def render(self) -> List[List[str]]:
        parent = self.ideal.parent
        return [[parent.name(x) for x in members] for members in self.classes]


def _translation_keys(semigroup: FiniteSemigroup, ideal: ElementSet) -> np.ndarray:
    members = ideal.indices
    table = semigroup.table
    return np.concatenate([table[:, members], table[members].T], axis=1)


def sim_partition(semigroup: FiniteSemigroup, ideal: ElementSet) -> SimPartition:
    """Group the elements of S by their left and right translations of the ideal.

    Classes are listed with elements outside the ideal first, then by index.

    Raises:
        NotAnIdeal: if `ideal` is not a two-sided ideal of S.
    """
    if not is_ideal(semigroup, ideal):
        raise NotAnIdeal(f"{ideal} is not a two-sided ideal")
    keys = _translation_keys(semigroup, ideal)
    buckets: Dict[bytes, List[int]] = {}
    for alpha in range(len(semigroup)):
        buckets.setdefault(keys[alpha].tobytes(), []).append(alpha)
    classes = []
    for members in buckets.values():
        members.sort(key=lambda x: (bool(ideal.mask[x]), x))
        classes.append(tuple(members))
    classes.sort(key=lambda members: min(members))
    return SimPartition(ideal, tuple(classes))


@dataclass(frozen=True)
class SimVerdict:
    trivial: bool
    pair: Optional[Tuple[int, int]] = None


def is_sim_trivial(semigroup: FiniteSemigroup, ideal: ElementSet) -> SimVerdict:
    """Trivial, or the first two members of the first class with more than one element."""
    partition = sim_partition(semigroup, ideal)
    for members in partition.classes:
        if len(members) > 1:
            return SimVerdict(False, (members[0], members[1]))
    return SimVerdict(True)


def is_weakly_reductive(semigroup: FiniteSemigroup) -> bool:
    """S is weakly reductive iff ~_S is trivial."""
    return is_sim_trivial(semigroup, ElementSet.full(semigroup)).trivial


def show_number(value: int) -> str:
    """Decimal digits, or ~10^k beyond 30 digits."""
    digits = str(value)
    return digits if len(digits) <= 30 else f"~10^{len(digits) - 1}"


@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: int
    size: int

    @property
    def violated(self) -> bool:
        return self.size > self.bound

    def __str__(self) -> str:
        state = "ViolatesBound" if self.violated else "WithinBound"
        return f"{state}({self.name}: |S|={self.size}, bound={show_number(self.bound)})"


@dataclass(frozen=True)
class BoundReport:
    ideal_bound: BoundCheck
    kernel_bound: BoundCheck

    @property
    def violated(self) -> Optional[BoundCheck]:
        for check in (self.ideal_bound, self.kernel_bound):
            if check.violated:
                return check
        return None


def bound_checks(semigroup: FiniteSemigroup, analysis: KernelAnalysis) -> BoundReport:
    """Evaluate |S| <= l^(2l) (l = |K|) and |S| <= |G| |Lambda|^|Lambda| |I|^|I|.

    Exceeding either bound forces two elements with the same translations of the
    kernel, so S is not an e.d.; staying within them proves nothing.
    """
    spec = analysis.spec
    size = len(semigroup)
    kernel_size = len(analysis.kernel)
    return BoundReport(
        ideal_bound=BoundCheck("l^(2l)", kernel_size ** (2 * kernel_size), size),
        kernel_bound=BoundCheck(
            "|G||Lambda|^|Lambda||I|^|I|",
            len(spec.group) * spec.lambda_size**spec.lambda_size * spec.i_size**spec.i_size,
            size,
        ),
    )
