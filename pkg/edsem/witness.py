"""
Constructive synthesis of separating terms and defining systems over an
equational domain.

Every synthesized term takes values in Gamma = {(1, g, 1)}, the copy of the
structure group inside the normalized kernel. A term t_P "vanishes" at Q when
t_P(Q) = (1, 1, 1); the system {t_P(X) = (1, 1, 1) : P not in M} then defines M.

Base terms cover whole slabs {Q : q_k = v}: with d a distinguishing term for
p_k and v, s(X) = d(x_k) * d(v)^-1 vanishes on the slab and not at P. Base terms
are merged pairwise by the group commutator after conjugating the second so
the two values at P do not commute.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .errors import ConstructionFailed, NotDistinguishable
from .groups import find_zero_divisor
from .rees import KernelAnalysis, is_matrix_nonsingular
from .semigroup import FiniteSemigroup
from .terms import (
    DEFAULT_SWEEP_BUDGET,
    Constant,
    Equation,
    PointSet,
    Power,
    Product,
    System,
    Term,
    Variable,
    Word,
    solve_system,
)
from .translations import is_sim_trivial

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_SIZE = 10_000


def is_gamma_valued(
    semigroup: FiniteSemigroup,
    analysis: KernelAnalysis,
    term: Word,
    domain: Union[PointSet, np.ndarray],
) -> bool:
    """True iff every constant of `term` lies in the kernel and its value at every
    point of `domain` lies in Gamma."""
    if not all(c in analysis.kernel for c in term.constants()):
        return False
    points = domain.points() if isinstance(domain, PointSet) else np.asarray(domain)
    if len(points) == 0:
        return True
    values = term.evaluate(semigroup, points)
    return bool(analysis.gamma_subset.mask[values].all())


def invert_term(term: Word, group_order: int) -> Word:
    """t^(|G|-1), the inverse of a Gamma-valued term."""
    if group_order <= 2:
        return term
    return Power(term, group_order - 1)


def _sandwich(analysis: KernelAnalysis, i: int, lam: int) -> Term:
    one = analysis.spec.group.identity
    return Term(
        1,
        [Constant(analysis.from_coords(0, one, i)), Variable(0), Constant(analysis.from_coords(lam, one, 0))],
    )


def _double_sandwich(analysis: KernelAnalysis, i: int, lam: int, j: int, mu: int) -> Term:
    one = analysis.spec.group.identity
    return Term(
        1,
        [
            Constant(analysis.from_coords(0, one, i)),
            Variable(0),
            Constant(analysis.from_coords(lam, one, j)),
            Variable(0),
            Constant(analysis.from_coords(mu, one, 0)),
        ],
    )


def _separates(semigroup: FiniteSemigroup, term: Term, alpha: int, beta: int) -> bool:
    values = term.evaluate(semigroup, np.array([[alpha], [beta]]))
    return bool(values[0] != values[1])


def distinguishing_term(
    semigroup: FiniteSemigroup, analysis: KernelAnalysis, alpha: int, beta: int
) -> Term:
    """A unary Gamma-valued term t with t(alpha) != t(beta).

    Searches (1,1,i)*x*(lambda,1,1) in lexicographic (i, lambda) order, then
    (1,1,i)*x*(lambda,1,j)*x*(mu,1,1).

    Raises:
        NotDistinguishable: if alpha == beta, the matrix is singular, or no
            kernel-constant term separates the pair (alpha ~_K beta).
    """
    names = (semigroup.name(alpha), semigroup.name(beta))
    if alpha == beta:
        raise NotDistinguishable(*names, reason="the elements are equal")
    verdict = is_matrix_nonsingular(analysis.spec)
    if not verdict.nonsingular:
        raise NotDistinguishable(*names, reason=f"sandwich matrix is singular ({verdict})")
    spec = analysis.spec
    for i in range(spec.i_size):
        for lam in range(spec.lambda_size):
            term = _sandwich(analysis, i, lam)
            if _separates(semigroup, term, alpha, beta):
                return term
    for i in range(spec.i_size):
        for lam in range(spec.lambda_size):
            for j in range(spec.i_size):
                for mu in range(spec.lambda_size):
                    term = _double_sandwich(analysis, i, lam, j, mu)
                    if _separates(semigroup, term, alpha, beta):
                        return term
    raise NotDistinguishable(*names, reason="the elements act identically on the kernel")


@dataclass(frozen=True)
class Hypothesis:
    """A Gamma-valued term with its group value at the target point P."""

    word: Word
    value: int


@dataclass
class Trace:
    base_terms: int = 0
    merges: int = 0
    conjugations: int = 0


class Synthesizer:
    """
    Builds T_P terms over one semigroup, memoizing distinguishing and base terms.

    Raises:
        ConstructionFailed: on creation, if S is not in the constructive branch
            (singular matrix, zero-divisors in G, nontrivial ~_K or |G| = 1).
    """

    def __init__(self, semigroup: FiniteSemigroup, analysis: KernelAnalysis) -> None:
        self.semigroup = semigroup
        self.analysis = analysis
        self.group = analysis.spec.group
        self._distinguishing: Dict[Tuple[int, int], Term] = {}
        self._base: Dict[Tuple[int, int, int, int], Hypothesis] = {}
        self.trace = Trace()
        # guards the caches and the trace, shared by defining_system workers
        self._lock = threading.Lock()
        self._check_preconditions()

    def _check_preconditions(self) -> None:
        verdict = is_matrix_nonsingular(self.analysis.spec)
        if not verdict.nonsingular:
            raise ConstructionFailed(f"Kernel is not an e.d.: {verdict}")
        witness = find_zero_divisor(self.group)
        if witness is not None:
            x, y = witness.render(self.group)
            raise ConstructionFailed(f"Kernel is not an e.d.: ZeroDivisor({x},{y})")
        sim = is_sim_trivial(self.semigroup, self.analysis.kernel)
        if not sim.trivial:
            a, b = (self.semigroup.name(x) for x in sim.pair)  # type: ignore
            raise ConstructionFailed(f"~_K is not trivial: NontrivialSim({a},{b})")
        if len(self.group) == 1:
            raise ConstructionFailed("Structure group is trivial, no term separates points")

    def distinguishing(self, alpha: int, beta: int) -> Term:
        key = (alpha, beta)
        with self._lock:
            found = self._distinguishing.get(key)
        if found is None:
            found = distinguishing_term(self.semigroup, self.analysis, alpha, beta)
            with self._lock:
                found = self._distinguishing.setdefault(key, found)
        return found

    def gamma_value_of(self, term: Term, x: int) -> int:
        value = self.semigroup.product(
            x if atom.variable else atom.index for atom in term.atoms
        )
        return self.analysis.gamma_value(value)

    def constant(self, arity: int) -> Hypothesis:
        """(1, g, 1) with g the first non-identity group element."""
        g = next(g for g in range(len(self.group)) if g != self.group.identity)
        return Hypothesis(Term.constant(arity, self.analysis.gamma(g)), g)

    def base(self, arity: int, k: int, p: int, v: int) -> Hypothesis:
        """s(X) = d(x_k) * d(v)^-1, vanishing whenever x_k = v and not at x_k = p."""
        key = (arity, k, p, v)
        with self._lock:
            found = self._base.get(key)
        if found is not None:
            return found
        d = self.distinguishing(p, v)
        at_p = self.gamma_value_of(d, p)
        at_v = self.gamma_value_of(d, v)
        correction = self.group.inv(at_v)
        atoms = d.substitute(arity, [k]).atoms + (Constant(self.analysis.gamma(correction)),)
        hypothesis = Hypothesis(Term(arity, atoms), self.group.multiply(at_p, correction))
        with self._lock:
            if key not in self._base:
                self._base[key] = hypothesis
                self.trace.base_terms += 1
            return self._base[key]

    def conjugator(self, g1: int, g2: int) -> int:
        """First h in index order with g1 and h g2 h^-1 not commuting.

        Raises:
            ConstructionFailed: if none exists (g1 is then a zero-divisor).
        """
        for h in range(len(self.group)):
            if not self.group.commute(g1, self.group.conjugate(g2, h)):
                return h
        raise ConstructionFailed(
            f"{self.group.name(g1)} commutes with every conjugate of {self.group.name(g2)}"
        )

    def conjugate(self, hypothesis: Hypothesis, h: int) -> Hypothesis:
        """(1,h,1) * t * (1,h^-1,1); vanishing points are preserved."""
        if h == self.group.identity:
            return hypothesis
        word = hypothesis.word
        left = Term.constant(word.arity, self.analysis.gamma(h))
        right = Term.constant(word.arity, self.analysis.gamma(self.group.inv(h)))
        return Hypothesis(
            Product([left, word, right]), self.group.conjugate(hypothesis.value, h)
        )

    def merge(self, first: Hypothesis, second: Hypothesis) -> Hypothesis:
        """t^-1 s'^-1 t s' with s' a conjugate of `second`; vanishes where either does."""
        h = self.conjugator(first.value, second.value)
        conjugated = self.conjugate(second, h)
        with self._lock:
            self.trace.conjugations += h != self.group.identity
        order = len(self.group)
        word = Product(
            [
                invert_term(first.word, order),
                invert_term(conjugated.word, order),
                first.word,
                conjugated.word,
            ]
        )
        value = self.group.commutator(first.value, conjugated.value)
        if value == self.group.identity:
            raise ConstructionFailed("Commutator of the chosen values is trivial")
        with self._lock:
            self.trace.merges += 1
        return Hypothesis(word, value)

    def combine(self, hypotheses: List[Hypothesis]) -> Hypothesis:
        """Balanced pairwise merging."""
        while len(hypotheses) > 1:
            merged = [
                self.merge(hypotheses[k], hypotheses[k + 1])
                for k in range(0, len(hypotheses) - 1, 2)
            ]
            if len(hypotheses) % 2:
                merged.append(hypotheses[-1])
            hypotheses = merged
        return hypotheses[0]

    def slabs(
        self, point: Sequence[int], others: Optional[np.ndarray]
    ) -> List[Tuple[int, int]]:
        """Slabs (k, v) covering `others`, or all of S^n minus the point when None.

        A point Q is assigned to (k, q_k) for the first coordinate k where it
        differs from P; points are visited in descending code order.
        """
        arity = len(point)
        if others is None:
            return [
                (k, v)
                for k in range(arity)
                for v in range(len(self.semigroup) - 1, -1, -1)
                if v != point[k]
            ]
        if len(others) == 0:
            return []
        others = others[::-1]
        differs = others != np.asarray(point)[None, :]
        first = differs.argmax(axis=1)
        values = others[np.arange(len(others)), first]
        keys = first * len(self.semigroup) + values
        _, where = np.unique(keys, return_index=True)
        ordered = keys[np.sort(where)]
        return [(int(key) // len(self.semigroup), int(key) % len(self.semigroup)) for key in ordered]

    def tp_term(self, point: Sequence[int], others: Optional[np.ndarray]) -> Hypothesis:
        point = tuple(int(v) for v in point)
        arity = len(point)
        slabs = self.slabs(point, others)
        if not slabs:
            return self.constant(arity)
        return self.combine([self.base(arity, k, point[k], v) for k, v in slabs])


def _vanishing_points(semigroup: FiniteSemigroup, point: Sequence[int], domain: PointSet) -> np.ndarray:
    points = domain.points()
    keep = (points != np.asarray(point)[None, :]).any(axis=1)
    return points[keep]


def _check_tp_term(
    semigroup: FiniteSemigroup,
    analysis: KernelAnalysis,
    word: Word,
    point: Sequence[int],
    others: np.ndarray,
) -> None:
    one = analysis.gamma_identity
    at_point = word.evaluate(semigroup, np.asarray([point]))[0]
    if at_point == one or not analysis.gamma_subset.mask[at_point]:
        raise ConstructionFailed(f"Synthesized term has value {semigroup.name(int(at_point))} at P")
    if len(others):
        values = word.evaluate(semigroup, others)
        bad = np.flatnonzero(values != one)
        if len(bad):
            shown = [semigroup.name(int(v)) for v in others[bad[0]]]
            raise ConstructionFailed(f"Synthesized term does not vanish at {shown}")


def _random_points(
    semigroup: FiniteSemigroup, point: Sequence[int], sample_size: int, seed: int
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    sample = rng.integers(0, len(semigroup), size=(sample_size, len(point)))
    return sample[(sample != np.asarray(point)[None, :]).any(axis=1)]


def build_tp_term(
    semigroup: FiniteSemigroup,
    analysis: KernelAnalysis,
    point: Sequence[int],
    domain: Optional[PointSet] = None,
    verify: bool = True,
    sweep_budget: int = DEFAULT_SWEEP_BUDGET,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 42,
    synthesizer: Optional[Synthesizer] = None,
) -> Word:
    """A Gamma-valued term t with t(P) != (1,1,1) and t(Q) = (1,1,1) for Q in M \\ {P}.

    `domain=None` stands for all of S^n; the term is then checked exhaustively
    when |S|^n fits the sweep budget and on P plus `sample_size` random points
    otherwise.

    Raises:
        ConstructionFailed: if S is outside the constructive branch or a check fails.
    """
    synthesizer = synthesizer or Synthesizer(semigroup, analysis)
    others = None if domain is None else _vanishing_points(semigroup, point, domain)
    hypothesis = synthesizer.tp_term(point, others)
    logger.debug(
        f"T_P term for {[semigroup.name(v) for v in point]}: length {hypothesis.word.length}"
    )
    if verify:
        if others is None:
            if len(semigroup) ** len(point) <= sweep_budget:
                others = _vanishing_points(
                    semigroup, point, PointSet.full(semigroup, len(point), sweep_budget)
                )
            else:
                others = _random_points(semigroup, point, sample_size, seed)
        _check_tp_term(semigroup, analysis, hypothesis.word, point, others)
    return hypothesis.word


def defining_system(
    semigroup: FiniteSemigroup,
    analysis: Optional[KernelAnalysis],
    target: PointSet,
    threads: int = 1,
    sweep_budget: int = DEFAULT_SWEEP_BUDGET,
    verify: bool = True,
    progress: bool = False,
) -> System:
    """{t_P(X) = (1,1,1) : P not in M}, whose solution set is exactly M.

    Raises:
        SweepBudgetExceeded: if |S|^n exceeds the sweep budget.
        ConstructionFailed: outside the constructive branch, or if verification fails.
    """
    arity = target.arity
    full = PointSet.full(semigroup, arity, sweep_budget)
    if target == full:
        return System(arity, [])
    if len(semigroup) == 1 or analysis is None:
        raise ConstructionFailed("The trivial semigroup defines no proper subset")
    synthesizer = Synthesizer(semigroup, analysis)
    members = target.points()
    missing = target.complement().points()
    one = Term.constant(arity, analysis.gamma_identity)

    def equation(point: np.ndarray) -> Equation:
        return Equation(synthesizer.tp_term(point, members).word, one)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        equations = list(
            tqdm(
                pool.map(equation, missing),
                total=len(missing),
                disable=not progress,
                desc="Synthesizing",
            )
        )
    system = System(arity, equations)
    logger.info(
        f"Defining system: {len(system)} equations, {synthesizer.trace.base_terms} base terms, "
        f"{synthesizer.trace.merges} merges"
    )
    if verify:
        solution = solve_system(semigroup, system, sweep_budget, progress=progress)
        if solution != target:
            raise ConstructionFailed(
                f"Solution set has {len(solution)} points, expected {len(target)}"
            )
    return system
