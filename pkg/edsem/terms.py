"""
Terms over a finite semigroup with constants: parsing, evaluation, systems of
equations, brute-force solution sets and the algebraicity oracle.

A term is a product of variables x1..xn and constants (element names). Terms
built by synthesis grow geometrically, so besides the flat `Term` there are lazy
`Product` and `Power` nodes forming a DAG; `expand()` flattens any of them.
Evaluation is vectorized: a word is evaluated on an array of points at once.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pyparsing as pp
from tqdm import tqdm

from .errors import (
    ArityMismatch,
    SizeCapExceeded,
    SweepBudgetExceeded,
    TermSyntaxError,
    UnknownElement,
    VariableOutOfArity,
    ZeroPower,
)
from .semigroup import FiniteSemigroup
from .utils import decode_points, encode_points, mixed_radix_points

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_BUDGET = 2_000_000
DEFAULT_CLOSURE_BUDGET = 50_000
DEFAULT_EXPANSION_LIMIT = 1_000_000

VARIABLE_PATTERN = re.compile(r"x([0-9]+)")
DEFINITION_PATTERN = re.compile(r"@([A-Za-z_][A-Za-z0-9_]*)")


class Atom(NamedTuple):
    variable: bool
    index: int


def Variable(k: int) -> Atom:
    """The variable x_{k+1} (0-based index k)."""
    return Atom(True, k)


def Constant(c: int) -> Atom:
    return Atom(False, c)


class Word:
    """Base class of term nodes. Subclasses must set `arity`."""

    arity: int
    shared: bool = False

    def mark_shared(self) -> "Word":
        """Flag the node for cross-equation caching during evaluation."""
        self.shared = True
        return self

    @property
    def length(self) -> int:
        raise NotImplementedError

    def children(self) -> Tuple["Word", ...]:
        return ()

    def expand(self, max_length: int = DEFAULT_EXPANSION_LIMIT) -> "Term":
        """The flat term; raises SizeCapExceeded beyond `max_length` atoms."""
        if self.length > max_length:
            raise SizeCapExceeded(self.length, max_length, what="Expanded term")
        return Term(self.arity, tuple(self._atoms()))

    def _atoms(self) -> Iterator[Atom]:
        raise NotImplementedError

    def constants(self) -> Set[int]:
        found: Set[int] = set()
        for node in self.walk():
            if isinstance(node, Term):
                found.update(atom.index for atom in node.atoms if not atom.variable)
        return found

    def variables(self) -> Set[int]:
        found: Set[int] = set()
        for node in self.walk():
            if isinstance(node, Term):
                found.update(atom.index for atom in node.atoms if atom.variable)
        return found

    def walk(self) -> Iterator["Word"]:
        """Every distinct node of the DAG once, children before parents."""
        seen: Set[int] = set()
        stack: List[Tuple[Word, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in seen:
                continue
            if expanded:
                seen.add(id(node))
                yield node
            else:
                stack.append((node, True))
                stack.extend((child, False) for child in node.children())

    def evaluate(self, semigroup: FiniteSemigroup, points: np.ndarray) -> np.ndarray:
        """Values at every row of `points` (shape (N, arity))."""
        return EvaluationContext(semigroup, points).evaluate(self)

    def render(self, semigroup: FiniteSemigroup) -> str:
        return _render(self, semigroup, {})


class Term(Word):
    """A flat, nonempty product of atoms."""

    def __init__(self, arity: int, atoms: Sequence[Atom]) -> None:
        atoms = tuple(Atom(bool(a[0]), int(a[1])) for a in atoms)
        if not atoms:
            raise ValueError("A term needs at least one atom")
        for atom in atoms:
            if atom.variable and not 0 <= atom.index < arity:
                raise VariableOutOfArity(atom.index + 1, arity)
        self.arity = arity
        self.atoms = atoms

    @classmethod
    def constant(cls, arity: int, c: int) -> "Term":
        return cls(arity, [Constant(c)])

    @property
    def length(self) -> int:
        return len(self.atoms)

    def _atoms(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def substitute(self, arity: int, mapping: Sequence[int]) -> "Term":
        """Rename variable k to mapping[k] in a term of the given new arity."""
        return Term(
            arity,
            [Variable(mapping[a.index]) if a.variable else a for a in self.atoms],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Term):
            return NotImplemented
        return self.arity == other.arity and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash((self.arity, self.atoms))

    def __repr__(self) -> str:
        shown = [f"x{a.index + 1}" if a.variable else f"#{a.index}" for a in self.atoms]
        return f"Term({'*'.join(shown)})"


class Product(Word):
    """Lazy product of subterms, evaluated left to right."""

    def __init__(self, factors: Sequence[Word]) -> None:
        factors = tuple(factors)
        if not factors:
            raise ValueError("A product needs at least one factor")
        arities = {f.arity for f in factors}
        if len(arities) != 1:
            raise ArityMismatch(f"Factors have different arities {sorted(arities)}")
        self.arity = factors[0].arity
        self.factors = factors
        self._length: Optional[int] = None

    @property
    def length(self) -> int:
        if self._length is None:
            self._length = sum(f.length for f in self.factors)
        return self._length

    def children(self) -> Tuple[Word, ...]:
        return self.factors

    def _atoms(self) -> Iterator[Atom]:
        for factor in self.factors:
            yield from factor._atoms()


class Power(Word):
    """Lazy power base^exponent with exponent >= 1."""

    def __init__(self, base: Word, exponent: int) -> None:
        if exponent < 1:
            raise ZeroPower(f"Exponent must be positive, got {exponent}")
        self.arity = base.arity
        self.base = base
        self.exponent = exponent

    @property
    def length(self) -> int:
        return self.base.length * self.exponent

    def children(self) -> Tuple[Word, ...]:
        return (self.base,)

    def _atoms(self) -> Iterator[Atom]:
        for _ in range(self.exponent):
            yield from self.base._atoms()


class EvaluationContext:
    """
    Evaluates words on a fixed array of points with memoization.

    Nodes marked as shared stay cached for the lifetime of the context, all other
    nodes only until `reset()`, so a context can serve a whole system without
    keeping every intermediate array alive.
    """

    def __init__(self, semigroup: FiniteSemigroup, points: np.ndarray) -> None:
        self.semigroup = semigroup
        self.points = np.asarray(points, dtype=np.int64)
        if self.points.ndim != 2:
            raise ValueError(f"Points need a 2D array, got shape {self.points.shape}")
        self._shared: Dict[int, Tuple[Word, np.ndarray]] = {}
        self._local: Dict[int, Tuple[Word, np.ndarray]] = {}

    def reset(self) -> None:
        self._local.clear()

    def evaluate(self, word: Word) -> np.ndarray:
        if word.arity != self.points.shape[1]:
            raise ArityMismatch(
                f"Word of arity {word.arity} evaluated on points of arity {self.points.shape[1]}"
            )
        nodes = self._missing(word)
        uses: Dict[int, int] = {}
        for node in nodes:
            for child in node.children():
                uses[id(child)] = uses.get(id(child), 0) + 1
        for node in nodes:
            cache = self._shared if node.shared else self._local
            cache[id(node)] = (node, self._compute(node))
            # drop local intermediates once their last parent is computed
            for child in node.children():
                uses[id(child)] -= 1
                if uses[id(child)] == 0 and not child.shared and child is not word:
                    self._local.pop(id(child), None)
        return self._lookup(word)

    def _cached(self, node: Word) -> bool:
        return id(node) in (self._shared if node.shared else self._local)

    def _missing(self, word: Word) -> List[Word]:
        """Uncached nodes below `word`, children first, without entering cached subtrees."""
        order: List[Word] = []
        seen: Set[int] = set()
        stack: List[Tuple[Word, bool]] = [(word, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in seen or self._cached(node):
                continue
            if expanded:
                seen.add(id(node))
                order.append(node)
            else:
                stack.append((node, True))
                stack.extend((child, False) for child in node.children())
        return order

    def _lookup(self, node: Word) -> np.ndarray:
        cache = self._shared if node.shared else self._local
        return cache[id(node)][1]

    def _compute(self, node: Word) -> np.ndarray:
        table = self.semigroup.table
        count = len(self.points)
        if isinstance(node, Term):
            value = None
            for atom in node.atoms:
                column = self.points[:, atom.index] if atom.variable else atom.index
                value = column if value is None else table[value, column]
            return np.broadcast_to(np.asarray(value, dtype=np.int64), (count,))
        if isinstance(node, Product):
            value = self._lookup(node.factors[0])
            for factor in node.factors[1:]:
                value = table[value, self._lookup(factor)]
            return value
        if isinstance(node, Power):
            return self.semigroup.power_map(node.exponent)[self._lookup(node.base)]
        raise TypeError(f"Unsupported word type {type(node)}")


def eval_term(semigroup: FiniteSemigroup, term: Word, point: Sequence[int]) -> int:
    """Value of a term at a single point (left-to-right fold of the Cayley table)."""
    if len(point) != term.arity:
        raise ArityMismatch(f"Point of length {len(point)} for a term of arity {term.arity}")
    points = np.asarray(point, dtype=np.int64).reshape(1, term.arity)
    return int(term.evaluate(semigroup, points)[0])


@dataclass(frozen=True)
class Equation:
    lhs: Word
    rhs: Word

    def __post_init__(self) -> None:
        if self.lhs.arity != self.rhs.arity:
            raise ArityMismatch(
                f"Sides of an equation have arities {self.lhs.arity} and {self.rhs.arity}"
            )

    @property
    def arity(self) -> int:
        return self.lhs.arity


@dataclass
class System:
    arity: int
    equations: List[Equation] = field(default_factory=list)

    def __post_init__(self) -> None:
        for equation in self.equations:
            if equation.arity != self.arity:
                raise ArityMismatch(
                    f"Equation of arity {equation.arity} in a system of arity {self.arity}"
                )

    def __len__(self) -> int:
        return len(self.equations)

    def __add__(self, other: "System") -> "System":
        if self.arity != other.arity:
            raise ArityMismatch(f"Systems of arities {self.arity} and {other.arity}")
        return System(self.arity, self.equations + other.equations)


def _check_budget(base: int, arity: int, budget: int) -> int:
    points = base**arity
    if points > budget:
        raise SweepBudgetExceeded(points, budget)
    return points


class PointSet:
    """A set of points of S^n as a boolean mask over mixed-radix codes."""

    def __init__(self, semigroup: FiniteSemigroup, arity: int, mask: np.ndarray) -> None:
        mask = np.array(mask, dtype=bool)
        if mask.shape != (len(semigroup) ** arity,):
            raise ValueError(f"Mask of shape {mask.shape} does not fit S^{arity}")
        self.semigroup = semigroup
        self.arity = arity
        self.mask = mask
        self.mask.setflags(write=False)

    @classmethod
    def full(
        cls, semigroup: FiniteSemigroup, arity: int, budget: int = DEFAULT_SWEEP_BUDGET
    ) -> "PointSet":
        size = _check_budget(len(semigroup), arity, budget)
        return cls(semigroup, arity, np.ones(size, dtype=bool))

    @classmethod
    def empty(
        cls, semigroup: FiniteSemigroup, arity: int, budget: int = DEFAULT_SWEEP_BUDGET
    ) -> "PointSet":
        size = _check_budget(len(semigroup), arity, budget)
        return cls(semigroup, arity, np.zeros(size, dtype=bool))

    @classmethod
    def from_points(
        cls,
        semigroup: FiniteSemigroup,
        arity: int,
        points: Iterable[Sequence[int]],
        budget: int = DEFAULT_SWEEP_BUDGET,
    ) -> "PointSet":
        size = _check_budget(len(semigroup), arity, budget)
        mask = np.zeros(size, dtype=bool)
        rows = np.asarray(list(points), dtype=np.int64).reshape(-1, arity)
        if len(rows):
            if ((rows < 0) | (rows >= len(semigroup))).any():
                raise ValueError("Point coordinates must be element indices")
            mask[encode_points(rows, len(semigroup))] = True
        return cls(semigroup, arity, mask)

    @property
    def codes(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def points(self) -> np.ndarray:
        """Member points, shape (len(self), arity), in lexicographic order."""
        return decode_points(self.codes, len(self.semigroup), self.arity)

    def code(self, point: Sequence[int]) -> int:
        return int(encode_points(np.asarray(point), len(self.semigroup))[0])

    def __contains__(self, point: object) -> bool:
        return bool(self.mask[self.code(point)])  # type: ignore

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        for row in self.points():
            yield tuple(int(v) for v in row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.arity == other.arity and np.array_equal(self.mask, other.mask)

    def _compatible(self, other: "PointSet") -> None:
        if self.arity != other.arity or len(self.mask) != len(other.mask):
            raise ArityMismatch("Point sets live in different spaces")

    def __and__(self, other: "PointSet") -> "PointSet":
        self._compatible(other)
        return PointSet(self.semigroup, self.arity, self.mask & other.mask)

    def __or__(self, other: "PointSet") -> "PointSet":
        self._compatible(other)
        return PointSet(self.semigroup, self.arity, self.mask | other.mask)

    def issubset(self, other: "PointSet") -> bool:
        self._compatible(other)
        return not (self.mask & ~other.mask).any()

    def complement(self) -> "PointSet":
        return PointSet(self.semigroup, self.arity, ~self.mask)

    def render(self) -> List[List[str]]:
        return [[self.semigroup.name(v) for v in point] for point in self]


def solve_system(
    semigroup: FiniteSemigroup,
    system: System,
    budget: int = DEFAULT_SWEEP_BUDGET,
    progress: bool = False,
) -> PointSet:
    """Exact solution set of a system by exhaustive evaluation over S^n.

    Raises:
        SweepBudgetExceeded: if |S|^n exceeds the budget.
    """
    _check_budget(len(semigroup), system.arity, budget)
    points = mixed_radix_points(len(semigroup), system.arity)
    context = EvaluationContext(semigroup, points)
    mask = np.ones(len(points), dtype=bool)
    for equation in tqdm(system.equations, disable=not progress, desc="Solving"):
        context.reset()
        mask &= context.evaluate(equation.lhs) == context.evaluate(equation.rhs)
    return PointSet(semigroup, system.arity, mask)


# -- parsing -----------------------------------------------------------------


class TermGrammar:
    """
    pyparsing grammar for

        expression := factor ('*' factor)*
        factor     := primary ('^' INTEGER)*
        primary    := ELEMENT | VARIABLE | '@' NAME | '(' expression ')'

    ELEMENT and VARIABLE compete for the longest match and element names are
    tried before parentheses are read as grouping, so names like "(1,(123),2)"
    need no quoting. A token that is both an element name and a variable is
    rejected as ambiguous.
    """

    def __init__(
        self,
        arity: int,
        semigroup: FiniteSemigroup,
        definitions: Optional[Dict[str, Word]] = None,
    ) -> None:
        self.arity = arity
        self.semigroup = semigroup
        self.definitions = {} if definitions is None else definitions
        element = pp.one_of(list(semigroup.elements)).set_parse_action(self._element)
        variable = pp.Regex(VARIABLE_PATTERN.pattern).set_parse_action(self._variable)
        reference = pp.Regex(DEFINITION_PATTERN.pattern).set_parse_action(self._reference)
        unknown = pp.Regex(r"[^\s*^()@]+").set_parse_action(self._unknown)
        exponent = pp.Regex(r"[0-9]+").set_parse_action(self._exponent)
        expression = pp.Forward()
        group = pp.Suppress("(") + expression + pp.Suppress(")")
        primary = (element ^ variable) | reference | group | unknown
        factor = primary + pp.ZeroOrMore(pp.Suppress("^") + exponent)
        factor.set_parse_action(self._power)
        expression <<= factor + pp.ZeroOrMore(pp.Suppress("*") + factor)
        expression.set_parse_action(self._product)
        self.expression = expression

    def parse(self, text: str) -> Word:
        try:
            return self.expression.parse_string(text, parse_all=True)[0]
        except pp.ParseBaseException as error:
            raise TermSyntaxError(text, error.loc, error.msg)

    def _element(self, text: str, loc: int, tokens: pp.ParseResults) -> Word:
        name = tokens[0]
        if VARIABLE_PATTERN.fullmatch(name):
            raise TermSyntaxError(text, loc, f"Ambiguous token {name!r}")
        return Term(self.arity, [Constant(self.semigroup.index(name))])

    def _variable(self, text: str, loc: int, tokens: pp.ParseResults) -> Word:
        k = int(tokens[0][1:])
        if not 1 <= k <= self.arity:
            raise VariableOutOfArity(k, self.arity)
        return Term(self.arity, [Variable(k - 1)])

    def _reference(self, text: str, loc: int, tokens: pp.ParseResults) -> Word:
        key = tokens[0][1:]
        if key not in self.definitions:
            raise TermSyntaxError(text, loc, f"Undefined subterm @{key}")
        return self.definitions[key]

    def _unknown(self, text: str, loc: int, tokens: pp.ParseResults) -> None:
        raise UnknownElement(tokens[0])

    def _exponent(self, text: str, loc: int, tokens: pp.ParseResults) -> int:
        exponent = int(tokens[0])
        if exponent == 0:
            raise ZeroPower(f"Zero exponent at position {loc} in {text!r}")
        return exponent

    def _power(self, text: str, loc: int, tokens: pp.ParseResults) -> Word:
        word = tokens[0]
        for exponent in tokens[1:]:
            if exponent > 1:
                word = Power(word, exponent)
        return word

    def _product(self, text: str, loc: int, tokens: pp.ParseResults) -> Word:
        return _merge_product(list(tokens))


def _merge_product(factors: List[Word]) -> Word:
    """Product of factors with adjacent flat terms fused into one term."""
    merged: List[Word] = []
    for factor in factors:
        if (
            merged
            and isinstance(merged[-1], Term)
            and isinstance(factor, Term)
            and not merged[-1].shared
            and not factor.shared
        ):
            merged[-1] = Term(factor.arity, merged[-1].atoms + factor.atoms)
        else:
            merged.append(factor)
    return merged[0] if len(merged) == 1 else Product(merged)


def parse_word(
    text: str,
    arity: int,
    semigroup: FiniteSemigroup,
    definitions: Optional[Dict[str, Word]] = None,
) -> Word:
    """Parse a term into a lazy word (powers stay unexpanded)."""
    return TermGrammar(arity, semigroup, definitions).parse(text)


def parse_term(
    text: str,
    arity: int,
    semigroup: FiniteSemigroup,
    max_length: int = DEFAULT_EXPANSION_LIMIT,
) -> Term:
    """Parse a term into its flat atom sequence; `t^k` becomes k copies of t.

    Raises:
        TermSyntaxError, UnknownElement, VariableOutOfArity, ZeroPower.
    """
    return parse_word(text, arity, semigroup).expand(max_length)


def parse_system(text: str, semigroup: FiniteSemigroup) -> System:
    """Parse a system document.

    The first non-comment line is `vars n`. Every further line is either an
    equation `lhs = rhs` or a subterm definition `let @name = term`; `#` starts a
    comment.
    """
    arity: Optional[int] = None
    definitions: Dict[str, Word] = {}
    equations: List[Equation] = []
    for number, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if arity is None:
            match = re.fullmatch(r"vars\s+([0-9]+)", line)
            if match is None:
                raise TermSyntaxError(raw_line, 0, f"Line {number}: expected header 'vars n'")
            arity = int(match.group(1))
            grammar = TermGrammar(arity, semigroup, definitions)
            continue
        if line.startswith("let "):
            match = re.fullmatch(r"let\s+@([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)", line)
            if match is None:
                raise TermSyntaxError(raw_line, 0, f"Line {number}: malformed definition")
            word = grammar.parse(match.group(2))
            definitions[match.group(1)] = word.mark_shared()
            continue
        if line.count("=") != 1:
            raise TermSyntaxError(raw_line, 0, f"Line {number}: expected exactly one '='")
        lhs, rhs = line.split("=")
        equations.append(Equation(grammar.parse(lhs), grammar.parse(rhs)))
    if arity is None:
        raise TermSyntaxError(text, 0, "Missing header 'vars n'")
    return System(arity, equations)


def _render_atom(atom: Atom, semigroup: FiniteSemigroup) -> str:
    return f"x{atom.index + 1}" if atom.variable else semigroup.name(atom.index)


def _render(word: Word, semigroup: FiniteSemigroup, labels: Dict[int, str]) -> str:
    if isinstance(word, Term):
        return "*".join(_render_atom(a, semigroup) for a in word.atoms)
    if isinstance(word, Product):
        return "*".join(_render_factor(f, semigroup, labels) for f in word.factors)
    if isinstance(word, Power):
        base = word.base
        if id(base) in labels:
            shown = labels[id(base)]
        elif isinstance(base, Term) and len(base.atoms) == 1:
            shown = _render(base, semigroup, labels)
        else:
            shown = "(" + _render(base, semigroup, labels) + ")"
        return f"{shown}^{word.exponent}"
    raise TypeError(f"Unsupported word type {type(word)}")


def _render_factor(word: Word, semigroup: FiniteSemigroup, labels: Dict[int, str]) -> str:
    if id(word) in labels:
        return labels[id(word)]
    return _render(word, semigroup, labels)


def format_system(semigroup: FiniteSemigroup, system: System, header: str = "") -> str:
    """Render a system document; subterms used more than once become `let` lines."""
    references: Dict[int, int] = {}
    order: List[Word] = []
    for equation in system.equations:
        for side in (equation.lhs, equation.rhs):
            for node in side.walk():
                if id(node) in references:
                    continue
                references[id(node)] = 0
                order.append(node)
                for child in node.children():
                    references[id(child)] += 1
            references[id(side)] += 1
    labels: Dict[int, str] = {}
    lines = [f"# {line}" for line in header.splitlines()] + [f"vars {system.arity}"]
    for node in order:
        if references[id(node)] > 1 and not (isinstance(node, Term) and node.length == 1):
            label = f"@w{len(labels) + 1}"
            lines.append(f"let {label} = {_render(node, semigroup, labels)}")
            labels[id(node)] = label
    for equation in system.equations:
        lines.append(
            f"{_render_factor(equation.lhs, semigroup, labels)} = "
            f"{_render_factor(equation.rhs, semigroup, labels)}"
        )
    return "\n".join(lines) + "\n"


# -- algebraicity oracle -------------------------------------------------------


@dataclass(frozen=True)
class Inconclusive:
    reason: str


@dataclass(frozen=True, eq=False)
class TermFunction:
    arity: int
    table: np.ndarray
    representative: Word


def term_function_closure(
    semigroup: FiniteSemigroup,
    arity: int,
    budget: int = DEFAULT_CLOSURE_BUDGET,
    progress: bool = False,
) -> Union[List[TermFunction], Inconclusive]:
    """All term functions S^n -> S: the closure of projections and constants under
    the pointwise product, found by a worklist over value tables.

    Returns:
        the functions in discovery order, or Inconclusive once more than
        `budget` distinct functions appear.
    """
    size = len(semigroup)
    points = mixed_radix_points(size, arity)
    count = len(points)
    dtype = np.uint8 if size <= 256 else np.int64
    table = semigroup.table.astype(dtype)
    capacity = 64
    values = np.empty((capacity, count), dtype=dtype)
    representatives: List[Word] = []
    seen: Dict[bytes, int] = {}

    def add(row: np.ndarray, representative: Word) -> bool:
        nonlocal values, capacity
        key = row.tobytes()
        if key in seen:
            return True
        if len(representatives) >= budget:
            return False
        if len(representatives) == capacity:
            capacity *= 2
            grown = np.empty((capacity, count), dtype=dtype)
            grown[: len(representatives)] = values[: len(representatives)]
            values = grown
        seen[key] = len(representatives)
        values[len(representatives)] = row
        representatives.append(representative)
        return True

    exhausted = Inconclusive(f"more than {budget} term functions of arity {arity}")
    generators = [(points[:, k].astype(dtype), Term(arity, [Variable(k)])) for k in range(arity)]
    generators += [(np.full(count, c, dtype=dtype), Term(arity, [Constant(c)])) for c in range(size)]
    for row, representative in generators:
        if not add(row, representative):
            return exhausted

    processed = 0
    with tqdm(disable=not progress, desc="Term closure") as bar:
        while processed < len(representatives):
            f = values[processed].copy()
            known = values[: processed + 1]
            left = table[f[None, :].astype(np.int64), known.astype(np.int64)].astype(dtype)
            right = table[known.astype(np.int64), f[None, :].astype(np.int64)].astype(dtype)
            for other in range(processed + 1):
                if not add(left[other], Product([representatives[processed], representatives[other]])):
                    return exhausted
                if not add(right[other], Product([representatives[other], representatives[processed]])):
                    return exhausted
            processed += 1
            bar.update(1)
    logger.debug(f"{len(representatives)} term functions of arity {arity}")
    return [
        TermFunction(arity, values[k].astype(np.int64), representatives[k])
        for k in range(len(representatives))
    ]


def algebraic_closure(
    semigroup: FiniteSemigroup,
    subset: PointSet,
    budget: int = DEFAULT_CLOSURE_BUDGET,
    functions: Optional[List[TermFunction]] = None,
) -> Union[PointSet, Inconclusive]:
    """acl(Y): the points where every two term functions agreeing on Y agree.

    Functions are grouped by their restriction to Y; a point survives iff every
    group is constant there. Y is algebraic iff acl(Y) = Y.
    """
    if functions is None:
        closure = term_function_closure(semigroup, subset.arity, budget)
        if isinstance(closure, Inconclusive):
            return closure
        functions = closure
    if not functions:
        return PointSet(semigroup, subset.arity, np.ones_like(subset.mask))
    tables = np.stack([f.table for f in functions])
    restricted = tables[:, subset.mask]
    groups: Dict[bytes, List[int]] = {}
    for k in range(len(functions)):
        groups.setdefault(restricted[k].tobytes(), []).append(k)
    mask = np.ones(len(subset.mask), dtype=bool)
    for members in groups.values():
        if len(members) > 1:
            block = tables[members]
            mask &= (block == block[0]).all(axis=0)
    return PointSet(semigroup, subset.arity, mask)


def is_algebraic(
    semigroup: FiniteSemigroup, subset: PointSet, budget: int = DEFAULT_CLOSURE_BUDGET
) -> Union[bool, Inconclusive]:
    closure = algebraic_closure(semigroup, subset, budget)
    if isinstance(closure, Inconclusive):
        return closure
    return closure == subset
