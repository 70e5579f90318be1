"""Finite semigroups given by Cayley tables: validation, ideals, idempotents and kernel."""
import itertools
import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import IndexOutOfRange, NotAssociative, ValidationError

logger = logging.getLogger(__name__)

# characters the system-file grammar reserves
RESERVED_CHARACTERS = set("*^=#@")

# upper bound on the number of triples held in memory by the associativity check
_ASSOCIATIVITY_CELLS = 4_000_000


class FiniteSemigroup:
    """
    A finite semigroup on elements 0..n-1 with symbolic names.

    `table[a, b]` is the index of `a*b`. Instances are immutable; the table is a
    read-only numpy array, so a semigroup can be shared between threads.
    """

    def __init__(self, elements: Sequence[str], table: np.ndarray) -> None:
        """Wraps an already validated table, use `validate_cayley` for raw input.

        Args:
            elements: unique element names, in index order.
            table: integer array of shape (n, n).
        """
        self._elements = tuple(elements)
        self._table = np.array(table, dtype=np.int64)
        self._table.setflags(write=False)
        self._index = {name: index for index, name in enumerate(self._elements)}
        self._power_maps: Dict[int, np.ndarray] = {}

    @property
    def elements(self) -> Tuple[str, ...]:
        return self._elements

    @property
    def table(self) -> np.ndarray:
        return self._table

    def __len__(self) -> int:
        return len(self._elements)

    def __repr__(self) -> str:
        return f"FiniteSemigroup(order={len(self)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteSemigroup):
            return NotImplemented
        return self._elements == other._elements and np.array_equal(
            self._table, other._table
        )

    def __hash__(self) -> int:
        return hash((self._elements, self._table.tobytes()))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"Unknown element {name!r}")

    def name(self, index: int) -> str:
        return self._elements[index]

    def multiply(self, a: int, b: int) -> int:
        return int(self._table[a, b])

    def product(self, factors: Iterable[int]) -> int:
        """Left-to-right product of a nonempty sequence of element indices."""
        iterator = iter(factors)
        value = next(iterator)
        for factor in iterator:
            value = self._table[value, factor]
        return int(value)

    def power_map(self, exponent: int) -> np.ndarray:
        """Array mapping each element x to x^exponent (exponent >= 1), cached."""
        if exponent < 1:
            raise ValueError(f"Exponent must be positive, got {exponent}")
        if exponent not in self._power_maps:
            base = np.arange(len(self), dtype=np.int64)
            result: Optional[np.ndarray] = None
            k = exponent
            while k:
                if k & 1:
                    result = base if result is None else self._table[result, base]
                k >>= 1
                if k:
                    base = self._table[base, base]
            assert result is not None
            result.setflags(write=False)
            self._power_maps[exponent] = result
        return self._power_maps[exponent]

    def identity(self) -> Optional[int]:
        """Index of the two-sided identity, if there is one."""
        n = len(self)
        columns = np.arange(n)
        for e in range(n):
            if np.array_equal(self._table[e], columns) and np.array_equal(
                self._table[:, e], columns
            ):
                return e
        return None

    def restrict(self, subset: "ElementSet") -> "FiniteSemigroup":
        """The subsemigroup on `subset`, re-indexed in increasing parent order.

        Raises:
            ValidationError: if the subset is not closed under multiplication.
        """
        members = subset.indices
        old_to_new = np.full(len(self), -1, dtype=np.int64)
        old_to_new[members] = np.arange(len(members))
        block = old_to_new[self._table[np.ix_(members, members)]]
        if (block < 0).any():
            raise ValidationError("Subset is not closed under multiplication")
        return FiniteSemigroup([self._elements[m] for m in members], block)

    def relabel(self, permutation: Sequence[int]) -> "FiniteSemigroup":
        """Copy of the semigroup where old element `a` gets the new index `permutation[a]`."""
        permutation = np.asarray(permutation, dtype=np.int64)
        n = len(self)
        if sorted(permutation.tolist()) != list(range(n)):
            raise ValueError(f"Not a permutation of 0..{n - 1}: {permutation}")
        inverse = np.empty(n, dtype=np.int64)
        inverse[permutation] = np.arange(n)
        table = permutation[self._table[np.ix_(inverse, inverse)]]
        names = [self._elements[inverse[k]] for k in range(n)]
        return FiniteSemigroup(names, table)

    def to_dict(self) -> Dict[str, List]:
        """The Cayley-table file representation (element names throughout)."""
        return {
            "elements": list(self._elements),
            "table": [[self._elements[v] for v in row] for row in self._table],
        }


class ElementSet:
    """A subset of a semigroup's universe, stored as a boolean mask."""

    def __init__(self, parent: FiniteSemigroup, mask: np.ndarray) -> None:
        mask = np.array(mask, dtype=bool)
        if mask.shape != (len(parent),):
            raise ValueError(
                f"Mask of shape {mask.shape} does not fit a semigroup of order {len(parent)}"
            )
        self.parent = parent
        self.mask = mask
        self.mask.setflags(write=False)

    @classmethod
    def from_indices(cls, parent: FiniteSemigroup, indices: Iterable[int]) -> "ElementSet":
        mask = np.zeros(len(parent), dtype=bool)
        mask[list(indices)] = True
        return cls(parent, mask)

    @classmethod
    def full(cls, parent: FiniteSemigroup) -> "ElementSet":
        return cls(parent, np.ones(len(parent), dtype=bool))

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def names(self) -> List[str]:
        return [self.parent.name(i) for i in self.indices]

    def __contains__(self, index: object) -> bool:
        return bool(self.mask[index])  # type: ignore

    def __iter__(self) -> Iterator[int]:
        return iter(int(i) for i in self.indices)

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return (self.parent is other.parent or self.parent == other.parent) and np.array_equal(self.mask, other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.parent, self.mask & other.mask)

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.parent, self.mask | other.mask)

    def issubset(self, other: "ElementSet") -> bool:
        return not (self.mask & ~other.mask).any()

    def __repr__(self) -> str:
        return "{" + ", ".join(self.names()) + "}"


RawTable = Sequence[Sequence[Union[int, str]]]


def check_matrix_shape(matrix: object, rows: int, columns: int, what: str) -> None:
    """Raise ValidationError unless `matrix` is a list of `rows` lists of `columns` entries."""
    if not isinstance(matrix, (list, tuple, np.ndarray)) or len(matrix) != rows:
        raise ValidationError(f"{what} must be a list of {rows} rows")
    for k, row in enumerate(matrix):
        if not isinstance(row, (list, tuple, np.ndarray)):
            raise ValidationError(f"Row {k} of the {what} is not a list: {row!r}")
        if len(row) != columns:
            raise ValidationError(f"Row {k} of the {what} has {len(row)} entries, expected {columns}")


def find_associativity_violation(table: np.ndarray) -> Optional[Tuple[int, int, int]]:
    """First triple (a, b, c) in lexicographic order with (ab)c != a(bc), if any."""
    n = len(table)
    chunk = max(1, _ASSOCIATIVITY_CELLS // (n * n))
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        # left[a, b, c] = (ab)c, right[a, b, c] = a(bc)
        left = table[table[rows]]
        right = table[rows[:, None, None], table[None, :, :]]
        violations = np.argwhere(left != right)
        if len(violations):
            a, b, c = violations[0]
            return int(rows[a]), int(b), int(c)
    return None


def validate_cayley(
    table: RawTable, elements: Optional[Sequence[str]] = None
) -> FiniteSemigroup:
    """Validate a raw Cayley table and build the semigroup.

    Args:
        table: square matrix whose entries are element names or indices.
        elements: element names in index order. Defaults to "0".."n-1" when the
            table holds indices.

    Raises:
        ValidationError: for malformed names, non-square tables or unknown names.
        IndexOutOfRange: for an index entry outside 0..n-1.
        NotAssociative: with the first violating triple.

    Returns:
        the validated semigroup.
    """
    if not isinstance(table, (list, tuple, np.ndarray)):
        raise ValidationError(f"Cayley table must be a list of rows, got {type(table).__name__}")
    n = len(table)
    if n == 0:
        raise ValidationError("A semigroup needs at least one element")
    check_matrix_shape(table, n, n, "Cayley table")
    if elements is None:
        elements = [str(k) for k in range(n)]
    if not isinstance(elements, (list, tuple)):
        raise ValidationError(f"Element names must be a list, got {type(elements).__name__}")
    elements = list(elements)
    if len(elements) != n:
        raise ValidationError(f"{len(elements)} element names for a table with {n} rows")
    for name in elements:
        if not isinstance(name, str) or not name or any(ch.isspace() for ch in name):
            raise ValidationError(f"Invalid element name {name!r}")
        if RESERVED_CHARACTERS & set(name):
            raise ValidationError(
                f"Element name {name!r} uses one of the reserved characters "
                f"{''.join(sorted(RESERVED_CHARACTERS))}"
            )
    if len(set(elements)) != n:
        raise ValidationError(f"Element names are not unique: {elements}")
    index = {name: k for k, name in enumerate(elements)}
    array = np.empty((n, n), dtype=np.int64)
    for a, row in enumerate(table):
        for b, entry in enumerate(row):
            if isinstance(entry, str):
                if entry not in index:
                    raise ValidationError(f"Unknown element {entry!r} at ({a}, {b})")
                array[a, b] = index[entry]
            elif isinstance(entry, (int, np.integer)) and not isinstance(entry, bool):
                if not 0 <= entry < n:
                    raise IndexOutOfRange(a, b, entry, n)
                array[a, b] = entry
            else:
                raise IndexOutOfRange(a, b, entry, n)
    violation = find_associativity_violation(array)
    if violation is not None:
        raise NotAssociative(*violation, names=elements)
    return FiniteSemigroup(elements, array)


def adjoin_identity(
    semigroup: FiniteSemigroup, name: str = "1", force: bool = False
) -> FiniteSemigroup:
    """S^1: S itself if it has a two-sided identity, otherwise S with a new neutral element.

    Args:
        semigroup: any finite semigroup.
        name: name of the adjoined identity; primes are appended while it clashes.
        force: adjoin a new identity even if S already has one.
    """
    if not force and semigroup.identity() is not None:
        return semigroup
    while name in semigroup.elements:
        name += "'"
    n = len(semigroup)
    table = np.empty((n + 1, n + 1), dtype=np.int64)
    table[:n, :n] = semigroup.table
    table[n, :] = np.arange(n + 1)
    table[:, n] = np.arange(n + 1)
    return FiniteSemigroup(list(semigroup.elements) + [name], table)


def adjoin_zero(semigroup: FiniteSemigroup, name: str = "0") -> FiniteSemigroup:
    """S with a new absorbing element appended."""
    while name in semigroup.elements:
        name += "'"
    n = len(semigroup)
    table = np.full((n + 1, n + 1), n, dtype=np.int64)
    table[:n, :n] = semigroup.table
    return FiniteSemigroup(list(semigroup.elements) + [name], table)


def principal_ideal(semigroup: FiniteSemigroup, a: int) -> ElementSet:
    """The two-sided principal ideal S^1 a S^1."""
    table = semigroup.table
    column = table[:, a]
    mask = np.zeros(len(semigroup), dtype=bool)
    mask[a] = True
    mask[table[a]] = True
    mask[column] = True
    mask[table[column].ravel()] = True
    return ElementSet(semigroup, mask)


def _product_of_all(semigroup: FiniteSemigroup) -> int:
    return semigroup.product(range(len(semigroup)))


def kernel(semigroup: FiniteSemigroup, method: str = "product") -> ElementSet:
    """The minimal two-sided ideal, which is the intersection of all ideals of S.

    The default "product" method returns S^1 z S^1 for z the product of all
    elements; z lies in every ideal, so this principal ideal equals the intersection.

    Args:
        semigroup: a finite semigroup.
        method: "product" (default) or "intersection", which intersects all
            principal ideals directly. Both give the same set.

    Returns:
        the kernel as an element set.
    """
    if method == "intersection":
        mask = np.ones(len(semigroup), dtype=bool)
        for a in range(len(semigroup)):
            mask &= principal_ideal(semigroup, a).mask
        return ElementSet(semigroup, mask)
    elif method == "product":
        return principal_ideal(semigroup, _product_of_all(semigroup))
    else:
        raise ValueError(f"Unknown kernel method {method}, choose 'product' or 'intersection'.")


def idempotents(semigroup: FiniteSemigroup) -> ElementSet:
    n = len(semigroup)
    return ElementSet(semigroup, semigroup.table[np.arange(n), np.arange(n)] == np.arange(n))


def has_zero(semigroup: FiniteSemigroup) -> Optional[int]:
    """The zero element z (zx = xz = z for all x), if it exists."""
    candidate = _product_of_all(semigroup)
    table = semigroup.table
    if (table[candidate] == candidate).all() and (table[:, candidate] == candidate).all():
        return candidate
    return None


def is_ideal(semigroup: FiniteSemigroup, subset: ElementSet) -> bool:
    """Whether S*I and I*S are both contained in I."""
    members = subset.indices
    if len(members) == 0:
        return False
    table = semigroup.table
    return bool(subset.mask[table[members]].all() and subset.mask[table[:, members]].all())


def is_isomorphism(
    source: FiniteSemigroup, target: FiniteSemigroup, mapping: Sequence[int]
) -> bool:
    """Whether `mapping` (source index -> target index) is an isomorphism."""
    mapping = np.asarray(mapping, dtype=np.int64)
    if len(source) != len(target) or len(set(mapping.tolist())) != len(source):
        return False
    return bool(
        np.array_equal(
            mapping[source.table], target.table[np.ix_(mapping, mapping)]
        )
    )


def _canonical_form(table: np.ndarray) -> Tuple[int, ...]:
    n = len(table)
    best: Optional[Tuple[int, ...]] = None
    for permutation in itertools.permutations(range(n)):
        perm = np.asarray(permutation)
        inverse = np.argsort(perm)
        relabeled = tuple(perm[table[np.ix_(inverse, inverse)]].ravel().tolist())
        if best is None or relabeled < best:
            best = relabeled
    assert best is not None
    return best


def enumerate_semigroups(
    order: int, up_to_isomorphism: bool = False, names: Optional[Sequence[str]] = None
) -> Iterator[FiniteSemigroup]:
    """All associative Cayley tables on `order` elements.

    NOTE: brute force over order**(order**2) candidate tables, meant for order <= 3
    (19683 candidates at order 3).

    Args:
        order: number of elements.
        up_to_isomorphism: keep only the first table of every isomorphism class.
        names: element names, defaults to a, b, c, ...

    Yields:
        the semigroups in lexicographic order of their tables.
    """
    if order < 1:
        raise ValueError(f"Order must be positive, got {order}")
    if names is None:
        names = [chr(ord("a") + k) for k in range(order)]
    seen = set()
    for entries in itertools.product(range(order), repeat=order * order):
        table = np.asarray(entries, dtype=np.int64).reshape(order, order)
        if find_associativity_violation(table) is not None:
            continue
        if up_to_isomorphism:
            form = _canonical_form(table)
            if form in seen:
                continue
            seen.add(form)
        yield FiniteSemigroup(names, table)
