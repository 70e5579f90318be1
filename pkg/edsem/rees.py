"""Rees matrix semigroups and the coordinatization of completely simple semigroups.

A Rees element is a triple (lambda, g, i) with lambda in Lambda (first index),
g in the structure group G and i in I (second index). Multiplication is

    (lambda, g, i) * (mu, h, j) = (lambda, g * P[i][mu] * h, j)

where the sandwich matrix P has |I| rows and |Lambda| columns. Indices are
0-based in code and rendered 1-based in element names.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import FormulaMismatch, NotCompletelySimple, SizeCapExceeded, ValidationError
from .groups import FiniteGroup, group_from_semigroup
from .semigroup import (
    ElementSet,
    FiniteSemigroup,
    check_matrix_shape,
    find_associativity_violation,
    idempotents,
    kernel,
)

logger = logging.getLogger(__name__)

DEFAULT_SIZE_CAP = 4096
# materialized tables larger than this are revalidated on a sample only
_FULL_REVALIDATION_LIMIT = 512
# exhaustive isomorphism checks up to this many products
_EXHAUSTIVE_PRODUCTS = 4_000_000
TRIPLE_PATTERN = re.compile(r"\(([0-9]+),(.+),([0-9]+)\)")


class ReesElement(NamedTuple):
    lam: int
    g: int
    i: int


@dataclass(frozen=True, eq=False)
class ReesSpec:
    """Structure group, index set sizes and sandwich matrix of a Rees matrix semigroup."""

    group: FiniteGroup
    lambda_size: int
    i_size: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.int64)
        if self.lambda_size < 1 or self.i_size < 1:
            raise ValidationError(
                f"Index sets must be nonempty, got |Lambda|={self.lambda_size}, |I|={self.i_size}"
            )
        if matrix.shape != (self.i_size, self.lambda_size):
            raise ValidationError(
                f"Sandwich matrix has shape {matrix.shape}, expected "
                f"({self.i_size}, {self.lambda_size}) (|I| rows, |Lambda| columns)"
            )
        if ((matrix < 0) | (matrix >= len(self.group))).any():
            raise ValidationError("Sandwich matrix entries must be group elements")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def normalized(self) -> bool:
        """Whether the first row and the first column of P are the identity."""
        identity = self.group.identity
        return bool((self.matrix[0] == identity).all() and (self.matrix[:, 0] == identity).all())

    @property
    def order(self) -> int:
        return len(self.group) * self.lambda_size * self.i_size

    def encode(self, element: ReesElement) -> int:
        """Index of a triple in the materialized semigroup."""
        return (element.lam * len(self.group) + element.g) * self.i_size + element.i

    def decode(self, index: int) -> ReesElement:
        rest, i = divmod(index, self.i_size)
        lam, g = divmod(rest, len(self.group))
        return ReesElement(lam, g, i)

    def element_name(self, element: ReesElement) -> str:
        return f"({element.lam + 1},{self.group.name(element.g)},{element.i + 1})"

    def matrix_names(self) -> List[List[str]]:
        return [[self.group.name(int(p)) for p in row] for row in self.matrix]


def rees_multiply(spec: ReesSpec, x: ReesElement, y: ReesElement) -> ReesElement:
    group = spec.group
    middle = group.multiply(x.g, int(spec.matrix[x.i, y.lam]), y.g)
    return ReesElement(x.lam, middle, y.i)


def _coordinate_arrays(spec: ReesSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    lam, g, i = np.meshgrid(
        np.arange(spec.lambda_size),
        np.arange(len(spec.group)),
        np.arange(spec.i_size),
        indexing="ij",
    )
    return lam.ravel(), g.ravel(), i.ravel()


def _rees_products(
    spec: ReesSpec, left: Tuple[np.ndarray, ...], right: Tuple[np.ndarray, ...]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized rees_multiply over broadcastable coordinate arrays."""
    table = spec.group.table
    lam, g, i = left
    mu, h, j = right
    middle = table[table[g, spec.matrix[i, mu]], h]
    return np.broadcast_to(lam, middle.shape), middle, np.broadcast_to(j, middle.shape)


def build_cayley_from_rees(spec: ReesSpec, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteSemigroup:
    """Materialize the Rees matrix semigroup as a Cayley table.

    Raises:
        SizeCapExceeded: if |G||Lambda||I| exceeds `size_cap`.
    """
    if spec.order > size_cap:
        raise SizeCapExceeded(spec.order, size_cap, what="Rees matrix semigroup")
    lam, g, i = _coordinate_arrays(spec)
    plam, pg, pi = _rees_products(
        spec, (lam[:, None], g[:, None], i[:, None]), (lam[None, :], g[None, :], i[None, :])
    )
    table = (plam * len(spec.group) + pg) * spec.i_size + pi
    names = [spec.element_name(ReesElement(a, b, c)) for a, b, c in zip(lam, g, i)]
    if spec.order <= _FULL_REVALIDATION_LIMIT:
        violation = find_associativity_violation(table)
        if violation is not None:
            raise FormulaMismatch(f"Rees table is not associative at {violation}")
    else:
        logger.warning(
            f"Skipping exhaustive associativity check for {spec.order} elements"
        )
    return FiniteSemigroup(names, table)


def normalizing_factors(spec: ReesSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Factors (u, v) of the isomorphism (lambda, g, i) -> (lambda, u[lambda] g v[i], i)
    onto the normalized spec, with u[lambda] = p_{1 lambda} and v[i] = p_{i1} p_{11}^-1.
    """
    group = spec.group
    p = spec.matrix
    u = p[0].copy()
    v = np.array(
        [group.multiply(int(p[i, 0]), group.inv(int(p[0, 0]))) for i in range(spec.i_size)]
    )
    return u, v


def normalize_matrix(spec: ReesSpec, verify: bool = True) -> ReesSpec:
    """Isomorphic spec with p'_{i mu} = p_{11} p_{i1}^-1 p_{i mu} p_{1 mu}^-1.

    Args:
        spec: any spec.
        verify: check the isomorphism by comparing transported products (exhaustive
            when small, otherwise on a sample).

    Raises:
        FormulaMismatch: if the transported multiplication disagrees.
    """
    group = spec.group
    p = spec.matrix
    p11 = int(p[0, 0])
    normalized = np.empty_like(p)
    for i in range(spec.i_size):
        for mu in range(spec.lambda_size):
            normalized[i, mu] = group.multiply(
                p11, group.inv(int(p[i, 0])), int(p[i, mu]), group.inv(int(p[0, mu]))
            )
    result = ReesSpec(group, spec.lambda_size, spec.i_size, normalized)
    if verify:
        u, v = normalizing_factors(spec)
        table = group.table

        def transport(lam: np.ndarray, g: np.ndarray, i: np.ndarray):
            return lam, table[table[u[lam], g], v[i]], i

        _check_transport(spec, result, transport)
    return result


def _check_transport(source: ReesSpec, target: ReesSpec, transport) -> None:
    """Check transport(x) * transport(y) == transport(x * y) for all or sampled pairs."""
    lam, g, i = _coordinate_arrays(source)
    n = len(lam)
    if n * n <= _EXHAUSTIVE_PRODUCTS:
        left_index = np.repeat(np.arange(n), n)
        right_index = np.tile(np.arange(n), n)
    else:
        rng = np.random.default_rng(0)
        left_index = rng.integers(0, n, _EXHAUSTIVE_PRODUCTS)
        right_index = rng.integers(0, n, _EXHAUSTIVE_PRODUCTS)
    left = (lam[left_index], g[left_index], i[left_index])
    right = (lam[right_index], g[right_index], i[right_index])
    expected = transport(*_rees_products(source, left, right))
    actual = _rees_products(target, transport(*left), transport(*right))
    if not all(np.array_equal(a, b) for a, b in zip(expected, actual)):
        raise FormulaMismatch("Transported multiplication does not match")


@dataclass(frozen=True)
class MatrixVerdict:
    """Nonsingular, or the first pair of equal rows (checked first) or columns."""

    kind: str
    pair: Optional[Tuple[int, int]] = None

    @property
    def nonsingular(self) -> bool:
        return self.kind == "nonsingular"

    def __str__(self) -> str:
        if self.pair is None:
            return "Nonsingular"
        label = "EqualRows" if self.kind == "equal_rows" else "EqualColumns"
        return f"{label}({self.pair[0] + 1},{self.pair[1] + 1})"


def is_matrix_nonsingular(spec: ReesSpec) -> MatrixVerdict:
    p = spec.matrix
    for a in range(spec.i_size):
        for b in range(a + 1, spec.i_size):
            if np.array_equal(p[a], p[b]):
                return MatrixVerdict("equal_rows", (a, b))
    for a in range(spec.lambda_size):
        for b in range(a + 1, spec.lambda_size):
            if np.array_equal(p[:, a], p[:, b]):
                return MatrixVerdict("equal_columns", (a, b))
    return MatrixVerdict("nonsingular")


@dataclass(frozen=True, eq=False)
class KernelAnalysis:
    """
    Coordinates of a completely simple ideal K of a semigroup S.

    `coords[x]` holds (lambda, g, i) for x in K and -1 elsewhere; `elements[lambda,
    g, i]` is the inverse map into S's indices. The Rees spec is normalized, so
    Gamma = {(1, g, 1)} is a subgroup isomorphic to the structure group.
    """

    semigroup: FiniteSemigroup
    kernel: ElementSet
    spec: ReesSpec
    coords: np.ndarray
    elements: np.ndarray
    gamma_subset: ElementSet = field(init=False)

    def __post_init__(self) -> None:
        self.coords.setflags(write=False)
        self.elements.setflags(write=False)
        gamma = ElementSet.from_indices(self.semigroup, self.elements[0, :, 0].tolist())
        object.__setattr__(self, "gamma_subset", gamma)

    def to_coords(self, x: int) -> ReesElement:
        lam, g, i = self.coords[x]
        if lam < 0:
            raise ValueError(f"{self.semigroup.name(x)} is not in the kernel")
        return ReesElement(int(lam), int(g), int(i))

    def from_coords(self, lam: int, g: int, i: int) -> int:
        return int(self.elements[lam, g, i])

    def gamma(self, g: int) -> int:
        """The element (1, g, 1) of S."""
        return int(self.elements[0, g, 0])

    def gamma_value(self, x: int) -> int:
        """The group element g of x = (1, g, 1) in Gamma."""
        lam, g, i = self.to_coords(x)
        if lam != 0 or i != 0:
            raise ValueError(f"{self.semigroup.name(x)} is not in Gamma")
        return g

    @property
    def gamma_identity(self) -> int:
        """(1, 1, 1), the identity of Gamma."""
        return self.gamma(self.spec.group.identity)

    def left_ideal(self, i: int) -> ElementSet:
        """L_i = {(lambda, g, i)}."""
        return ElementSet.from_indices(self.semigroup, self.elements[:, :, i].ravel().tolist())

    def right_ideal(self, lam: int) -> ElementSet:
        """R_lambda = {(lambda, g, i)}."""
        return ElementSet.from_indices(self.semigroup, self.elements[lam].ravel().tolist())

    def gamma_group(self) -> FiniteGroup:
        return group_from_semigroup(self.semigroup.restrict(self.gamma_subset))

    def render(self, x: int) -> str:
        """Name of x, followed by its coordinates when it lies in the kernel under another name."""
        name = self.semigroup.name(x)
        if self.coords[x, 0] < 0:
            return name
        coordinates = self.spec.element_name(self.to_coords(x))
        if coordinates == name:
            return name
        return f"{name}={coordinates}"


def _ordered_classes(sets: Dict[bytes, List[int]], first: int) -> List[List[int]]:
    """Classes ordered with the one containing `first` at the front, the rest by smallest member."""
    classes = sorted(sets.values(), key=lambda members: members[0])
    classes.sort(key=lambda members: first not in members)
    return classes


def _structure_group_names(local: FiniteSemigroup, elements: np.ndarray) -> List[str]:
    """Names for G taken from Gamma = {(1,g,1)}.

    When every element of K is already named "(lambda,g,i)" with the coordinates
    found here, g is named by its middle component, otherwise by the name of (1,g,1).
    """
    lambda_size, group_size, i_size = elements.shape
    names = [local.name(int(x)) for x in elements[0, :, 0]]
    matches = [TRIPLE_PATTERN.fullmatch(name) for name in names]
    if not all(m and m.group(1) == "1" and m.group(3) == "1" for m in matches):
        return names
    middles = [m.group(2) for m in matches]
    if len(set(middles)) != group_size:
        return names
    for lam in range(lambda_size):
        for g in range(group_size):
            for i in range(i_size):
                if local.name(int(elements[lam, g, i])) != f"({lam + 1},{middles[g]},{i + 1})":
                    return names
    return middles


def _rename_group(group: FiniteGroup, names: Sequence[str]) -> FiniteGroup:
    return FiniteGroup(FiniteSemigroup(names, group.table), group.identity, group.inverse)


def decompose_completely_simple(
    semigroup: FiniteSemigroup, subset: Optional[ElementSet] = None
) -> KernelAnalysis:
    """Coordinatize a completely simple semigroup (or ideal) as a normalized Rees spec.

    The smallest idempotent e spans Gamma = eKe; Lambda enumerates the minimal
    right ideals xK and I the minimal left ideals Kx (e's classes first, then by
    smallest member). Representatives q_lambda in R_lambda ∩ L_1 and w_i in
    R_1 ∩ L_i give coordinates x = q_lambda g w_i and P[i][mu] = w_i q_mu; the
    spec is then normalized. The result is accepted only after the transported
    multiplication matches rees_multiply on every pair of elements.

    Args:
        semigroup: the ambient semigroup S.
        subset: the completely simple subsemigroup K; defaults to all of S.

    Raises:
        NotCompletelySimple: if K is not simple, has no idempotent, or any
            consistency check of the coordinatization fails.

    Returns:
        the kernel analysis with coordinates into S's indices.
    """
    if subset is None:
        subset = ElementSet.full(semigroup)
    try:
        local = semigroup.restrict(subset)
    except ValidationError:
        raise NotCompletelySimple("Subset is not a subsemigroup")
    members = subset.indices
    n = len(local)
    if len(kernel(local)) != n:
        raise NotCompletelySimple(
            f"Semigroup of order {n} is not simple (kernel has {len(kernel(local))} elements)"
        )
    table = local.table
    candidates = idempotents(local).indices
    if len(candidates) == 0:
        raise NotCompletelySimple("No idempotent")
    e = int(candidates[0])

    right_sets: Dict[bytes, List[int]] = {}
    left_sets: Dict[bytes, List[int]] = {}
    for x in range(n):
        right_sets.setdefault(np.unique(table[x]).tobytes(), []).append(x)
        left_sets.setdefault(np.unique(table[:, x]).tobytes(), []).append(x)
    rights = _ordered_classes(right_sets, e)
    lefts = _ordered_classes(left_sets, e)
    lambda_of = np.empty(n, dtype=np.int64)
    i_of = np.empty(n, dtype=np.int64)
    for lam, members_r in enumerate(rights):
        lambda_of[members_r] = lam
    for i, members_l in enumerate(lefts):
        i_of[members_l] = i
    for lam, members_r in enumerate(rights):
        if set(np.unique(table[members_r[0]]).tolist()) != set(members_r):
            raise NotCompletelySimple("Right ideals xK do not partition the semigroup")
    for i, members_l in enumerate(lefts):
        if set(np.unique(table[:, members_l[0]]).tolist()) != set(members_l):
            raise NotCompletelySimple("Left ideals Kx do not partition the semigroup")

    h_class = [x for x in range(n) if lambda_of[x] == 0 and i_of[x] == 0]
    try:
        group = group_from_semigroup(
            local.restrict(ElementSet.from_indices(local, h_class))
        )
    except ValidationError as error:
        raise NotCompletelySimple(f"eKe is not a group: {error}")
    h_index = {x: k for k, x in enumerate(h_class)}

    def smallest(lam: int, i: int) -> int:
        found = [x for x in range(n) if lambda_of[x] == lam and i_of[x] == i]
        if not found:
            raise NotCompletelySimple(f"Empty intersection R_{lam + 1} ∩ L_{i + 1}")
        return found[0]

    q = [smallest(lam, 0) for lam in range(len(rights))]
    w = [smallest(0, i) for i in range(len(lefts))]
    matrix = np.empty((len(lefts), len(rights)), dtype=np.int64)
    for i in range(len(lefts)):
        for mu in range(len(rights)):
            product = int(table[w[i], q[mu]])
            if product not in h_index:
                raise NotCompletelySimple("w_i q_mu is not in eKe")
            matrix[i, mu] = h_index[product]
    raw = ReesSpec(group, len(rights), len(lefts), matrix)

    elements = np.full((len(rights), len(group), len(lefts)), -1, dtype=np.int64)
    for lam in range(len(rights)):
        for g, h in enumerate(h_class):
            for i in range(len(lefts)):
                elements[lam, g, i] = table[table[q[lam], h], w[i]]
    if sorted(elements.ravel().tolist()) != list(range(n)):
        raise NotCompletelySimple("Coordinates q_lambda g w_i are not a bijection")

    spec = normalize_matrix(raw)
    u, v = normalizing_factors(raw)
    gtable = group.table
    normalized_elements = np.empty_like(elements)
    for lam in range(len(rights)):
        for g in range(len(group)):
            for i in range(len(lefts)):
                normalized_elements[lam, gtable[gtable[u[lam], g], v[i]], i] = elements[lam, g, i]

    spec = ReesSpec(
        _rename_group(group, _structure_group_names(local, normalized_elements)),
        spec.lambda_size,
        spec.i_size,
        spec.matrix,
    )

    coords = np.full((len(semigroup), 3), -1, dtype=np.int64)
    lam_grid, g_grid, i_grid = np.meshgrid(
        np.arange(len(rights)), np.arange(len(group)), np.arange(len(lefts)), indexing="ij"
    )
    local_flat = normalized_elements.ravel()
    coords[members[local_flat], 0] = lam_grid.ravel()
    coords[members[local_flat], 1] = g_grid.ravel()
    coords[members[local_flat], 2] = i_grid.ravel()
    analysis = KernelAnalysis(
        semigroup=semigroup,
        kernel=subset,
        spec=spec,
        coords=coords,
        elements=members[normalized_elements],
    )
    check_coordinates(analysis)
    logger.debug(
        f"Completely simple of order {n}: |G|={len(group)}, "
        f"|Lambda|={spec.lambda_size}, |I|={spec.i_size}"
    )
    return analysis


def check_coordinates(analysis: KernelAnalysis) -> None:
    """Exhaustively compare multiplication in K with rees_multiply through the coordinates.

    Raises:
        NotCompletelySimple: on the first disagreement.
    """
    members = analysis.kernel.indices
    coords = analysis.coords[members]
    table = analysis.semigroup.table
    products = table[np.ix_(members, members)]
    expected = _rees_products(
        analysis.spec,
        (coords[:, None, 0], coords[:, None, 1], coords[:, None, 2]),
        (coords[None, :, 0], coords[None, :, 1], coords[None, :, 2]),
    )
    actual = analysis.coords[products]
    for axis in range(3):
        if not np.array_equal(np.broadcast_to(expected[axis], actual[..., axis].shape), actual[..., axis]):
            raise NotCompletelySimple("Transported multiplication does not match the Rees law")


def analyze_kernel(semigroup: FiniteSemigroup) -> KernelAnalysis:
    """Compute the kernel of S and coordinatize it."""
    ideal = kernel(semigroup)
    logger.info(f"Kernel has {len(ideal)} of {len(semigroup)} elements")
    return decompose_completely_simple(semigroup, ideal)


def rees_spec_from_names(
    group: FiniteGroup, lambda_size: int, i_size: int, matrix: Sequence[Sequence[str]]
) -> ReesSpec:
    """Spec from a sandwich matrix of group element names, |I| rows of |Lambda| entries.

    Raises:
        ValidationError: if the matrix is not |I| x |Lambda| or an entry is not a group element.
    """
    check_matrix_shape(matrix, i_size, lambda_size, "sandwich matrix")
    for row in matrix:
        for entry in row:
            if not isinstance(entry, str) or entry not in group.elements:
                raise ValidationError(f"Sandwich entry {entry!r} is not a group element")
    indices = np.array([[group.index(p) for p in row] for row in matrix], dtype=np.int64)
    return ReesSpec(group, lambda_size, i_size, indices.reshape(i_size, lambda_size))
