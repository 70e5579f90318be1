"""
Named semigroups used throughout the tests and by `edsem fixture`.

Permutation groups come from sympy's named groups. Permutations act on 1..n,
are named in cycle notation ("1" for the identity, commas between points once
n >= 10) and are sorted by their image tuples, so the identity has index 0.
The product p*q applies p first, then q, as in sympy.
"""
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, DihedralGroup, SymmetricGroup

from .groups import group_from_semigroup
from .rees import ReesSpec, build_cayley_from_rees, rees_spec_from_names
from .semigroup import FiniteSemigroup, adjoin_identity

logger = logging.getLogger(__name__)


def cycle_name(permutation: Permutation) -> str:
    separator = "," if permutation.size >= 10 else ""
    cycles = permutation.cyclic_form
    return "".join("(" + separator.join(str(p + 1) for p in cycle) + ")" for cycle in cycles) or "1"


def from_permutation_group(group: PermutationGroup) -> FiniteSemigroup:
    """Cayley table of a sympy permutation group."""
    permutations = sorted(group.generate(), key=lambda p: p.array_form)
    index = {p: k for k, p in enumerate(permutations)}
    m = len(permutations)
    table = np.empty((m, m), dtype=np.int64)
    for a, p in enumerate(permutations):
        for b, q in enumerate(permutations):
            table[a, b] = index[p * q]
    logger.debug(f"Permutation group of degree {group.degree} and order {m}")
    return FiniteSemigroup([cycle_name(p) for p in permutations], table)


def symmetric_group(n: int) -> FiniteSemigroup:
    return from_permutation_group(SymmetricGroup(n))


def alternating_group(n: int) -> FiniteSemigroup:
    return from_permutation_group(AlternatingGroup(n))


def dihedral_group(n: int) -> FiniteSemigroup:
    """Symmetries of the n-gon (order 2n)."""
    return from_permutation_group(DihedralGroup(n))


def cyclic_group(n: int) -> FiniteSemigroup:
    """C_n on 1, c, c2, ..., c(n-1)."""
    names = ["1"] + ["c" if k == 1 else f"c{k}" for k in range(1, n)]
    k = np.arange(n)
    return FiniteSemigroup(names, (k[:, None] + k[None, :]) % n)


_QUATERNION_UNITS = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}  # fmt: skip


def quaternion_group() -> FiniteSemigroup:
    """Q8 on 1, -1, i, -i, j, -j, k, -k."""
    elements = [(sign, unit) for unit in "1ijk" for sign in (1, -1)]
    names = [unit if sign == 1 else f"-{unit}" for sign, unit in elements]
    table = np.empty((8, 8), dtype=np.int64)
    for a, (sa, ua) in enumerate(elements):
        for b, (sb, ub) in enumerate(elements):
            sign, unit = _QUATERNION_UNITS[(ua, ub)]
            table[a, b] = elements.index((sa * sb * sign, unit))
    return FiniteSemigroup(names, table)


def trivial_semigroup() -> FiniteSemigroup:
    return FiniteSemigroup(["e"], np.zeros((1, 1), dtype=np.int64))


def left_zero_semigroup(n: int = 2) -> FiniteSemigroup:
    """xy = x."""
    names = [chr(ord("a") + k) for k in range(n)]
    return FiniteSemigroup(names, np.repeat(np.arange(n)[:, None], n, axis=1))


def right_zero_semigroup(n: int = 2) -> FiniteSemigroup:
    """xy = y."""
    names = [chr(ord("a") + k) for k in range(n)]
    return FiniteSemigroup(names, np.repeat(np.arange(n)[None, :], n, axis=0))


def null_semigroup(n: int = 3) -> FiniteSemigroup:
    """All products equal 0; elements 0, a, b, ..."""
    names = ["0"] + [chr(ord("a") + k) for k in range(n - 1)]
    return FiniteSemigroup(names, np.zeros((n, n), dtype=np.int64))


def rs240_spec() -> ReesSpec:
    """A5 with |Lambda| = |I| = 2 and P = [[1, 1], [1, (12345)]]."""
    group = group_from_semigroup(alternating_group(5))
    return rees_spec_from_names(group, 2, 2, [["1", "1"], ["1", "(12345)"]])


def rsing_spec() -> ReesSpec:
    """C2 with |Lambda| = |I| = 2 and the all-identity matrix."""
    group = group_from_semigroup(cyclic_group(2))
    return rees_spec_from_names(group, 2, 2, [["1", "1"], ["1", "1"]])


def a5_plus() -> FiniteSemigroup:
    """A5 with a new identity u adjoined."""
    return adjoin_identity(alternating_group(5), name="u", force=True)


FIXTURES: Dict[str, Tuple[Callable[..., FiniteSemigroup], int]] = {
    "triv": (trivial_semigroup, 0),
    "lz": (left_zero_semigroup, 1),
    "rz": (right_zero_semigroup, 1),
    "null": (null_semigroup, 1),
    "cyclic": (cyclic_group, 1),
    "symmetric": (symmetric_group, 1),
    "alternating": (alternating_group, 1),
    "dihedral": (dihedral_group, 1),
    "quaternion": (quaternion_group, 0),
    "rs240": (lambda: build_cayley_from_rees(rs240_spec()), 0),
    "rsing": (lambda: build_cayley_from_rees(rsing_spec()), 0),
    "a5plus": (a5_plus, 0),
}

ALIASES: Dict[str, Tuple[str, List[int]]] = {
    "lz2": ("lz", [2]),
    "rz2": ("rz", [2]),
    "n3": ("null", [3]),
    "c2": ("cyclic", [2]),
    "c3": ("cyclic", [3]),
    "c6": ("cyclic", [6]),
    "s3": ("symmetric", [3]),
    "s4": ("symmetric", [4]),
    "a4": ("alternating", [4]),
    "a5": ("alternating", [5]),
    "d4": ("dihedral", [4]),
    "q8": ("quaternion", []),
}


def named_fixture(name: str, *params: int) -> FiniteSemigroup:
    """Build a fixture by name, e.g. `named_fixture("cyclic", 6)` or `named_fixture("A5PLUS")`.

    Raises:
        ValueError: for unknown names or a wrong number of parameters.
    """
    key = name.lower()
    if key in ALIASES and not params:
        key, defaults = ALIASES[key]
        params = tuple(defaults)
    if key not in FIXTURES:
        known = sorted(set(FIXTURES) | set(ALIASES))
        raise ValueError(f"Unknown fixture {name!r}, choose one of {known}")
    builder, arity = FIXTURES[key]
    if len(params) != arity:
        raise ValueError(f"Fixture {key!r} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)
