"""Finite group arithmetic and the zero-divisor criterion for group equational domains."""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import NotAGroup
from .semigroup import ElementSet, FiniteSemigroup, idempotents

logger = logging.getLogger(__name__)


class FiniteGroup:
    """A finite semigroup that is a group, with its identity and inverse table."""

    def __init__(self, semigroup: FiniteSemigroup, identity: int, inverse: np.ndarray):
        self.semigroup = semigroup
        self.identity = identity
        self.inverse = np.asarray(inverse, dtype=np.int64)
        self.inverse.setflags(write=False)

    @property
    def table(self) -> np.ndarray:
        return self.semigroup.table

    @property
    def elements(self) -> Tuple[str, ...]:
        return self.semigroup.elements

    def __len__(self) -> int:
        return len(self.semigroup)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={len(self)})"

    def name(self, g: int) -> str:
        return self.semigroup.name(g)

    def index(self, name: str) -> int:
        return self.semigroup.index(name)

    def multiply(self, *factors: int) -> int:
        return self.semigroup.product(factors)

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def conjugate(self, y: int, g: int) -> int:
        """g y g^-1."""
        return self.multiply(g, y, self.inv(g))

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        return self.multiply(self.inv(a), self.inv(b), a, b)

    def commute(self, a: int, b: int) -> bool:
        return bool(self.table[a, b] == self.table[b, a])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def conjugation_table(self) -> np.ndarray:
        """conj[g, y] = g y g^-1."""
        table = self.table
        return table[table, self.inverse[:, None]]


@dataclass(frozen=True)
class ZeroDivisorWitness:
    """x != 1 and y != 1 such that x commutes with every conjugate of y."""

    x: int
    y: int

    def verify(self, group: FiniteGroup) -> bool:
        """Re-check the commuting condition over all |G| conjugators."""
        if self.x == group.identity or self.y == group.identity:
            return False
        return all(
            group.commute(self.x, group.conjugate(self.y, g)) for g in range(len(group))
        )

    def render(self, group: FiniteGroup) -> Tuple[str, str]:
        return group.name(self.x), group.name(self.y)


def group_from_semigroup(semigroup: FiniteSemigroup) -> FiniteGroup:
    """Recognize a group given by its Cayley table.

    Raises:
        NotAGroup: if there is no identity or some element has no inverse.
    """
    identity = semigroup.identity()
    if identity is None:
        found = len(idempotents(semigroup))
        raise NotAGroup(f"No identity element ({found} idempotents)")
    table = semigroup.table
    inverse = np.full(len(semigroup), -1, dtype=np.int64)
    for g in range(len(semigroup)):
        candidates = np.flatnonzero((table[g] == identity) & (table[:, g] == identity))
        if len(candidates) == 0:
            raise NotAGroup(f"Element {semigroup.name(g)} has no inverse")
        inverse[g] = candidates[0]
    return FiniteGroup(semigroup, identity, inverse)


def conjugacy_class(group: FiniteGroup, y: int) -> ElementSet:
    """{g y g^-1 : g in G}."""
    return ElementSet.from_indices(
        group.semigroup, [group.conjugate(y, g) for g in range(len(group))]
    )


def find_zero_divisor(group: FiniteGroup) -> Optional[ZeroDivisorWitness]:
    """The zero-divisor witness with the smallest (x, y) index pair, if one exists.

    NOTE: plain O(|G|^3) scan, vectorized over conjugators and y.
    """
    table = group.table
    conjugates = group.conjugation_table()
    for x in range(len(group)):
        if x == group.identity:
            continue
        centralizes = table[x] == table[:, x]
        # hits[y] is True iff every conjugate of y commutes with x
        hits = centralizes[conjugates].all(axis=0)
        hits[group.identity] = False
        found = np.flatnonzero(hits)
        if len(found):
            witness = ZeroDivisorWitness(x, int(found[0]))
            logger.debug(f"Zero-divisor {witness.render(group)}")
            return witness
    return None


def group_is_ed(group: FiniteGroup) -> bool:
    """A group is an equational domain iff it has no zero-divisors."""
    return find_zero_divisor(group) is None
