"""Finite sets of Frobenius-weight exponents and their arithmetic.

A weight set records the exponents e of the eigenvalue powers q^e that
can occur; products of spaces turn into sumsets of exponent sets. The
modular questions are about the map e -> q^e into F_l: the set is
separated when that map is injective, equivalently when no two
exponents agree modulo the multiplicative order of q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .intlinalg import is_prime


@dataclass(frozen=True)
class WeightSet:
    exponents: frozenset[int]

    def __post_init__(self):
        exps = frozenset(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError("weight exponents must be non-negative")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def interval(cls, top: int) -> "WeightSet":
        """Exponents 0..top inclusive."""
        if top < 0:
            raise ValueError("interval top must be non-negative")
        return cls(frozenset(range(top + 1)))

    @classmethod
    def of(cls, exps: Iterable[int]) -> "WeightSet":
        return cls(frozenset(exps))

    @classmethod
    def point(cls) -> "WeightSet":
        return cls(frozenset({0}))

    def __mul__(self, other: "WeightSet") -> "WeightSet":
        """Sumset of exponents: the weight set of a product."""
        return WeightSet(
            frozenset(a + b for a in self.exponents for b in other.exponents)
        )

    def union(self, other: "WeightSet") -> "WeightSet":
        return WeightSet(self.exponents | other.exponents)

    def sorted(self) -> list[int]:
        return sorted(self.exponents)

    @property
    def wr(self) -> int:
        """Greatest exponent plus one."""
        if not self.exponents:
            raise ValueError("wr of an empty weight set is undefined")
        return max(self.exponents) + 1

    def is_interval(self) -> bool:
        return self.exponents == frozenset(range(len(self.exponents)))

    def __contains__(self, e: int) -> bool:
        return e in self.exponents

    def __len__(self) -> int:
        return len(self.exponents)


def wt_product(a: WeightSet, b: WeightSet) -> WeightSet:
    return a * b


def multiplicative_order(q: int, l: int) -> int:
    if q % l == 0:
        raise ValueError("q is divisible by l")
    order = 1
    acc = q % l
    while acc != 1:
        acc = acc * q % l
        order += 1
    return order


def separated(wt: WeightSet, q: int, l: int) -> bool:
    """Whether e -> q^e mod l is injective on the exponent set."""
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    if q % l == 0:
        raise ValueError("q divisible by l is rejected")
    residues = {pow(q, e, l) for e in wt.exponents}
    return len(residues) == len(wt.exponents)


@dataclass(frozen=True)
class AdmissibleQ:
    q: int | None
    l_exceeds_wr: bool
    search_bound: int
    checked: tuple[int, ...]


def admissible_q(wt: WeightSet, l: int, search_bound: int = 200) -> AdmissibleQ:
    """Smallest prime q within the bound that separates the weight set.

    Also reports whether l exceeds the wr bound, which is the explicit
    necessary condition quantified over all q for interval weight sets.
    """
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    flag = l > wt.wr
    checked = []
    q = 2
    while q <= search_bound:
        if q % l != 0:
            checked.append(q)
            if separated(wt, q, l):
                return AdmissibleQ(q, flag, search_bound, tuple(checked))
        q = _next_prime(q)
    return AdmissibleQ(None, flag, search_bound, tuple(checked))


def _next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n
