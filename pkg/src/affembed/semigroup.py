"""Numerical semigroups: minimal generators, Frobenius number, conductor."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd


def minimal_generators(elements):
    """Minimal generating set of the semigroup generated by ``elements``.

    Only positive integers are considered.
    """
    elems = sorted({e for e in elements if e > 0})
    gens = []
    for e in elems:
        if not in_semigroup(e, gens):
            gens.append(e)
    return gens


def in_semigroup(n, gens):
    if n == 0:
        return True
    if n < 0 or not gens:
        return False
    reach = [False] * (n + 1)
    reach[0] = True
    for i in range(1, n + 1):
        reach[i] = any(i >= g and reach[i - g] for g in gens)
    return reach[n]


def frobenius_number(gens):
    """Largest integer not in the semigroup; -1 when the semigroup is N.

    ``gens`` must have gcd 1.
    """
    gens = sorted(set(gens))
    if not gens:
        raise ValueError("empty generator set")
    if reduce(gcd, gens) != 1:
        raise ValueError("generators must have gcd 1")
    if gens[0] == 1:
        return -1
    m = gens[0]
    reach = [True]
    run = 0
    last_gap = -1
    n = 0
    while run < m:
        n += 1
        ok = any(n >= g and reach[n - g] for g in gens)
        reach.append(ok)
        if ok:
            run += 1
        else:
            run = 0
            last_gap = n
    return last_gap


@dataclass(frozen=True)
class NumericalSemigroup:
    """Degree semigroup: minimal generators, their gcd, and the Frobenius
    data of the gcd-normalized semigroup."""

    generators: tuple
    d: int
    frobenius: int
    conductor_exponent: int

    @classmethod
    def from_elements(cls, elements):
        gens = tuple(minimal_generators(elements))
        if not gens:
            return cls((), 0, -1, 0)
        d = reduce(gcd, gens)
        fr = frobenius_number([g // d for g in gens])
        return cls(gens, d, fr, fr + 1)

    def __contains__(self, n):
        if self.d == 0:
            return n == 0
        return n % self.d == 0 and in_semigroup(n // self.d, [g // self.d for g in self.generators])

    def gaps(self):
        """Gaps of the normalized semigroup."""
        norm = [g // self.d for g in self.generators]
        return [n for n in range(self.frobenius + 1) if not in_semigroup(n, norm)]

    def to_json(self):
        return {
            "generators": list(self.generators),
            "d": self.d,
            "frobenius": self.frobenius,
            "conductor_exponent": self.conductor_exponent,
        }
