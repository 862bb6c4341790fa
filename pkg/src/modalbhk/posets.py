"""Finite posets as bitmask adjacency: ``up[i]`` is the set of j with i <= j."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache, cached_property


@dataclass(frozen=True)
class Poset:
    size: int
    up: tuple[int, ...]

    @classmethod
    def from_matrix(cls, leq) -> "Poset":
        n = len(leq)
        up = tuple(sum(1 << j for j in range(n) if leq[i][j]) for i in range(n))
        p = cls(n, up)
        p.validate()
        return p

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def matrix(self) -> list[list[bool]]:
        return [[self.leq(i, j) for j in range(self.size)] for i in range(self.size)]

    def validate(self) -> None:
        n = self.size
        for i in range(n):
            if not self.leq(i, i):
                raise ValueError(f"not reflexive at {i}")
            for j in range(n):
                if i != j and self.leq(i, j) and self.leq(j, i):
                    raise ValueError(f"not antisymmetric at {i},{j}")
                if self.leq(i, j) and self.up[j] & ~self.up[i]:
                    raise ValueError(f"not transitive at {i},{j}")

    @cached_property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def root(self) -> int | None:
        for i in range(self.size):
            if self.up[i] == self.full:
                return i
        return None

    @cached_property
    def maximal(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if self.up[i] == 1 << i)

    def is_upset(self, mask: int) -> bool:
        return all(self.up[i] & ~mask == 0 for i in range(self.size) if mask >> i & 1)

    @cached_property
    def upsets(self) -> tuple[int, ...]:
        """All upper sets, sorted by cardinality then mask (so empty first, whole set last)."""
        found = [m for m in range(1 << self.size) if self.is_upset(m)]
        return tuple(sorted(found, key=lambda m: (m.bit_count(), m)))

    def permuted(self, perm: tuple[int, ...]) -> "Poset":
        """Relabel element i as perm[i]."""
        up = [0] * self.size
        for i in range(self.size):
            up[perm[i]] = _map_mask(self.up[i], perm)
        return Poset(self.size, tuple(up))

    @cached_property
    def code(self) -> tuple[int, ...]:
        return self.up

    @cached_property
    def canonical(self) -> "Poset":
        """Lex-minimal relabelling over all permutations."""
        best = None
        for perm in itertools.permutations(range(self.size)):
            q = self.permuted(perm)
            if best is None or q.code < best.code:
                best = q
        return best

    @cached_property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        return tuple(perm for perm in itertools.permutations(range(self.size)) if self.permuted(perm) == self)


def _map_mask(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[i]
        mask >>= 1
        i += 1
    return out


def map_mask(mask: int, perm: tuple[int, ...]) -> int:
    return _map_mask(mask, perm)


def chain(n: int) -> Poset:
    return Poset(n, tuple(sum(1 << j for j in range(i, n)) for i in range(n)))


def _downsets(p: Poset) -> list[int]:
    down = [sum(1 << i for i in range(p.size) if p.leq(i, j)) for j in range(p.size)]
    return [m for m in range(1 << p.size) if all(down[j] & ~m == 0 for j in range(p.size) if m >> j & 1)]


@cache
def posets(n: int) -> tuple[Poset, ...]:
    """All posets with ``n`` elements up to isomorphism, in canonical form and sorted."""
    if n == 0:
        return (Poset(0, ()),)
    found = set()
    for p in posets(n - 1):
        # the new element n-1 sits above a down-set of p; relabellings are undone by canonicalisation
        for below in _downsets(p):
            up = list(p.up) + [1 << (n - 1)]
            for i in range(n - 1):
                if below >> i & 1:
                    up[i] |= 1 << (n - 1)
            found.add(Poset(n, tuple(up)).canonical)
    return tuple(sorted(found, key=lambda q: q.code))


@cache
def rooted_posets(n: int) -> tuple[Poset, ...]:
    """Rooted posets with ``n`` elements up to isomorphism; the root is element 0."""
    if n < 1:
        return ()
    out = []
    for p in posets(n - 1):
        up = [(1 << n) - 1] + [m << 1 for m in p.up]
        out.append(Poset(n, tuple(up)))
    return tuple(out)


def rooted_posets_upto(max_size: int):
    for n in range(1, max_size + 1):
        yield from rooted_posets(n)
