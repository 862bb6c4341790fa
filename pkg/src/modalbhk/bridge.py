"""Translations between algebraic models, relational models and Kripke countermodels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import AlgebraicModel, algebra_filters, set_algebra
from .frames import Frame, RelationalModel, frame_conditions, frame_from_generators
from .ipc import KripkeModel
from .posets import Poset
from .syntax import Formula, Language, in_language, show, variables


@dataclass(frozen=True)
class WorldMap:
    """The prime filter behind each world of a frame built from an algebra."""

    filters: tuple[frozenset[int], ...]

    def world_of(self, f: frozenset[int]) -> int:
        return self.filters.index(f)


def algebra_to_frame(m: AlgebraicModel, g: Mapping[str, int] | None = None) -> tuple[RelationalModel, WorldMap]:
    """Prime-filter frame of ``m``; element ``a`` becomes the proposition ``a+`` at index ``a``."""
    if m.cls is not None:
        frame_conditions(m.cls)  # raises for classes without relational semantics
    h = m.algebra
    _, primes, _ = algebra_filters(h)
    primes = tuple(primes)
    n = len(primes)
    if not primes or primes[0] != frozenset({h.top}):
        raise ValueError("algebra lacks the disjunction property")
    leq = [[primes[i] <= primes[j] for j in range(n)] for i in range(n)]
    order = Poset.from_matrix(leq)
    props = tuple(sum(1 << w for w in range(n) if a in primes[w]) for a in h.carrier)
    E = None
    if m.k is not None:
        E = tuple(frozenset(a for a in h.carrier if m.k[a] in primes[w]) for w in range(n))
    w_T = primes.index(m.true_filter) if m.true_filter is not None else None
    frame = Frame(order, props, E, w_T)
    return RelationalModel(frame, dict(g or {})), WorldMap(primes)


def plus_map_is_isomorphism(m: AlgebraicModel, frame: Frame) -> bool:
    """Whether ``a -> a+`` is a bijection onto the props reflecting and preserving order."""
    h = m.algebra
    props = frame.props
    if len(set(props)) != h.n or len(props) != h.n:
        return False
    return all(h.leq[a][b] == (props[a] & ~props[b] == 0) for a in h.carrier for b in h.carrier)


def frame_to_algebra(f: Frame, cls: str | None = None, intuitionistic: bool = False) -> AlgebraicModel:
    """Algebra of admissible propositions, with TRUE the sets containing ``w_T``.

    Families that are not closed are closed first, each belief filter being
    generated by the meet of its members.
    """
    if f.w_T is None and not intuitionistic:
        raise ValueError("frame has no designated world")
    if not _closed(f):
        seed = None
        if f.E is not None:
            seed = []
            for w in range(f.size):
                gen = f.full
                for i in f.E[w]:
                    gen &= f.props[i]
                seed.append(gen)
        f = frame_from_generators(f.order, seed, f.props, f.w_T)
    h = set_algebra(f.order, f.props)
    tf = None
    if f.w_T is not None:
        tf = frozenset(i for i, a in enumerate(f.props) if a >> f.w_T & 1)
    # intuitionistic frames have no box semantics
    box = tuple(h.top if a == f.full else h.bot for a in f.props) if f.w_T is not None else None
    k = None
    if f.E is not None:
        k = tuple(f.index[f.k_op(a)] for a in f.props)
    return AlgebraicModel(h, tf, box, k, cls)


def _closed(f: Frame) -> bool:
    fam = set(f.props)
    if len(fam) != len(f.props) or 0 not in fam or f.full not in fam:
        return False
    for a in f.props:
        if f.E is not None and f.k_op(a) not in fam:
            return False
        for b in f.props:
            if a & b not in fam or a | b not in fam or f.imp(a, b) not in fam:
                return False
    return True


def kripke_to_relational(k: KripkeModel, goal: Formula) -> RelationalModel:
    """L5 relational model refuting ``[]goal``, built from a Kripke model refuting ``goal`` at its root."""
    if not in_language(goal, Language.FM0):
        raise ValueError(f"goal is not propositional: {show(goal)}")
    if k.extension(goal) & 1:
        raise ValueError("Kripke model does not refute the goal at its root")
    order = k.order
    names = variables(goal)
    gens = [sum(1 << w for w in range(k.size) if x in k.valuation[w]) for x in names]
    props = order.upsets
    frame = Frame(order, props, None, order.maximal[0])
    index = {a: i for i, a in enumerate(props)}
    return RelationalModel(frame, {x: index[s] for x, s in zip(names, gens)})


def is_isomorphic(m1: AlgebraicModel, m2: AlgebraicModel) -> bool:
    """Backtracking search for a structure-preserving bijection between carriers."""
    h1, h2 = m1.algebra, m2.algebra
    if h1.n != h2.n or (m1.true_filter is None) != (m2.true_filter is None):
        return False
    if (m1.k is None) != (m2.k is None) or (m1.box is None) != (m2.box is None):
        return False
    n = h1.n
    up1 = [sum(h1.leq[a]) for a in range(n)]
    up2 = [sum(h2.leq[a]) for a in range(n)]
    pi = [-1] * n
    used = [False] * n

    def ok(a: int) -> bool:
        b = pi[a]
        if up1[a] != up2[b]:
            return False
        if m1.true_filter is not None and (a in m1.true_filter) != (b in m2.true_filter):
            return False
        for c in range(a + 1):
            d = pi[c]
            if h1.leq[a][c] != h2.leq[b][d] or h1.leq[c][a] != h2.leq[d][b]:
                return False
            for t1, t2 in ((m1.box, m2.box), (m1.k, m2.k)):
                if t1 is None:
                    continue
                if t1[a] <= a and pi[t1[a]] != t2[b]:
                    return False
                if t1[c] == a and t2[d] != b:
                    return False
                if t1[a] == c and t2[b] != d:
                    return False
        return True

    def extend(a: int) -> bool:
        if a == n:
            return True
        for b in range(n):
            if used[b]:
                continue
            pi[a] = b
            if ok(a):
                used[b] = True
                if extend(a + 1):
                    return True
                used[b] = False
        pi[a] = -1
        return False

    return extend(0)
