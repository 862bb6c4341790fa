"""General relational frames with belief functions, and their models.

Worlds are ``0..n-1``; world sets and propositions are bitmasks.  ``E[w]``
holds indices into ``props``.  A formula's extension is always an element of
``props`` in a well-formed frame.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .calculi import Logic, get_logic
from .posets import Poset, map_mask, rooted_posets_upto
from .syntax import And, Bot, Box, Formula, Imp, Or, Var, show


@dataclass(frozen=True, eq=False)
class Frame:
    order: Poset
    props: tuple[int, ...]
    E: tuple[frozenset[int], ...] | None = None
    w_T: int | None = None

    @property
    def size(self) -> int:
        return self.order.size

    @property
    def full(self) -> int:
        return self.order.full

    @property
    def root(self) -> int:
        r = self.order.root
        if r is None:
            raise ValueError("frame has no least world")
        return r

    @cached_property
    def index(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.props)}

    def imp(self, a: int, b: int) -> int:
        up = self.order.up
        return sum(1 << w for w in range(self.size) if up[w] & a & ~b == 0)

    def believed(self, w: int, a: int) -> bool:
        i = self.index.get(a)
        return i is not None and i in self.E[w]

    def k_op(self, a: int) -> int:
        """The proposition ``{w : a in E(w)}``."""
        return sum(1 << w for w in range(self.size) if self.believed(w, a))

    def with_designated(self, w: int | None) -> "Frame":
        return replace(self, w_T=w)

    def to_json(self) -> dict:
        n = self.size
        bits = lambda a: "".join("1" if a >> j & 1 else "0" for j in range(n))  # noqa: E731
        return {
            "worlds": n,
            "order": [bits(u) for u in self.order.up],
            "props": [bits(a) for a in self.props],
            "E": [sorted(e) for e in self.E] if self.E is not None else None,
            "w_T": self.w_T,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Frame":
        rows = data["order"]
        order = Poset.from_matrix([[c == "1" for c in row] for row in rows])
        if data.get("worlds", order.size) != order.size:
            raise ValueError("world count does not match order rows")
        props = tuple(sum(1 << j for j, c in enumerate(row) if c == "1") for row in data["props"])
        E = data.get("E")
        return cls(order, props, tuple(frozenset(e) for e in E) if E is not None else None, data.get("w_T"))

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def describe(self) -> str:
        n = self.size
        lab = lambda a: "{" + ",".join(str(j) for j in range(n) if a >> j & 1) + "}"  # noqa: E731
        parts = [f"worlds 0..{n - 1}, order {[lab(u) for u in self.order.up]}"]
        if self.E is not None:
            parts.append("E " + str([[lab(self.props[i]) for i in sorted(e)] for e in self.E]))
        if self.w_T is not None:
            parts.append(f"w_T {self.w_T}")
        return "; ".join(parts)


@dataclass(frozen=True, eq=False)
class RelationalModel:
    frame: Frame
    g: Mapping[str, int]  # variable -> index into frame.props

    def extension(self, f: Formula) -> int:
        return _extension(self, f, {})

    def to_json(self) -> dict:
        d = self.frame.to_json()
        d["assignment"] = dict(self.g)
        return d


def _extension(m: RelationalModel, f: Formula, memo: dict) -> int:
    if f in memo:
        return memo[f]
    fr = m.frame
    if isinstance(f, Var):
        if f.name not in m.g:
            raise KeyError(f"unassigned variable {f.name}")
        r = fr.props[m.g[f.name]]
    elif isinstance(f, Bot):
        r = 0
    elif isinstance(f, And):
        r = _extension(m, f.left, memo) & _extension(m, f.right, memo)
    elif isinstance(f, Or):
        r = _extension(m, f.left, memo) | _extension(m, f.right, memo)
    elif isinstance(f, Imp):
        r = fr.imp(_extension(m, f.left, memo), _extension(m, f.right, memo))
    elif isinstance(f, Box):
        r = fr.full if _extension(m, f.body, memo) >> fr.root & 1 else 0
    else:
        if fr.E is None:
            raise ValueError(f"frame has no belief function: {show(f)}")
        body = _extension(m, f.body, memo)
        if body not in fr.index:
            raise ValueError(f"extension of {show(f.body)} is not an admissible proposition")
        r = fr.k_op(body)
    memo[f] = r
    return r


def sat(m: RelationalModel, w: int, f: Formula) -> bool:
    return bool(m.extension(f) >> w & 1)


def true_in(m: RelationalModel, f: Formula) -> bool:
    """Truth at the designated world, or at the least world when there is none."""
    w = m.frame.w_T if m.frame.w_T is not None else m.frame.root
    return sat(m, w, f)


# ------------------------------------------------------------------ closure


def close_propositions(order: Poset, E_seed: Sequence[int] | None, generators: Iterable[int]) -> tuple[int, ...]:
    """Least family containing ``generators``, empty set and W, closed under the operations.

    ``E_seed[w]`` is a world set G; the belief filter at w is taken to be all
    admissible supersets of G, so ``K A = {w : G_w is a subset of A}``.
    """
    full = order.full
    up = order.up
    generators = list(generators)
    for a in generators:
        if not order.is_upset(a):
            raise ValueError(f"generator {a:b} is not an upper set")

    def imp(a, b):
        return sum(1 << w for w in range(order.size) if up[w] & a & ~b == 0)

    def k(a):
        return sum(1 << w for w in range(order.size) if E_seed[w] & ~a == 0)

    fam = {0, full} | set(generators)
    while True:
        new = set()
        items = list(fam)
        for a in items:
            if E_seed is not None:
                new.add(k(a))
            for b in items:
                new.update((a & b, a | b, imp(a, b)))
        if new <= fam:
            break
        fam |= new
    return tuple(sorted(fam, key=lambda a: (a.bit_count(), a)))


def frame_from_generators(order: Poset, E_seed: Sequence[int] | None, generators: Iterable[int] = (),
                          w_T: int | None = None) -> Frame:
    props = close_propositions(order, E_seed, generators)
    E = None
    if E_seed is not None:
        E = tuple(frozenset(i for i, a in enumerate(props) if E_seed[w] & ~a == 0) for w in range(order.size))
    return Frame(order, props, E, w_T)


# ---------------------------------------------------------------- class checks


def frame_conditions(logic: str | Logic) -> list[str]:
    """Names of the frame conditions defining the relational models of ``logic``."""
    lg = get_logic(logic)
    ax = set(lg.axioms)
    if "DIST" in ax:
        ax |= {"A3"}
    if "WCoRe" in ax:
        ax |= {"CoRe"}
    names = ["rooted order", "upper sets", "closure"]
    if lg.classical:
        if not {"A1", "A2", "A3", "A4", "A5"} <= ax:
            raise ValueError(f"no relational semantics for {lg.name}")
        names.append("designated maximal world")
    if lg.epistemic:
        if not lg.classical and not {"KBel", "IntCo"} <= ax:
            raise ValueError(f"no relational semantics for {lg.name}")
        if lg.classical and not ({"KBel", "CoRe"} <= ax or {"KBel", "IntCo"} <= ax):
            raise ValueError(f"no relational semantics for {lg.name}")
        names += ["filters", "monotone"]
        if ("PNB" in ax) != ("NNB" in ax):
            raise ValueError(f"no relational semantics for {lg.name}")
        if "E4" in ax:
            names.append("positive introspection")
        if "E5" in ax:
            names.append("negative introspection")
        if "PNB" in ax:
            names.append("constant belief")
        if "IntRe" in ax:
            names.append("knowledge")
        if "IntCo" in ax:
            names.append("co-reflection")
    return names


def _v_rooted(f: Frame):
    try:
        f.order.validate()
    except ValueError as e:
        yield (str(e),)
        return
    if f.order.root is None:
        yield ("no least world",)


def _v_upper(f: Frame):
    for a in f.props:
        if not f.order.is_upset(a):
            yield (a,)


def _v_closure(f: Frame):
    fam = set(f.props)
    if 0 not in fam or f.full not in fam:
        yield ("empty or full set missing",)
    for a in f.props:
        if f.E is not None and f.k_op(a) not in fam:
            yield ("K", a)
        for b in f.props:
            for name, c in (("meet", a & b), ("join", a | b), ("imp", f.imp(a, b))):
                if c not in fam:
                    yield (name, a, b)


def _v_designated(f: Frame):
    if f.w_T is None or not (0 <= f.w_T < f.size) or f.w_T not in f.order.maximal:
        yield (f.w_T,)


def _v_filters(f: Frame):
    for w in range(f.size):
        e = f.E[w]
        if not e:
            yield (w, "empty")
            continue
        for i in e:
            for j, b in enumerate(f.props):
                if f.props[i] & ~b == 0 and j not in e:
                    yield (w, "not upward closed", f.props[i], b)
            for j in e:
                if f.index.get(f.props[i] & f.props[j]) not in e:
                    yield (w, "not closed under meet", f.props[i], f.props[j])


def _v_monotone(f: Frame):
    for w in range(f.size):
        for v in range(f.size):
            if f.order.leq(w, v) and not f.E[w] <= f.E[v]:
                yield (w, v)


def _v_e4(f: Frame):
    for w in range(f.size):
        for i in f.E[w]:
            if not f.believed(w, f.k_op(f.props[i])):
                yield (w, f.props[i])


def _v_e5(f: Frame):
    for w in range(f.size):
        succ = [v for v in range(f.size) if f.order.leq(w, v)]
        for a in f.props:
            if not any(f.believed(v, a) for v in succ):
                if not f.believed(w, f.imp(f.k_op(a), 0)):
                    yield (w, a)


def _v_constant(f: Frame):
    for w in range(1, f.size):
        if f.E[w] != f.E[0]:
            yield (w,)


def _v_knowledge(f: Frame):
    maxmask = sum(1 << w for w in f.order.maximal)
    for w in range(f.size):
        reach = maxmask & f.order.up[w]
        for i in f.E[w]:
            if reach & ~f.props[i]:
                yield (w, f.props[i])


def _v_intco(f: Frame):
    for w in range(f.size):
        for i, a in enumerate(f.props):
            if a >> w & 1 and i not in f.E[w]:
                yield (w, a)


FRAME_CHECKS = {
    "rooted order": _v_rooted,
    "upper sets": _v_upper,
    "closure": _v_closure,
    "designated maximal world": _v_designated,
    "filters": _v_filters,
    "monotone": _v_monotone,
    "positive introspection": _v_e4,
    "negative introspection": _v_e5,
    "constant belief": _v_constant,
    "knowledge": _v_knowledge,
    "co-reflection": _v_intco,
}


@dataclass(frozen=True)
class FrameReport:
    violations: tuple[tuple[str, tuple], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def check_frame(f: Frame, cls: str | Logic, first_only: bool = False) -> FrameReport:
    lg = get_logic(cls)
    names = frame_conditions(lg)
    if lg.epistemic and f.E is None:
        return FrameReport((("filters", ("no belief function",)),))
    found = []
    for name in names:
        for v in FRAME_CHECKS[name](f):
            found.append((name, v))
            if first_only or name in ("rooted order", "upper sets"):
                return FrameReport(tuple(found))
    return FrameReport(tuple(found))


# ------------------------------------------------------------- enumeration


def enumerate_frames(cls: str | Logic, max_worlds: int = 4) -> Iterator[Frame]:
    """Frames of ``cls`` over rooted posets with P = all upper sets, up to isomorphism."""
    lg = get_logic(cls)
    names = frame_conditions(lg)
    for order in rooted_posets_upto(max_worlds):
        props = order.upsets
        index = {a: i for i, a in enumerate(props)}
        autos = order.automorphisms
        designs = list(order.maximal) if lg.classical else [None]
        if lg.epistemic:
            es = _belief_functions(order, props, "constant belief" in names)
        else:
            es = [None]
        seen = set()
        for gens in es:
            E = None
            if gens is not None:
                E = tuple(frozenset(i for i, a in enumerate(props) if gens[w] & ~a == 0) for w in range(order.size))
            for wt in designs:
                f = Frame(order, props, E, wt)
                if any(next(FRAME_CHECKS[n](f), None) is not None for n in names):
                    continue
                key = min(
                    (
                        tuple(index[map_mask(gens[_inv(perm)[w]], perm)] for w in range(order.size)) if gens else (),
                        perm[wt] if wt is not None else -1,
                    )
                    for perm in autos
                )
                if key in seen:
                    continue
                seen.add(key)
                yield f


def _inv(perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for a, b in enumerate(perm):
        out[b] = a
    return tuple(out)


def _belief_functions(order: Poset, props: tuple[int, ...], constant: bool) -> Iterator[tuple[int, ...]]:
    """Generators G_w (one admissible set per world), antitone along the order."""
    n = order.size
    if constant:
        for g in props:
            yield (g,) * n
        return
    # assign from the top of the order downwards: G_w must contain G_v for every v above w
    order_desc = sorted(range(n), key=lambda w: order.up[w].bit_count())
    chosen: dict[int, int] = {}

    def extend(i: int):
        if i == n:
            yield tuple(chosen[w] for w in range(n))
            return
        w = order_desc[i]
        need = 0
        for v in range(n):
            if v != w and order.leq(w, v):
                need |= chosen[v]
        for g in props:
            if need & ~g == 0:
                chosen[w] = g
                yield from extend(i + 1)
        chosen.pop(w, None)

    yield from extend(0)


# ------------------------------------------------------- vectorised evaluation


def extension_all(f_: Frame, formula: Formula, names: list[str]) -> np.ndarray:
    """World-set bitmasks of ``formula`` under every assignment of ``names`` into the props."""
    nprops = len(f_.props)
    props = np.array(f_.props, dtype=np.int64)
    up = f_.order.up
    n = f_.size
    full = f_.full
    axes = {}
    for i, x in enumerate(names):
        s = [1] * len(names)
        s[i] = nprops
        axes[x] = props.reshape(s)
    ktab = None
    if f_.E is not None:
        ktab = np.zeros(1 << n, dtype=np.int64)
        for a in f_.props:
            ktab[a] = f_.k_op(a)
    memo: dict[Formula, np.ndarray] = {}

    def ev(g: Formula) -> np.ndarray:
        if g in memo:
            return memo[g]
        if isinstance(g, Var):
            r = axes[g.name]
        elif isinstance(g, Bot):
            r = np.zeros([1] * len(names), dtype=np.int64)
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Imp):
            a, b = ev(g.left), ev(g.right)
            bad = a & ~b
            r = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
            for w in range(n):
                r |= np.where(bad & up[w] == 0, 1 << w, 0)
        elif isinstance(g, Box):
            r = np.where(ev(g.body) >> f_.root & 1, full, 0)
        else:
            if ktab is None:
                raise ValueError("frame has no belief function")
            r = ktab[ev(g.body)]
        memo[g] = r
        return r

    return np.broadcast_to(ev(formula), (nprops,) * len(names))


def truth_world(f_: Frame) -> int:
    return f_.w_T if f_.w_T is not None else f_.root
