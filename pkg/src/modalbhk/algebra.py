"""Finite Heyting algebras and algebraic models of the modal/epistemic logics.

Elements are indices ``0..n-1``.  Algebras built from a poset keep the
underlying upper sets (as bitmasks) in ``sets``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Mapping

import numpy as np

from .calculi import Logic, get_logic
from .posets import Poset, map_mask, rooted_posets_upto
from .syntax import And, Bot, Box, Formula, Imp, Language, Or, Var, show


@dataclass(frozen=True, eq=False)
class HeytingAlgebra:
    n: int
    leq: tuple[tuple[bool, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    imp: tuple[tuple[int, ...], ...]
    bot: int
    top: int
    sets: tuple[int, ...] | None = None
    poset: Poset | None = None

    @property
    def carrier(self) -> range:
        return range(self.n)

    def neg(self, a: int) -> int:
        return self.imp[a][self.bot]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def up(self, a: int) -> frozenset[int]:
        return frozenset(b for b in self.carrier if self.leq[a][b])

    @cached_property
    def tables(self) -> dict[str, np.ndarray]:
        return {
            "meet": np.array(self.meet, dtype=np.int16),
            "join": np.array(self.join, dtype=np.int16),
            "imp": np.array(self.imp, dtype=np.int16),
            "leq": np.array(self.leq, dtype=bool),
        }

    @classmethod
    def from_order(cls, leq) -> "HeytingAlgebra":
        """Algebra on a finite lattice given by its order matrix."""
        n = len(leq)
        leq = tuple(tuple(bool(v) for v in row) for row in leq)
        ups = [frozenset(b for b in range(n) if leq[a][b]) for a in range(n)]
        downs = [frozenset(b for b in range(n) if leq[b][a]) for a in range(n)]

        def greatest(cands):
            top = [c for c in cands if all(leq[d][c] for d in cands)]
            if len(top) != 1:
                raise ValueError("order is not a lattice")
            return top[0]

        def least(cands):
            low = [c for c in cands if all(leq[c][d] for d in cands)]
            if len(low) != 1:
                raise ValueError("order is not a lattice")
            return low[0]

        meet = tuple(tuple(greatest(downs[a] & downs[b]) for b in range(n)) for a in range(n))
        join = tuple(tuple(least(ups[a] & ups[b]) for b in range(n)) for a in range(n))
        imp = tuple(
            tuple(greatest([c for c in range(n) if leq[meet[c][a]][b]]) for b in range(n)) for a in range(n)
        )
        h = cls(n, leq, meet, join, imp, least(range(n)), greatest(range(n)))
        h.validate()
        return h

    def validate(self) -> None:
        r = self.carrier
        for a in r:
            if not (self.leq[self.bot][a] and self.leq[a][self.top]):
                raise ValueError("bounds")
            for b in r:
                m, j = self.meet[a][b], self.join[a][b]
                if not (self.leq[m][a] and self.leq[m][b] and self.leq[a][j] and self.leq[b][j]):
                    raise ValueError("meet/join")
                for c in r:
                    if self.meet[a][self.join[b][c]] != self.join[self.meet[a][b]][self.meet[a][c]]:
                        raise ValueError("distributivity")
                    if self.leq[self.meet[a][b]][c] != self.leq[a][self.imp[b][c]]:
                        raise ValueError("residuation")

    @cached_property
    def ultrafilters(self) -> tuple[frozenset[int], ...]:
        return tuple(algebra_filters(self)[2])

    def to_json(self) -> dict:
        return {"size": self.n, "leq": ["".join("1" if v else "0" for v in row) for row in self.leq]}

    def label(self, a: int) -> str:
        if self.sets is None:
            return str(a)
        members = [str(i) for i in range(self.poset.size) if self.sets[a] >> i & 1]
        return "{" + ",".join(members) + "}"


def upperset_algebra(p: Poset) -> HeytingAlgebra:
    """The Heyting algebra of upper sets of ``p`` (empty set first, whole set last)."""
    return set_algebra(p, p.upsets)


def set_algebra(p: Poset, sets) -> HeytingAlgebra:
    """Algebra on a family of upper sets of ``p`` closed under the Heyting operations."""
    sets = tuple(sets)
    index = {s: i for i, s in enumerate(sets)}
    n = len(sets)

    def imp(a: int, b: int) -> int:
        return sum(1 << w for w in range(p.size) if p.up[w] & a & ~b == 0)

    def look(s: int) -> int:
        if s not in index:
            raise ValueError("family is not closed under the Heyting operations")
        return index[s]

    leq = tuple(tuple(sets[i] & ~sets[j] == 0 for j in range(n)) for i in range(n))
    meet = tuple(tuple(look(sets[i] & sets[j]) for j in range(n)) for i in range(n))
    join = tuple(tuple(look(sets[i] | sets[j]) for j in range(n)) for i in range(n))
    imps = tuple(tuple(look(imp(sets[i], sets[j])) for j in range(n)) for i in range(n))
    return HeytingAlgebra(n, leq, meet, join, imps, look(0), look(p.full), sets, p)


def algebra_filters(h: HeytingAlgebra) -> tuple[list[frozenset[int]], list[frozenset[int]], list[frozenset[int]]]:
    """All filters, the prime filters and the ultrafilters.

    In a finite lattice every filter is principal, so the filters are the
    up-sets of single elements.
    """
    filters = sorted({h.up(a) for a in h.carrier}, key=lambda f: (len(f), sorted(f)))
    proper = [f for f in filters if h.bot not in f]
    prime = [f for f in proper if all(a in f or b in f for a in h.carrier for b in h.carrier if h.join[a][b] in f)]
    ultra = [f for f in proper if not any(f < g for g in proper)]
    return filters, prime, ultra


def meet_irreducibles(h: HeytingAlgebra) -> list[int]:
    """Elements other than top with exactly one upper cover."""
    out = []
    for a in h.carrier:
        if a == h.top:
            continue
        above = [b for b in h.carrier if b != a and h.leq[a][b]]
        covers = [b for b in above if not any(c != b and h.leq[c][b] for c in above)]
        if len(covers) == 1:
            out.append(a)
    return out


def has_disjunction_property(h: HeytingAlgebra) -> bool:
    return all(a == h.top or b == h.top for a in h.carrier for b in h.carrier if h.join[a][b] == h.top)


# --------------------------------------------------------------------- models


@dataclass(frozen=True, eq=False)
class AlgebraicModel:
    """``true_filter`` is None for intuitionistic (IEL-style) models, where truth is being top."""

    algebra: HeytingAlgebra
    true_filter: frozenset[int] | None
    box: tuple[int, ...] | None = None
    k: tuple[int, ...] | None = None
    cls: str | None = None

    @property
    def classical(self) -> bool:
        return self.true_filter is not None

    def is_true(self, a: int) -> bool:
        if self.true_filter is None:
            return a == self.algebra.top
        return a in self.true_filter

    @cached_property
    def bel(self) -> frozenset[int]:
        if self.k is None:
            return frozenset()
        return frozenset(a for a in self.algebra.carrier if self.is_true(self.k[a]))

    def key(self) -> tuple:
        return (tuple(sorted(self.true_filter)) if self.true_filter is not None else None, self.box, self.k)

    def to_json(self) -> dict:
        d = self.algebra.to_json()
        d.update(
            {
                "class": self.cls,
                "true_filter": sorted(self.true_filter) if self.true_filter is not None else None,
                "box": list(self.box) if self.box is not None else None,
                "k": list(self.k) if self.k is not None else None,
            }
        )
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> "AlgebraicModel":
        leq = [[c == "1" for c in row] for row in data["leq"]]
        if len(leq) != data.get("size", len(leq)):
            raise ValueError("size does not match leq rows")
        h = HeytingAlgebra.from_order(leq)
        tf = data.get("true_filter")
        box = data.get("box")
        k = data.get("k")
        return cls(
            h,
            frozenset(tf) if tf is not None else None,
            tuple(box) if box is not None else None,
            tuple(k) if k is not None else None,
            data.get("class"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def describe(self) -> str:
        h = self.algebra
        lab = h.label
        parts = [f"carrier {[lab(a) for a in h.carrier]}"]
        if self.true_filter is not None:
            parts.append(f"TRUE {[lab(a) for a in sorted(self.true_filter)]}")
        if self.box is not None:
            parts.append(f"box {[lab(self.box[a]) for a in h.carrier]}")
        if self.k is not None:
            parts.append(f"K {[lab(self.k[a]) for a in h.carrier]}")
        return "; ".join(parts)


Assignment = Mapping[str, int]


def eval(m: AlgebraicModel, g: Assignment, f: Formula) -> int:  # noqa: A001 - mirrors the semantic function
    h = m.algebra
    if isinstance(f, Var):
        if f.name not in g:
            raise KeyError(f"unassigned variable {f.name}")
        return g[f.name]
    if isinstance(f, Bot):
        return h.bot
    if isinstance(f, And):
        return h.meet[eval(m, g, f.left)][eval(m, g, f.right)]
    if isinstance(f, Or):
        return h.join[eval(m, g, f.left)][eval(m, g, f.right)]
    if isinstance(f, Imp):
        return h.imp[eval(m, g, f.left)][eval(m, g, f.right)]
    if isinstance(f, Box):
        if m.box is None:
            raise ValueError(f"model has no box operation: {show(f)}")
        return m.box[eval(m, g, f.body)]
    if m.k is None:
        raise ValueError(f"model has no K operation: {show(f)}")
    return m.k[eval(m, g, f.body)]


def satisfies(m: AlgebraicModel, g: Assignment, f: Formula) -> bool:
    return m.is_true(eval(m, g, f))


def eval_all(m: AlgebraicModel, f: Formula, names: list[str]) -> np.ndarray:
    """Values of ``f`` under every assignment to ``names``: an array with one axis per name."""
    ks = np.array([m.k], dtype=np.int16) if m.k is not None else None
    return eval_batch(m.algebra, m.box, ks, f, names)[0]


def eval_batch(h: HeytingAlgebra, box, ks: np.ndarray | None, f: Formula, names: list[str]) -> np.ndarray:
    """Like :func:`eval_all` for a stack of K tables sharing algebra and box.

    ``ks`` has shape ``(B, n)``; the result has shape ``(B, n, ..., n)``.
    """
    t = h.tables
    d = len(names)
    batch = 1 if ks is None else ks.shape[0]
    axes = {}
    for i, x in enumerate(names):
        s = [1] * (d + 1)
        s[i + 1] = h.n
        axes[x] = np.arange(h.n, dtype=np.int16).reshape(s)
    bx = np.array(box, dtype=np.int16) if box is not None else None
    rows = np.arange(batch).reshape([batch] + [1] * d)
    memo: dict[Formula, np.ndarray] = {}

    def ev(g: Formula) -> np.ndarray:
        if g in memo:
            return memo[g]
        if isinstance(g, Var):
            r = axes[g.name]
        elif isinstance(g, Bot):
            r = np.full([1] * (d + 1), h.bot, dtype=np.int16)
        elif isinstance(g, (And, Or, Imp)):
            table = t[{And: "meet", Or: "join", Imp: "imp"}[type(g)]]
            r = table[ev(g.left), ev(g.right)]
        elif isinstance(g, Box):
            if bx is None:
                raise ValueError("model has no box operation")
            r = bx[ev(g.body)]
        else:
            if ks is None:
                raise ValueError("model has no K operation")
            r = ks[rows, ev(g.body)]
        memo[g] = r
        return r

    return np.broadcast_to(ev(f), (batch,) + (h.n,) * d)


def truth_mask(m: AlgebraicModel) -> np.ndarray:
    h = m.algebra
    return np.array([m.is_true(a) for a in h.carrier], dtype=bool)


# ---------------------------------------------------------- class conditions
#
# Each check returns an integer array of witnesses, one row per violation.

Check = Callable[[AlgebraicModel], np.ndarray]


def _arrays(m: AlgebraicModel):
    t = m.algebra.tables
    box = np.array(m.box, dtype=np.int16) if m.box is not None else None
    k = np.array(m.k, dtype=np.int16) if m.k is not None else None
    return t, box, k


def _unary(bad: np.ndarray) -> np.ndarray:
    return np.argwhere(bad)


def _binary(bad: np.ndarray) -> np.ndarray:
    return np.argwhere(bad)


def _c_ultrafilter(m):
    if m.true_filter not in m.algebra.ultrafilters:
        return np.array([sorted(m.true_filter)])
    return np.empty((0, 1), dtype=int)


def _c_dp(m):
    h = m.algebra
    j = h.tables["join"]
    idx = np.arange(h.n)
    bad = (j == h.top) & (idx[:, None] != h.top) & (idx[None, :] != h.top)
    return _binary(bad)


def _c_box_i(m):
    t, bx, _ = _arrays(m)
    lhs = bx[t["join"]]
    rhs = t["join"][bx[:, None], bx[None, :]]
    return _binary(~t["leq"][lhs, rhs])


def _c_box_ii(m):
    t, bx, _ = _arrays(m)
    return _unary(~t["leq"][bx, np.arange(len(bx))])


def _c_box_iii(m):
    t, bx, _ = _arrays(m)
    lhs = bx[t["imp"]]
    rhs = bx[t["imp"][bx[:, None], bx[None, :]]]
    return _binary(~t["leq"][lhs, rhs])


def _c_box_iv(m):
    h = m.algebra
    _, bx, _ = _arrays(m)
    truth = truth_mask(m)
    idx = np.arange(h.n)
    return _unary(truth[bx] != (idx == h.top))


def _c_a4(m):
    t, bx, _ = _arrays(m)
    return _unary(~t["leq"][bx, bx[bx]])


def _c_rigid(m):
    h = m.algebra
    _, bx, _ = _arrays(m)
    idx = np.arange(h.n)
    return _unary(bx != np.where(idx == h.top, h.top, h.bot))


def _c_kbel(m):
    t, _, k = _arrays(m)
    lhs = k[t["imp"]]
    rhs = t["imp"][k[:, None], k[None, :]]
    return _binary(~t["leq"][lhs, rhs])


def _c_core(m):
    t, bx, k = _arrays(m)
    return _unary(~t["leq"][bx, bx[k]])


def _neg(m):
    h = m.algebra
    return h.tables["imp"][:, h.bot]


def _c_intre(m):
    t, _, k = _arrays(m)
    ng = _neg(m)
    return _unary(~t["leq"][k, ng[ng]])


def _c_intco(m):
    t, _, k = _arrays(m)
    return _unary(~t["leq"][np.arange(len(k)), k])


def _c_e4(m):
    t, _, k = _arrays(m)
    return _unary(~t["leq"][k, k[k]])


def _c_e5(m):
    t, _, k = _arrays(m)
    nk = _neg(m)[k]
    return _unary(~t["leq"][nk, k[nk]])


def _c_pnb(m):
    t, bx, k = _arrays(m)
    return _unary(~t["leq"][k, bx[k]])


def _c_nnb(m):
    t, bx, k = _arrays(m)
    nk = _neg(m)[k]
    return _unary(~t["leq"][nk, bx[nk]])


def _c_top_believed(m):
    h = m.algebra
    if m.k[h.top] != h.top:
        return np.array([[h.top]])
    return np.empty((0, 1), dtype=int)


CONDITIONS: dict[str, Check] = {
    "ultrafilter": _c_ultrafilter,
    "disjunction property": _c_dp,
    "box distributes over join": _c_box_i,
    "box reflexive": _c_box_ii,
    "box transitivity": _c_box_iii,
    "box truth": _c_box_iv,
    "box idempotent": _c_a4,
    "box rigid": _c_rigid,
    "K distribution": _c_kbel,
    "co-reflection": _c_core,
    "intuitionistic reflection": _c_intre,
    "intuitionistic co-reflection": _c_intco,
    "positive introspection": _c_e4,
    "negative introspection": _c_e5,
    "positive necessitation": _c_pnb,
    "negative necessitation": _c_nnb,
    "top believed": _c_top_believed,
}

_SCHEME_CONDITION = {
    "A1": "box distributes over join",
    "A2": "box reflexive",
    "A3": "box transitivity",
    "TRANS": "box transitivity",
    "A4": "box idempotent",
    "A5": "box rigid",
    "KBel": "K distribution",
    "CoRe": "co-reflection",
    "IntRe": "intuitionistic reflection",
    "IntCo": "intuitionistic co-reflection",
    "E4": "positive introspection",
    "E5": "negative introspection",
    "PNB": "positive necessitation",
    "NNB": "negative necessitation",
}


def model_conditions(logic: str | Logic) -> list[str]:
    """Names of the conditions defining the algebraic models of ``logic``.

    Models of L are taken to be those of L3.  The (A4)-equivalent simplified
    schemes DIST and WCoRe are read as (A3) and (CoRe).
    """
    lg = get_logic(logic)
    axioms = set(lg.axioms)
    if "DIST" in axioms or "WCoRe" in axioms:
        if "A4" not in axioms:
            raise ValueError(f"no algebraic semantics for {lg.name}")
        axioms |= {"A3"} if "DIST" in axioms else set()
        axioms |= {"CoRe"} if "WCoRe" in axioms else set()
    names = ["disjunction property"]
    if lg.classical:
        names.insert(0, "ultrafilter")
    if lg.language in (Language.FM1, Language.FM):
        names.append("box truth")
    elif not lg.classical and lg.language is Language.FME:
        names.append("top believed")
    for s in ("A1", "A2", "A3", "TRANS", "A4", "A5", "KBel", "CoRe", "IntRe", "IntCo", "E4", "E5", "PNB", "NNB"):
        if s in axioms:
            c = _SCHEME_CONDITION[s]
            if c not in names:
                names.append(c)
    return names


@dataclass(frozen=True)
class ModelReport:
    violations: tuple[tuple[str, tuple], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def check_model(m: AlgebraicModel, cls: str | Logic, first_only: bool = False) -> ModelReport:
    """Check the defining conditions of ``cls``; each violation names a condition and a witness tuple."""
    lg = get_logic(cls)
    found = []
    if lg.classical and m.true_filter is None:
        return ModelReport((("ultrafilter", ()),))
    if lg.language in (Language.FM1, Language.FM) and m.box is None:
        return ModelReport((("box truth", ()),))
    if lg.epistemic and m.k is None:
        return ModelReport((("K distribution", ()),))
    for name in model_conditions(lg):
        for witness in CONDITIONS[name](m):
            found.append((name, tuple(int(v) for v in witness)))
            if first_only:
                return ModelReport(tuple(found))
    return ModelReport(tuple(found))


# ---------------------------------------------------------------- enumeration


def _automorphisms(h: HeytingAlgebra) -> list[tuple[int, ...]]:
    """Carrier permutations induced by the automorphisms of the underlying poset."""
    index = {s: i for i, s in enumerate(h.sets)}
    return [tuple(index[map_mask(s, perm)] for s in h.sets) for perm in h.poset.automorphisms]


def _canonical_key(m: AlgebraicModel, autos: list[tuple[int, ...]]) -> tuple:
    best = None
    for pi in autos:
        inv = [0] * len(pi)
        for a, b in enumerate(pi):
            inv[b] = a
        tf = tuple(sorted(pi[a] for a in m.true_filter)) if m.true_filter is not None else None
        bx = tuple(pi[m.box[inv[a]]] for a in range(len(pi))) if m.box is not None else None
        k = tuple(pi[m.k[inv[a]]] for a in range(len(pi))) if m.k is not None else None
        key = (tf, bx, k)
        if best is None or key < best:
            best = key
    return best


def _box_tables(h: HeytingAlgebra, lg: Logic, true_filter, cap: int) -> list[tuple[int, ...]]:
    if "A5" in lg.axioms:
        return [tuple(h.top if a == h.top else h.bot for a in h.carrier)]
    if h.n > cap:
        return []
    downs = [[b for b in h.carrier if h.leq[b][a]] for a in h.carrier]
    names = [c for c in model_conditions(lg) if c.startswith("box")]
    out = []
    for table in itertools.product(*downs):
        m = AlgebraicModel(h, true_filter, table)
        if all(len(CONDITIONS[c](m)) == 0 for c in names):
            out.append(table)
    return out


def _k_tables(h: HeytingAlgebra, lg: Logic, box, true_filter, cap: int) -> Iterator[tuple[int, ...]]:
    """Candidate K tables, generated as meet-preserving maps when the class forces that."""
    axioms = lg.axioms
    forced = "KBel" in axioms and ({"CoRe", "WCoRe", "IntCo"} & axioms) and (box is not None or "IntCo" in axioms)
    if not forced:
        if h.n > cap:
            return
        yield from itertools.product(h.carrier, repeat=h.n)
        return
    nn = [h.neg(h.neg(a)) for a in h.carrier]
    rigid = box is not None and all(box[a] == (h.top if a == h.top else h.bot) for a in h.carrier)

    def allowed(a: int) -> list[int]:
        vals = list(h.carrier)
        if "IntRe" in axioms:
            vals = [v for v in vals if h.leq[v][nn[a]]]
        if "IntCo" in axioms:
            vals = [v for v in vals if h.leq[a][v]]
        if rigid and "PNB" in axioms:
            vals = [v for v in vals if v in (h.bot, h.top)]
        return vals

    mis = meet_irreducibles(h)
    # order so that larger elements come first; monotonicity then prunes early
    mis.sort(key=lambda a: sum(h.leq[a]))
    above = {a: [b for b in mis if h.leq[a][b]] for a in h.carrier}
    options = {a: allowed(a) for a in mis}
    chosen: dict[int, int] = {}

    def extend(i: int):
        if i == len(mis):
            table = []
            for a in h.carrier:
                v = h.top
                for b in above[a]:
                    v = h.meet[v][chosen[b]]
                table.append(v)
            yield tuple(table)
            return
        a = mis[i]
        for v in options[a]:
            if all(h.leq[v][chosen[b]] for b in mis[:i] if h.leq[a][b]):
                chosen[a] = v
                yield from extend(i + 1)
        chosen.pop(a, None)

    yield from extend(0)


def enumerate_models(cls: str | Logic, max_worlds: int = 5, max_carrier: int | None = None,
                     table_cap: int = 5) -> Iterator[AlgebraicModel]:
    """All models of ``cls`` on upper-set algebras of rooted posets, up to isomorphism.

    ``max_worlds`` bounds the poset, ``max_carrier`` the algebra.  Box tables
    other than the rigid one, and unconstrained K tables, are only searched on
    carriers of at most ``table_cap`` elements.
    """
    lg = get_logic(cls)
    conds = model_conditions(lg)
    has_box = lg.language in (Language.FM1, Language.FM)
    for poset in rooted_posets_upto(max_worlds):
        h = upperset_algebra(poset)
        if max_carrier is not None and h.n > max_carrier:
            continue
        autos = _automorphisms(h)
        if lg.classical:
            trues = []
            for w in poset.maximal:
                tf = frozenset(i for i, s in enumerate(h.sets) if s >> w & 1)
                if not any(frozenset(pi[a] for a in tf) in trues for pi in autos):
                    trues.append(tf)
        else:
            trues = [None]
        for tf in trues:
            # only automorphisms fixing TRUE can identify two models sharing it
            stab = [pi for pi in autos if tf is None or frozenset(pi[a] for a in tf) == tf]
            seen = set()
            boxes = _box_tables(h, lg, tf, table_cap) if has_box else [None]
            for bx in boxes:
                ks = _k_tables(h, lg, bx, tf, table_cap) if lg.epistemic else [None]
                for k in ks:
                    m = AlgebraicModel(h, tf, bx, k, lg.name)
                    if any(len(CONDITIONS[c](m)) for c in conds):
                        continue
                    key = _canonical_key(m, stab) if len(stab) > 1 else m.key()
                    if key in seen:
                        continue
                    seen.add(key)
                    yield m


def rigid_model(p: Poset, true_world: int, k: tuple[int, ...] | None = None, cls: str | None = None) -> AlgebraicModel:
    """Model on the upper sets of ``p`` with rigid box and TRUE the ultrafilter of ``true_world``."""
    h = upperset_algebra(p)
    tf = frozenset(i for i, s in enumerate(h.sets) if s >> true_world & 1)
    box = tuple(h.top if a == h.top else h.bot for a in h.carrier)
    return AlgebraicModel(h, tf, box, k, cls)
