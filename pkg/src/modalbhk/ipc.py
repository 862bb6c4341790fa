"""Decision procedure for intuitionistic propositional logic.

The prover is the contraction-free calculus G4ip in its multi-succedent form.
Invertible rules are applied eagerly.  When every non-invertible choice at an
irreducible sequent fails, the refuted premisses are glued under a fresh root
world, which yields a finite rooted Kripke countermodel.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from .posets import Poset, rooted_posets_upto
from .syntax import BOT, And, Bot, Box, Formula, Imp, K, Or, Var, show, variables


@dataclass(frozen=True)
class KripkeModel:
    """Rooted intuitionistic Kripke model; world 0 is the root."""

    order: Poset
    valuation: tuple[frozenset[str], ...]

    @property
    def size(self) -> int:
        return self.order.size

    def validate(self) -> None:
        if self.order.root != 0:
            raise ValueError("world 0 must be the root")
        for w in range(self.size):
            for v in range(self.size):
                if self.order.leq(w, v) and not self.valuation[w] <= self.valuation[v]:
                    raise ValueError(f"valuation not persistent from {w} to {v}")

    def extension(self, f: Formula) -> int:
        """Bitmask of worlds forcing ``f``."""
        return _extension(self, f, {})

    def to_json(self) -> dict:
        return {
            "worlds": self.size,
            "order": ["".join("1" if self.order.leq(i, j) else "0" for j in range(self.size)) for i in range(self.size)],
            "valuation": [sorted(v) for v in self.valuation],
        }

    @classmethod
    def from_json(cls, data: dict) -> "KripkeModel":
        rows = data["order"]
        order = Poset.from_matrix([[c == "1" for c in row] for row in rows])
        m = cls(order, tuple(frozenset(v) for v in data["valuation"]))
        m.validate()
        return m


def _extension(m: KripkeModel, f: Formula, memo: dict) -> int:
    if f in memo:
        return memo[f]
    if isinstance(f, Var):
        r = sum(1 << w for w in range(m.size) if f.name in m.valuation[w])
    elif isinstance(f, Bot):
        r = 0
    elif isinstance(f, And):
        r = _extension(m, f.left, memo) & _extension(m, f.right, memo)
    elif isinstance(f, Or):
        r = _extension(m, f.left, memo) | _extension(m, f.right, memo)
    elif isinstance(f, Imp):
        a = _extension(m, f.left, memo)
        b = _extension(m, f.right, memo)
        r = sum(1 << w for w in range(m.size) if m.order.up[w] & a & ~b == 0)
    else:
        raise ValueError(f"modal formula {show(f)} has no Kripke value")
    memo[f] = r
    return r


def eval_kripke(m: KripkeModel, w: int, f: Formula) -> bool:
    return bool(m.extension(f) >> w & 1)


# ------------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class Proof:
    rule: str
    gamma: frozenset
    delta: frozenset
    premises: tuple["Proof", ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


@dataclass(frozen=True)
class Theorem:
    proof: Proof


@dataclass(frozen=True)
class NonTheorem:
    countermodel: KripkeModel


IpcVerdict = Union[Theorem, NonTheorem]


@dataclass(frozen=True)
class _Tree:
    atoms: frozenset[str]
    children: tuple["_Tree", ...] = field(default=())


def _to_model(tree: _Tree) -> KripkeModel:
    worlds: list[frozenset[str]] = []
    spans: list[tuple[int, int]] = []

    def visit(node: _Tree) -> None:
        # a world with one successor and the same atoms is bisimilar to that successor
        while len(node.children) == 1 and node.children[0].atoms == node.atoms:
            node = node.children[0]
        idx = len(worlds)
        worlds.append(node.atoms)
        spans.append((idx, idx))
        for child in node.children:
            visit(child)
        spans[idx] = (idx, len(worlds))

    visit(tree)
    up = tuple(sum(1 << j for j in range(a, b)) for a, b in spans)
    return KripkeModel(Poset(len(worlds), up), tuple(worlds))


@lru_cache(maxsize=None)
def _key(f: Formula) -> str:
    return show(f)


def _ordered(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(fs, key=_key)


def _check_propositional(f: Formula) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Box, K)):
            raise ValueError(f"not a propositional formula: {show(f)}")
        if isinstance(g, (And, Or, Imp)):
            stack.extend((g.left, g.right))


class _Search:
    def __init__(self) -> None:
        self.memo: dict[tuple[frozenset, frozenset], Proof | _Tree] = {}

    def run(self, gamma: frozenset, delta: frozenset) -> Proof | _Tree:
        key = (gamma, delta)
        if key not in self.memo:
            self.memo[key] = self._step(gamma, delta)
        return self.memo[key]

    def _step(self, gamma: frozenset, delta: frozenset) -> Proof | _Tree:
        if BOT in gamma:
            return Proof("L_bot", gamma, delta)
        if gamma & delta:
            return Proof("id", gamma, delta)

        for f in _ordered(gamma):
            rest = gamma - {f}
            if isinstance(f, And):
                return self._single("L_and", gamma, delta, rest | {f.left, f.right}, delta)
            if isinstance(f, Or):
                return self._all("L_or", gamma, delta, [(rest | {f.left}, delta), (rest | {f.right}, delta)])
            if isinstance(f, Imp):
                a, b = f.left, f.right
                if isinstance(a, Bot):
                    return self._single("L_bot_imp", gamma, delta, rest, delta)
                if isinstance(a, Var) and a in gamma:
                    return self._single("L0_imp", gamma, delta, rest | {b}, delta)
                if isinstance(a, And):
                    return self._single("L_and_imp", gamma, delta, rest | {Imp(a.left, Imp(a.right, b))}, delta)
                if isinstance(a, Or):
                    return self._single("L_or_imp", gamma, delta, rest | {Imp(a.left, b), Imp(a.right, b)}, delta)
        for f in _ordered(delta):
            rest = delta - {f}
            if isinstance(f, Bot):
                return self._single("R_bot", gamma, delta, gamma, rest)
            if isinstance(f, Or):
                return self._single("R_or", gamma, delta, gamma, rest | {f.left, f.right})
            if isinstance(f, And):
                return self._all("R_and", gamma, delta, [(gamma, rest | {f.left}), (gamma, rest | {f.right})])

        # irreducible: only non-invertible choices remain
        children: list[_Tree] = []
        for f in _ordered(gamma):
            if isinstance(f, Imp) and isinstance(f.left, Imp):
                c, d, b = f.left.left, f.left.right, f.right
                rest = gamma - {f}
                right = self.run(rest | {b}, delta)
                if isinstance(right, _Tree):
                    return right
                left = self.run(rest | {Imp(d, b), c}, frozenset({d}))
                if isinstance(left, Proof):
                    return Proof("L_imp_imp", gamma, delta, (left, right))
                children.append(left)
        for f in _ordered(delta):
            if isinstance(f, Imp):
                sub = self.run(gamma | {f.left}, frozenset({f.right}))
                if isinstance(sub, Proof):
                    return Proof("R_imp", gamma, delta, (sub,))
                children.append(sub)
        atoms = frozenset(g.name for g in gamma if isinstance(g, Var))
        return _Tree(atoms, tuple(children))

    def _single(self, rule, gamma, delta, g2, d2):
        sub = self.run(frozenset(g2), frozenset(d2))
        return Proof(rule, gamma, delta, (sub,)) if isinstance(sub, Proof) else sub

    def _all(self, rule, gamma, delta, premises):
        subs = []
        for g2, d2 in premises:
            sub = self.run(frozenset(g2), frozenset(d2))
            if isinstance(sub, _Tree):
                return sub
            subs.append(sub)
        return Proof(rule, gamma, delta, tuple(subs))


def decide_ipc(hypotheses: Iterable[Formula], goal: Formula) -> IpcVerdict:
    """Decide ``hypotheses |- goal`` in IPC.

    Hypotheses go straight into the antecedent, so a returned countermodel
    forces all of them at its root while refuting the goal there.
    """
    hyps = list(hypotheses)
    for f in hyps + [goal]:
        _check_propositional(f)
    result = _Search().run(frozenset(hyps), frozenset({goal}))
    if isinstance(result, Proof):
        return Theorem(result)
    return NonTheorem(_to_model(result))


def is_ipc_theorem(f: Formula) -> bool:
    return isinstance(decide_ipc([], f), Theorem)


def curry(hypotheses: Iterable[Formula], goal: Formula) -> Formula:
    out = goal
    for h in reversed(list(hypotheses)):
        out = Imp(h, out)
    return out


# ------------------------------------------------------ brute-force reference


def kripke_models(max_worlds: int, names: Iterable[str]):
    """Every rooted Kripke model up to ``max_worlds`` worlds over ``names``.

    Posets are taken up to isomorphism; valuations range over all upper sets.
    """
    names = list(names)
    for order in rooted_posets_upto(max_worlds):
        for choice in itertools.product(order.upsets, repeat=len(names)):
            val = tuple(
                frozenset(x for x, mask in zip(names, choice) if mask >> w & 1) for w in range(order.size)
            )
            yield KripkeModel(order, val)


def exhaustive_countermodel(f: Formula, max_worlds: int) -> KripkeModel | None:
    """First model (in enumeration order) whose root does not force ``f``.

    Each poset is checked against all valuations at once.
    """
    from .frames import Frame, extension_all

    _check_propositional(f)
    names = variables(f)
    for order in rooted_posets_upto(max_worlds):
        props = order.upsets
        ext = extension_all(Frame(order, props), f, names)
        hits = np.argwhere((ext & 1) == 0)
        if len(hits):
            choice = [props[i] for i in hits[0]]
            val = tuple(
                frozenset(x for x, mask in zip(names, choice) if mask >> w & 1) for w in range(order.size)
            )
            m = KripkeModel(order, val)
            assert not m.extension(f) & 1
            return m
    return None
