"""Formulas: abstract syntax, parser, printer, substitution, skeletons.

Only seven constructors exist.  Negation, verum, the biconditional, strict
equivalence (``==``) and the diamond are abbreviations that the parser expands
and the printer folds back.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Iterator, Mapping, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class K:
    body: "Formula"


Formula = Union[Var, Bot, And, Or, Imp, Box, K]

BOT = Bot()
TOP = Imp(BOT, BOT)


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def ident(a: Formula, b: Formula) -> Formula:
    """Strict equivalence: the box of the biconditional."""
    return Box(iff(a, b))


def dia(f: Formula) -> Formula:
    return neg(Box(neg(f)))


class Language(enum.Enum):
    """Fm0 is purely propositional, Fm1 adds the box, FmE adds K only, Fm has both."""

    FM0 = "Fm0"
    FM1 = "Fm1"
    FME = "FmE"
    FM = "Fm"


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (And, Or, Imp)):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Box, K)):
            stack.append(g.body)


def variables(f: Formula) -> list[str]:
    """Variables of ``f`` in first-occurrence order."""
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, Var):
            seen.setdefault(g.name)
    return list(seen)


def language_of(f: Formula) -> Language:
    has_box = has_k = False
    for g in subformulas(f):
        has_box |= isinstance(g, Box)
        has_k |= isinstance(g, K)
    if has_box and has_k:
        return Language.FM
    if has_box:
        return Language.FM1
    if has_k:
        return Language.FME
    return Language.FM0


def in_language(f: Formula, lang: Language) -> bool:
    have = language_of(f)
    if lang is Language.FM or have is Language.FM0:
        return True
    return have is lang


def depth(f: Formula) -> int:
    if isinstance(f, (Var, Bot)):
        return 0
    if isinstance(f, (Box, K)):
        return 1 + depth(f.body)
    return 1 + max(depth(f.left), depth(f.right))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# ---------------------------------------------------------------- substitution


def substitute(f: Formula, x: str, g: Formula) -> Formula:
    return substitute_all(f, {x: g})


def substitute_all(f: Formula, sigma: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution of every occurrence of each mapped variable."""
    if isinstance(f, Var):
        return sigma.get(f.name, f)
    if isinstance(f, Bot):
        return f
    if isinstance(f, (Box, K)):
        return type(f)(substitute_all(f.body, sigma))
    return type(f)(substitute_all(f.left, sigma), substitute_all(f.right, sigma))


SKELETON_PREFIX = "_s"


def skeleton(f: Formula) -> tuple[Formula, dict[str, Formula]]:
    """Abstract every variable and every maximal modal subformula.

    Returns a purely propositional formula over fresh variables ``_s0, _s1, ...``
    (first-occurrence order, identical subterms share a name) and the binding
    that maps each fresh name back to its subterm.
    """
    names: dict[Formula, str] = {}

    def walk(g: Formula) -> Formula:
        if isinstance(g, Bot):
            return g
        if isinstance(g, (Var, Box, K)):
            if g not in names:
                names[g] = f"{SKELETON_PREFIX}{len(names)}"
            return Var(names[g])
        return type(g)(walk(g.left), walk(g.right))

    prop = walk(f)
    return prop, {v: g for g, v in names.items()}


# ---------------------------------------------------------------------- parser


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str]):
        super().__init__(f"{message} at byte {offset}; expected one of: {', '.join(sorted(expected))}")
        self.offset = offset
        self.expected = expected


_UNICODE = {
    "¬": "~",
    "□": "[]",
    "◇": "<>",
    "∧": "&",
    "∨": "|",
    "→": "->",
    "↔": "<->",
    "≡": "==",
    "⊥": "_|_",
    "⊤": "T",
}
_SYMBOLS = ("<->", "_|_", "->", "[]", "<>", "==", "~", "&", "|", "(", ")")
_PREFIX = {"~", "[]", "<>", "K"}
_ATOM_START = frozenset({"identifier", "_|_", "T", "(", "~", "[]", "<>", "K"})


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return ``(kind, value, byte_offset)`` triples, ending with an ``end`` token."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        offset = len(text[:i].encode())
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _UNICODE:
            sym = _UNICODE[c]
            tokens.append((sym, sym, offset))
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append((sym, sym, offset))
                i += len(sym)
                break
        else:
            if c.isascii() and (c.isalpha() or c == "_"):
                j = i + 1
                while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                kind = word if word in ("K", "T") else "identifier"
                tokens.append((kind, word, offset))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", offset, _ATOM_START)
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: set[str]) -> ParseError:
        kind, value, offset = self.tokens[self.pos]
        what = "end of input" if kind == "end" else f"token {value!r}"
        return ParseError(f"unexpected {what}", offset, frozenset(expected))

    def formula(self) -> Formula:
        left = self.implication()
        if self.peek() in ("<->", "=="):
            op = self.take()[0]
            right = self.implication()
            left = iff(left, right) if op == "<->" else ident(left, right)
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, _ = self.tokens[self.pos]
        if kind in _PREFIX:
            self.take()
            body = self.unary()
            return {"~": neg, "[]": Box, "<>": dia, "K": K}[kind](body)
        if kind == "identifier":
            self.take()
            return Var(value)
        if kind == "_|_":
            self.take()
            return BOT
        if kind == "T":
            self.take()
            return TOP
        if kind == "(":
            self.take()
            inner = self.formula()
            if self.peek() != ")":
                raise self.fail({")", "&", "|", "->", "<->", "=="})
            self.take()
            return inner
        raise self.fail(set(_ATOM_START))


def parse(text: str) -> Formula:
    """Parse ASCII or Unicode surface syntax into a core formula.

    ``K`` is an operator only as a standalone word; ``Kx`` is a variable.
    """
    p = _Parser(text)
    f = p.formula()
    if p.peek() != "end":
        raise p.fail({"end", "&", "|", "->", "<->", "=="})
    return f


# --------------------------------------------------------------------- printer

_ATOM, _CONJ, _DISJ, _IMP, _EQ = 4, 3, 2, 1, 0


def _is_iff(f: Formula) -> bool:
    return (
        isinstance(f, And)
        and isinstance(f.left, Imp)
        and isinstance(f.right, Imp)
        and f.left.left == f.right.right
        and f.left.right == f.right.left
    )


def _render(f: Formula) -> tuple[str, int]:
    if isinstance(f, Var):
        return f.name, _ATOM
    if isinstance(f, Bot):
        return "_|_", _ATOM
    if f == TOP:
        return "T", _ATOM
    if isinstance(f, Imp) and f.right == BOT:
        inner = f.left
        if isinstance(inner, Box) and isinstance(inner.body, Imp) and inner.body.right == BOT:
            return _prefix("<>", inner.body.left)
        return _prefix("~", inner)
    if isinstance(f, Box) and _is_iff(f.body):
        return _binary("==", f.body.left.left, f.body.left.right, _IMP, _IMP, _EQ)
    if isinstance(f, Box):
        return _prefix("[]", f.body)
    if isinstance(f, K):
        return _prefix("K", f.body)
    if _is_iff(f):
        return _binary("<->", f.left.left, f.left.right, _IMP, _IMP, _EQ)
    if isinstance(f, And):
        return _binary("&", f.left, f.right, _CONJ, _ATOM, _CONJ)
    if isinstance(f, Or):
        return _binary("|", f.left, f.right, _DISJ, _CONJ, _DISJ)
    return _binary("->", f.left, f.right, _DISJ, _IMP, _IMP)


def _wrap(f: Formula, level: int) -> str:
    text, own = _render(f)
    return text if own >= level else f"({text})"


def _prefix(op: str, body: Formula) -> tuple[str, int]:
    text = _wrap(body, _ATOM)
    sep = " " if op == "K" and (text[0].isalnum() or text[0] == "_") else ""
    return f"{op}{sep}{text}", _ATOM


def _binary(op: str, a: Formula, b: Formula, left: int, right: int, own: int) -> tuple[str, int]:
    return f"{_wrap(a, left)} {op} {_wrap(b, right)}", own


def show(f: Formula) -> str:
    """Print with abbreviations restored, outermost first."""
    return _render(f)[0]


def random_formula(rng: random.Random, max_depth: int, names: tuple[str, ...] = ("p", "q", "r", "x", "y"),
                   modal: bool = True) -> Formula:
    """A random formula of depth at most ``max_depth`` (used by property suites)."""
    if max_depth == 0 or rng.random() < 0.15:
        return BOT if rng.random() < 0.1 else Var(rng.choice(names))
    ops = ["and", "or", "imp", "neg"] + (["box", "k"] if modal else [])
    op = rng.choice(ops)
    d = max_depth - 1
    if op == "neg":
        return neg(random_formula(rng, d, names, modal))
    if op == "box":
        return Box(random_formula(rng, d, names, modal))
    if op == "k":
        return K(random_formula(rng, d, names, modal))
    cls = {"and": And, "or": Or, "imp": Imp}[op]
    return cls(random_formula(rng, d, names, modal), random_formula(rng, d, names, modal))


print_formula = show
