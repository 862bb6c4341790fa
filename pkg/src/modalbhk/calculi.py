"""Hilbert systems: axiom schemes, the logic hierarchy, derivation checking.

Derivation lines are numbered from 1, in files and in ``MP(i, j)`` alike.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

from . import syntax
from .ipc import is_ipc_theorem
from .syntax import BOT, And, Bot, Box, Formula, Imp, K, Language, Or, Var, in_language, parse, show, skeleton

# ----------------------------------------------------------------------- schemes

_META = ("P", "Q", "R")

_PATTERNS: dict[str, str] = {
    "A1": "[](P | Q) -> []P | []Q",
    "A2": "[]P -> P",
    "A3": "[](P -> Q) -> []([]P -> []Q)",
    "A4": "[]P -> [][]P",
    "A5": "~[]P -> []~[]P",
    "TRANS": "[](P -> Q) -> [](Q -> R) -> [](P -> R)",
    "DIST": "[](P -> Q) -> []P -> []Q",
    "KBel": "K(P -> Q) -> K P -> K Q",
    "CoRe": "[]P -> []K P",
    "WCoRe": "[]P -> K P",
    "IntRe": "K P -> ~~P",
    "IntCo": "P -> K P",
    "E4": "K P -> K K P",
    "E5": "~K P -> K ~K P",
    "PNB": "K P -> []K P",
    "NNB": "~K P -> []~K P",
}
PATTERNS: dict[str, Formula] = {name: parse(text) for name, text in _PATTERNS.items()}

# fixed recognition order; INT comes last
SCHEME_ORDER = ("A1", "A2", "A3", "A4", "A5", "TRANS", "DIST", "KBel", "CoRe", "WCoRe", "IntRe", "IntCo",
                "E4", "E5", "PNB", "NNB", "INT")
THEOREM_SCHEMES = ("TND", "SP")
ALL_SCHEMES = SCHEME_ORDER + THEOREM_SCHEMES


def _match(pat: Formula, f: Formula, env: dict[str, Formula]) -> bool:
    if isinstance(pat, Var) and pat.name in _META:
        bound = env.get(pat.name)
        if bound is None:
            env[pat.name] = f
            return True
        return bound == f
    if type(pat) is not type(f):
        return False
    if isinstance(pat, (Var, Bot)):
        return pat == f
    if isinstance(pat, (Box, K)):
        return _match(pat.body, f.body, env)
    return _match(pat.left, f.left, env) and _match(pat.right, f.right, env)


def match_scheme(name: str, f: Formula) -> dict[str, Formula] | None:
    """Metavariable binding if ``f`` instantiates pattern scheme ``name``."""
    env: dict[str, Formula] = {}
    return env if _match(PATTERNS[name], f, env) else None


def instantiate(name: str, *args: Formula) -> Formula:
    return syntax.substitute_all(PATTERNS[name], dict(zip(_META, args)))


@lru_cache(maxsize=4096)
def is_int_instance(f: Formula) -> bool:
    """Substitution instance of an IPC theorem, decided on the skeleton."""
    prop, _ = skeleton(f)
    return is_ipc_theorem(prop)


def is_tnd_instance(f: Formula) -> bool:
    return isinstance(f, Or) and f.right == Imp(f.left, BOT)


def _iff_sides(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Box) and syntax._is_iff(f.body):
        return f.body.left.left, f.body.left.right
    return None


def _differs_only_at(c: Formula, d: Formula, a: Formula, b: Formula) -> bool:
    if c == d:
        return True
    if c == a and d == b:
        return True
    if type(c) is not type(d) or isinstance(c, (Var, Bot)):
        return False
    if isinstance(c, (Box, K)):
        return _differs_only_at(c.body, d.body, a, b)
    return _differs_only_at(c.left, d.left, a, b) and _differs_only_at(c.right, d.right, a, b)


def is_sp_instance(f: Formula) -> bool:
    """``(a == b) -> (C[x:=a] == C[x:=b])`` for some context C."""
    if not isinstance(f, Imp):
        return False
    premise, conclusion = _iff_sides(f.left), _iff_sides(f.right)
    if premise is None or conclusion is None:
        return False
    return _differs_only_at(*conclusion, *premise)


def is_scheme_instance(name: str, f: Formula) -> bool:
    if name == "INT":
        return is_int_instance(f)
    if name == "TND":
        return is_tnd_instance(f)
    if name == "SP":
        return is_sp_instance(f)
    return match_scheme(name, f) is not None


# ------------------------------------------------------------------------ logics


@dataclass(frozen=True)
class Logic:
    name: str
    axioms: frozenset[str]
    language: Language
    classical: bool = True  # AN, TND and SP are available
    primitive_sp: bool = False

    def has(self, scheme: str) -> bool:
        return scheme in self.axioms

    @property
    def epistemic(self) -> bool:
        return self.language in (Language.FM, Language.FME)

    @property
    def ascii_tag(self) -> str:
        m = re.fullmatch(r"(E[4-6]?L[3-5]|IEL)m", self.name)
        return f"{m.group(1)}-" if m else self.name


def _build_registry() -> dict[str, Logic]:
    reg: dict[str, Logic] = {}
    fm1 = Language.FM1
    reg["IPC"] = Logic("IPC", frozenset({"INT"}), Language.FM0, classical=False)
    reg["L"] = Logic("L", frozenset({"INT", "A1", "A2", "TRANS"}), fm1, primitive_sp=True)
    base = {"INT", "A1", "A2", "A3"}
    for n, extra in ((3, set()), (4, {"A4"}), (5, {"A4", "A5"})):
        ln = base | extra
        reg[f"L{n}"] = Logic(f"L{n}", frozenset(ln), fm1)
        el = ln | {"KBel", "CoRe"}
        variants = {
            f"EL{n}": el,
            f"E4L{n}": el | {"E4"},
            f"E5L{n}": el | {"E4", "E5"},
            f"E6L{n}": el | {"PNB", "NNB"},
        }
        for tag, ax in variants.items():
            reg[f"{tag}m"] = Logic(f"{tag}m", frozenset(ax), Language.FM)
            reg[tag] = Logic(tag, frozenset(ax | {"IntRe"}), Language.FM)
    reg["IELm"] = Logic("IELm", frozenset({"INT", "KBel", "IntCo"}), Language.FME, classical=False)
    reg["IEL"] = Logic("IEL", frozenset({"INT", "KBel", "IntCo", "IntRe"}), Language.FME, classical=False)
    reg["EL5star"] = Logic("EL5star", reg["L5"].axioms | {"IntCo", "IntRe", "KBel"}, Language.FM)
    return reg


LOGICS: dict[str, Logic] = _build_registry()
_MOD = re.compile(r"([+-])(" + "|".join(sorted(SCHEME_ORDER, key=len, reverse=True)) + r")")


def get_logic(tag: str | Logic) -> Logic:
    """Resolve a tag such as ``EL5-``, ``E6L5m`` or ``EL4m-A3+DIST``.

    A trailing ``-`` on a bare tag is the ASCII spelling of the belief variant.
    ``+S`` and ``-S`` add or remove axiom scheme ``S``.
    """
    if isinstance(tag, Logic):
        return tag
    tag = tag.strip()
    if tag in LOGICS:
        return LOGICS[tag]
    if tag.endswith("-") and tag[:-1] + "m" in LOGICS:
        return LOGICS[tag[:-1] + "m"]
    m = re.fullmatch(r"([A-Za-z0-9]+?)((?:[+-][A-Za-z0-9]+)+)", tag)
    if m and m.group(1) in LOGICS:
        base = LOGICS[m.group(1)]
        axioms = set(base.axioms)
        mods = _MOD.findall(m.group(2))
        if "".join(s + n for s, n in mods) != m.group(2):
            raise KeyError(f"unknown scheme modifier in {tag!r}")
        for sign, name in mods:
            (axioms.add if sign == "+" else axioms.discard)(name)
        lang = base.language
        if any(s in axioms for s in ("KBel", "CoRe", "WCoRe", "IntRe", "IntCo", "E4", "E5", "PNB", "NNB")):
            lang = Language.FM if base.classical else Language.FME
        return Logic(tag, frozenset(axioms), lang, base.classical, base.primitive_sp)
    raise KeyError(f"unknown logic {tag!r}")


def is_axiom_instance(logic: str | Logic, f: Formula) -> str | None:
    """First scheme of ``logic`` (in ``SCHEME_ORDER``) that ``f`` instantiates."""
    lg = get_logic(logic)
    for name in SCHEME_ORDER:
        if name in lg.axioms and is_scheme_instance(name, f):
            return name
    return None


# ------------------------------------------------------------------- derivations


@dataclass(frozen=True)
class Hyp:
    def __str__(self) -> str:
        return "hyp"


@dataclass(frozen=True)
class Axiom:
    scheme: str

    def __str__(self) -> str:
        return f"ax:{self.scheme}"


@dataclass(frozen=True)
class ThmScheme:
    scheme: str

    def __str__(self) -> str:
        return f"thm:{self.scheme}"


@dataclass(frozen=True)
class AN:
    scheme: str

    def __str__(self) -> str:
        return f"AN:{self.scheme}"


@dataclass(frozen=True)
class MP:
    i: int
    j: int

    def __str__(self) -> str:
        return f"MP {self.i} {self.j}"


Justification = Union[Hyp, Axiom, ThmScheme, AN, MP]


@dataclass(frozen=True)
class Line:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Derivation:
    logic: str
    hypotheses: tuple[Formula, ...]
    lines: tuple[Line, ...]

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def to_text(self) -> str:
        out = [f"logic: {self.logic}"]
        out += [f"hyp: {show(h)}" for h in self.hypotheses]
        out += [f"{n}. {show(ln.formula)} ; {ln.just}" for n, ln in enumerate(self.lines, 1)]
        return "\n".join(out) + "\n"


class DerivationSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_just(text: str) -> Justification:
    text = text.strip()
    if text == "hyp":
        return Hyp()
    m = re.fullmatch(r"MP\s+(\d+)\s+(\d+)", text)
    if m:
        return MP(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"(ax|thm|AN):\s*(\w+)", text)
    if not m:
        raise ValueError(f"bad justification {text!r}")
    kind, scheme = m.groups()
    if scheme not in ALL_SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    return {"ax": Axiom, "thm": ThmScheme, "AN": AN}[kind](scheme)


def parse_derivation(text: str) -> Derivation:
    logic = None
    hyps: list[Formula] = []
    lines: list[Line] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        src = raw.split("#", 1)[0].strip()
        if not src:
            continue
        try:
            if src.startswith("logic:"):
                logic = src[len("logic:"):].strip()
            elif src.startswith("hyp:"):
                hyps.append(parse(src[len("hyp:"):]))
            else:
                m = re.fullmatch(r"(\d+)\.\s*(.*?)\s*;\s*([^;]*)", src)
                if not m:
                    raise ValueError("expected '<n>. <formula> ; <justification>'")
                if int(m.group(1)) != len(lines) + 1:
                    raise ValueError(f"expected step number {len(lines) + 1}")
                lines.append(Line(parse(m.group(2)), _parse_just(m.group(3))))
        except ValueError as e:
            raise DerivationSyntaxError(lineno, str(e)) from e
    if logic is None:
        raise DerivationSyntaxError(1, "missing 'logic:' header")
    if not lines:
        raise DerivationSyntaxError(1, "no derivation steps")
    return Derivation(logic, tuple(hyps), tuple(lines))


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: int | None = None
    reason: str | None = None
    notes: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.accepted


def check_line(lg: Logic, d: Derivation, n: int, strict_sp: bool = False) -> str | None:
    """Reason why step ``n`` (1-based) is not justified, or None."""
    ln = d.lines[n - 1]
    f, j = ln.formula, ln.just
    if not in_language(f, lg.language):
        return f"formula outside language {lg.language.value}"
    if isinstance(j, Hyp):
        return None if f in d.hypotheses else "not a hypothesis"
    if isinstance(j, Axiom):
        if j.scheme in THEOREM_SCHEMES:
            return f"{j.scheme} is a theorem scheme, cite it with thm:"
        if j.scheme not in lg.axioms:
            return f"scheme {j.scheme} not in {lg.name}"
        return None if is_scheme_instance(j.scheme, f) else f"not an instance of {j.scheme}"
    if isinstance(j, ThmScheme):
        if not lg.classical:
            return f"{j.scheme} not available in {lg.name}"
        if j.scheme not in THEOREM_SCHEMES:
            return f"{j.scheme} is not a theorem scheme"
        if j.scheme == "SP" and strict_sp and not lg.primitive_sp:
            return "SP is primitive only in L"
        return None if is_scheme_instance(j.scheme, f) else f"not an instance of {j.scheme}"
    if isinstance(j, AN):
        if not lg.classical:
            return f"AN not available in {lg.name}"
        if j.scheme in THEOREM_SCHEMES:
            return "AN on theorem scheme"
        if j.scheme not in lg.axioms:
            return f"scheme {j.scheme} not in {lg.name}"
        if not isinstance(f, Box):
            return "AN must conclude a boxed formula"
        return None if is_scheme_instance(j.scheme, f.body) else f"not an instance of {j.scheme}"
    if isinstance(j, MP):
        if not (1 <= j.i < n and 1 <= j.j < n):
            return "bad MP indices"
        if d.lines[j.j - 1].formula != Imp(d.lines[j.i - 1].formula, f):
            return "MP mismatch"
        return None
    return "unknown justification"


def check_derivation(logic: str | Logic, d: Derivation, strict_sp: bool = False) -> Verdict:
    lg = get_logic(logic)
    notes = []
    for h in d.hypotheses:
        if not in_language(h, lg.language):
            return Verdict(False, 0, f"hypothesis {show(h)} outside language {lg.language.value}")
    for n in range(1, len(d.lines) + 1):
        reason = check_line(lg, d, n, strict_sp)
        if reason is not None:
            return Verdict(False, n, reason)
        j = d.lines[n - 1].just
        if isinstance(j, ThmScheme) and j.scheme == "SP" and not lg.primitive_sp:
            notes.append(f"line {n}: SP used as a valid principle of {lg.name}")
    return Verdict(True, notes=tuple(notes))


# ---------------------------------------------------------------- box lifting


def _dist_steps(lines: list[Line], lg: Logic, i: int, j: int) -> int:
    """Given steps ``i: []A`` and ``j: [](A -> B)``, append steps ending in ``[]B``."""
    boxed_a = lines[i - 1].formula
    boxed_imp = lines[j - 1].formula
    a, b = boxed_a.body, boxed_imp.body.right

    def add(f, just):
        lines.append(Line(f, just))
        return len(lines)

    if lg.has("DIST"):
        k = add(Imp(boxed_imp, Imp(Box(a), Box(b))), Axiom("DIST"))
        k = add(Imp(Box(a), Box(b)), MP(j, k))
        return add(Box(b), MP(i, k))
    inner = Imp(Box(a), Box(b))
    k = add(Imp(boxed_imp, Box(inner)), Axiom("A3"))
    k = add(Box(inner), MP(j, k))
    k2 = add(Imp(Box(inner), inner), Axiom("A2"))
    k = add(inner, MP(k, k2))
    return add(Box(b), MP(i, k))


def necessitate(d: Derivation, logic: str | Logic | None = None, box_hypotheses: bool = False) -> Derivation:
    """Turn a derivation of ``phi`` into one of ``[]phi``.

    Axioms become AN steps, AN steps are lifted with (A4), and each MP step is
    pushed under the box with distribution.  TND and SP steps cannot be boxed.
    """
    lg = get_logic(logic or d.logic)
    out: list[Line] = []
    where: dict[int, int] = {}
    for n, ln in enumerate(d.lines, 1):
        f, j = ln.formula, ln.just
        if isinstance(j, Hyp):
            if not box_hypotheses:
                raise ValueError(f"step {n}: hypotheses cannot be necessitated")
            out.append(Line(Box(f), Hyp()))
        elif isinstance(j, Axiom):
            out.append(Line(Box(f), AN(j.scheme)))
        elif isinstance(j, AN):
            if not lg.has("A4"):
                raise ValueError(f"step {n}: boxing an AN step needs (A4)")
            out.append(ln)
            out.append(Line(Imp(f, Box(f)), Axiom("A4")))
            out.append(Line(Box(f), MP(len(out) - 1, len(out))))
        elif isinstance(j, MP):
            _dist_steps(out, lg, where[j.i], where[j.j])
        else:
            raise ValueError(f"step {n}: {j} cannot be necessitated")
        where[n] = len(out)
    hyps = tuple(Box(h) for h in d.hypotheses) if box_hypotheses else d.hypotheses
    return Derivation(lg.name, hyps, tuple(out))


def box_lift(d: Derivation, target: str | Logic = "L5") -> Derivation:
    """Map an IPC (or IEL) derivation of ``phi`` from ``Phi`` to one of ``[]phi`` from ``[]Phi``."""
    lg = get_logic(target)
    for n, ln in enumerate(d.lines, 1):
        j = ln.just
        if isinstance(j, (Axiom)) and j.scheme not in lg.axioms:
            raise ValueError(f"step {n}: scheme {j.scheme} unavailable in {lg.name}")
        if not isinstance(j, (Hyp, Axiom, MP)):
            raise ValueError(f"step {n}: only hyp/axiom/MP steps can be lifted")
    return necessitate(d, lg, box_hypotheses=True)


# ----------------------------------------------------------------- builder


class Builder:
    """Incremental derivation construction with a few derived-rule macros.

    Every method returns the number of the step it appended last.
    """

    def __init__(self, logic: str, hypotheses: Iterable[Formula] = ()):
        self.logic = get_logic(logic)
        self.hypotheses = tuple(hypotheses)
        self.lines: list[Line] = []

    def __getitem__(self, n: int) -> Formula:
        return self.lines[n - 1].formula

    def add(self, f: Formula, just: Justification) -> int:
        self.lines.append(Line(f, just))
        return len(self.lines)

    def hyp(self, f: Formula) -> int:
        return self.add(f, Hyp())

    def ax(self, scheme: str, f: Formula) -> int:
        return self.add(f, Axiom(scheme))

    def an(self, scheme: str, f: Formula) -> int:
        return self.add(Box(f), AN(scheme))

    def tnd(self, f: Formula) -> int:
        return self.add(syntax.Or(f, syntax.neg(f)), ThmScheme("TND"))

    def sp(self, f: Formula) -> int:
        return self.add(f, ThmScheme("SP"))

    def mp(self, i: int, j: int) -> int:
        imp = self[j]
        if not (isinstance(imp, Imp) and imp.left == self[i]):
            raise ValueError(f"MP {i} {j}: step {j} is not an implication from step {i}")
        return self.add(imp.right, MP(i, j))

    def use(self, i: int, theorem: Formula) -> int:
        """Modus ponens with an INT instance ``self[i] -> C``."""
        return self.mp(i, self.ax("INT", theorem))

    def chain(self, i: int, j: int) -> int:
        """``A -> B`` and ``B -> C`` give ``A -> C``."""
        a = self[i].left
        c = self[j].right
        t = self.ax("INT", Imp(self[i], Imp(self[j], Imp(a, c))))
        return self.mp(j, self.mp(i, t))

    def conj(self, i: int, j: int) -> int:
        t = self.ax("INT", Imp(self[i], Imp(self[j], And(self[i], self[j]))))
        return self.mp(j, self.mp(i, t))

    def dist(self, j: int) -> int:
        """``[](A -> B)`` gives ``[]A -> []B``."""
        a, b = self[j].body.left, self[j].body.right
        if self.logic.has("DIST"):
            return self.mp(j, self.ax("DIST", Imp(self[j], Imp(Box(a), Box(b)))))
        inner = Imp(Box(a), Box(b))
        k = self.mp(j, self.ax("A3", Imp(self[j], Box(inner))))
        return self.mp(k, self.ax("A2", Imp(Box(inner), inner)))

    def dist_thm(self, a: Formula, b: Formula) -> int:
        """The theorem ``[](a -> b) -> ([]a -> []b)``."""
        if self.logic.has("DIST"):
            return self.ax("DIST", instantiate("DIST", a, b))
        inner = Imp(Box(a), Box(b))
        i = self.ax("A3", instantiate("A3", a, b))
        return self.chain(i, self.ax("A2", Imp(Box(inner), inner)))

    def box_mp(self, i: int, j: int) -> int:
        """``[]A`` and ``[](A -> B)`` give ``[]B``."""
        return self.mp(i, self.dist(j))

    def box_int(self, f: Formula) -> int:
        """AN on an INT instance ``A -> B``, then distribution: ``[]A -> []B``."""
        return self.dist(self.an("INT", f))

    def box_conj(self, i: int, j: int) -> int:
        a, b = self[i].body, self[j].body
        k = self.box_mp(i, self.an("INT", Imp(a, Imp(b, And(a, b)))))
        return self.box_mp(j, k)

    def box_chain(self, i: int, j: int) -> int:
        """``[](A -> B)`` and ``[](B -> C)`` give ``[](A -> C)``."""
        ab, bc = self[i].body, self[j].body
        ac = Imp(ab.left, bc.right)
        k = self.box_mp(i, self.an("INT", Imp(ab, Imp(bc, ac))))
        return self.box_mp(j, k)

    def build(self) -> Derivation:
        return Derivation(self.logic.name, self.hypotheses, tuple(self.lines))
