"""Reference derivations of known principles, built with :class:`Builder` macros.

``FIXTURES`` maps a short name to a :class:`Fixture`.  The same derivations ship
as text files in ``modalbhk/fixtures/`` (see :func:`write_fixture_files`).
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from .calculi import AN, Builder, Derivation, Line, necessitate, parse_derivation
from .syntax import TOP, And, Box, Imp, K, Or, Var, dia, ident, iff, neg

x, y = Var("x"), Var("y")
p, q, r = Var("p"), Var("q"), Var("r")


@dataclass(frozen=True)
class Fixture:
    name: str
    logic: str
    claim: str
    derivation: Derivation
    accept: bool = True


def box_iff_top() -> Derivation:
    b = Builder("L3")
    right, left = Imp(TOP, x), Imp(x, TOP)
    body = And(left, right)
    l1 = b.an("INT", left)
    l2 = b.box_int(Imp(x, right))
    l3 = b.mp(l1, b.box_int(Imp(left, Imp(right, body))))
    fwd = b.chain(l2, b.dist(l3))
    l4 = b.chain(b.box_int(Imp(body, right)), b.dist_thm(TOP, x))
    l5 = b.use(l4, Imp(b[l4], Imp(Box(TOP), Imp(Box(body), Box(x)))))
    bwd = b.mp(b.an("INT", TOP), l5)
    b.conj(fwd, bwd)
    return b.build()


def no_proof_of_bot() -> Derivation:
    b = Builder("L")
    l1 = b.an("INT", TOP)
    b.use(l1, Imp(Box(TOP), neg(neg(Box(TOP)))))
    return b.build()


def _possible(b: Builder, f) -> int:
    l1 = b.ax("A2", Imp(Box(neg(f)), neg(f)))
    return b.use(l1, Imp(b[l1], Imp(f, dia(f))))


def true_is_possible() -> Derivation:
    b = Builder("L")
    _possible(b, x)
    return b.build()


def proved_is_possible() -> Derivation:
    b = Builder("L")
    l1 = b.ax("A2", Imp(Box(x), x))
    b.chain(l1, _possible(b, x))
    return b.build()


def no_proof_of_bot_is_proved() -> Derivation:
    return necessitate(no_proof_of_bot(), "L4")


def _double_negation_elim(b: Builder, f) -> int:
    """``~~f -> f`` via an instance of TND."""
    t = b.tnd(f)
    return b.use(t, Imp(b[t], Imp(neg(neg(f)), f)))


def possibly_proved() -> Derivation:
    b = Builder("L5")
    bx = Box(x)
    l1 = b.ax("A5", Imp(neg(bx), Box(neg(bx))))
    l2 = b.use(l1, Imp(b[l1], Imp(dia(bx), neg(neg(bx)))))
    l3 = b.chain(l2, _double_negation_elim(b, bx))
    b.chain(l3, b.ax("A4", Imp(bx, Box(bx))))
    return b.build()


def possibly_unproved() -> Derivation:
    b = Builder("L5")
    bx = Box(x)
    l1 = b.box_int(Imp(bx, neg(neg(bx))))
    l2 = b.chain(b.ax("A4", Imp(bx, Box(bx))), l1)
    l3 = b.use(l2, Imp(b[l2], Imp(dia(neg(bx)), neg(bx))))
    b.chain(l3, b.ax("A5", Imp(neg(bx), Box(neg(bx)))))
    return b.build()


def proof_decides() -> Derivation:
    b = Builder("L5")
    bx = Box(x)
    nbx = neg(bx)
    goal = Box(Or(bx, nbx))
    pos = b.chain(b.ax("A4", Imp(bx, Box(bx))), b.box_int(Imp(bx, Or(bx, nbx))))
    neg_side = b.chain(b.ax("A5", Imp(nbx, Box(nbx))), b.box_int(Imp(nbx, Or(nbx, bx))))
    # swap the disjuncts under the box by substitution of identicals
    swap = b.an("INT", iff(Or(nbx, bx), Or(bx, nbx)))
    l1 = b.mp(swap, b.sp(Imp(b[swap], ident(Box(Or(nbx, bx)), goal))))
    l2 = b.mp(l1, b.ax("A2", Imp(b[l1], b[l1].body)))
    l3 = b.use(l2, Imp(b[l2], Imp(Box(Or(nbx, bx)), goal)))
    neg_side = b.chain(neg_side, l3)
    l4 = b.use(pos, Imp(b[pos], Imp(b[neg_side], Imp(Or(bx, nbx), goal))))
    l5 = b.mp(neg_side, l4)
    b.mp(b.tnd(bx), l5)
    return b.build()


def believed_is_possible() -> Derivation:
    b = Builder("EL3m")
    _possible(b, K(x))
    return b.build()


def proof_of_proof_is_believed() -> Derivation:
    b = Builder("EL4m")
    bx = Box(x)
    l1 = b.ax("A4", Imp(bx, Box(bx)))
    b.chain(l1, b.ax("CoRe", Imp(Box(bx), Box(K(bx)))))
    return b.build()


def unprovability_is_believed() -> Derivation:
    b = Builder("EL5m")
    nbx = neg(Box(x))
    l1 = b.ax("A5", Imp(nbx, Box(nbx)))
    b.chain(l1, b.ax("CoRe", Imp(Box(nbx), Box(K(nbx)))))
    return b.build()


def possibly_believed_is_believed() -> Derivation:
    b = Builder("E6L3m")
    kx = K(x)
    l1 = b.ax("NNB", Imp(neg(kx), Box(neg(kx))))
    l2 = b.use(l1, Imp(b[l1], Imp(dia(kx), neg(neg(kx)))))
    b.chain(l2, _double_negation_elim(b, kx))
    return b.build()


def negative_from_positive_necessitation() -> Derivation:
    b = Builder("EL5m+PNB")
    kx = K(x)
    bk = Box(kx)
    l1 = b.an("A2", Imp(bk, kx))
    l2 = b.an("PNB", Imp(kx, bk))
    same = b.box_conj(l1, l2)  # []Kx == Kx
    l3 = b.mp(same, b.sp(Imp(b[same], ident(Box(neg(bk)), Box(neg(kx))))))
    l4 = b.mp(l3, b.ax("A2", Imp(b[l3], b[l3].body)))
    replace = b.use(l4, Imp(b[l4], Imp(Box(neg(bk)), Box(neg(kx)))))
    l5 = b.ax("A2", Imp(bk, kx))
    l6 = b.use(l5, Imp(b[l5], Imp(neg(kx), neg(bk))))
    l7 = b.chain(l6, b.ax("A5", Imp(neg(bk), Box(neg(bk)))))
    b.chain(l7, replace)
    return b.build()


def _box_chain3(b: Builder, first: tuple, second: tuple, third: tuple) -> int:
    i = b.an(*first)
    j = b.an(*second)
    k = b.an(*third)
    return b.box_chain(b.box_chain(i, j), k)


def positive_introspection_in_e6() -> Derivation:
    b = Builder("E6L3m")
    kx = K(x)
    _box_chain3(b, ("PNB", Imp(kx, Box(kx))), ("CoRe", Imp(Box(kx), Box(K(kx)))),
                ("A2", Imp(Box(K(kx)), K(kx))))
    return b.build()


def negative_introspection_in_e6() -> Derivation:
    b = Builder("E6L3m")
    nk = neg(K(x))
    _box_chain3(b, ("NNB", Imp(nk, Box(nk))), ("CoRe", Imp(Box(nk), Box(K(nk)))),
                ("A2", Imp(Box(K(nk)), K(nk))))
    return b.build()


SIMPLIFIED_EL4 = "EL4m-A3-CoRe+DIST+WCoRe"


def distribution_in_el4() -> Derivation:
    b = Builder("EL4m")
    inner = Imp(Box(x), Box(y))
    l1 = b.ax("A3", Imp(Box(Imp(x, y)), Box(inner)))
    b.chain(l1, b.ax("A2", Imp(Box(inner), inner)))
    return necessitate(b.build())


def weak_coreflection_in_el4() -> Derivation:
    b = Builder("EL4m")
    l1 = b.ax("CoRe", Imp(Box(x), Box(K(x))))
    b.chain(l1, b.ax("A2", Imp(Box(K(x)), K(x))))
    return necessitate(b.build())


def coreflection_in_simplified() -> Derivation:
    b = Builder(SIMPLIFIED_EL4)
    l1 = b.dist(b.an("WCoRe", Imp(Box(x), K(x))))
    b.chain(b.ax("A4", Imp(Box(x), Box(Box(x)))), l1)
    return necessitate(b.build())


def a3_in_simplified() -> Derivation:
    b = Builder(SIMPLIFIED_EL4)
    bxy = Box(Imp(x, y))
    l1 = b.dist(b.an("DIST", Imp(bxy, Imp(Box(x), Box(y)))))
    b.chain(b.ax("A4", Imp(bxy, Box(bxy))), l1)
    return necessitate(b.build())


def an_on_tnd() -> Derivation:
    return Derivation("L5", (), (Line(Box(Or(x, neg(x))), AN("TND")),))


_MODAL: list[tuple[str, str, Callable[[], Derivation], bool]] = [
    ("box_iff_top", "[]x <-> (x == T)", box_iff_top, True),
    ("dia_i", "~<>_|_", no_proof_of_bot, True),
    ("dia_ii", "x -> <>x", true_is_possible, True),
    ("dia_iii", "[]x -> <>x", proved_is_possible, True),
    ("dia_iv", "[]~<>_|_", no_proof_of_bot_is_proved, True),
    ("dia_v", "<>[]x -> [][]x", possibly_proved, True),
    ("dia_vi", "<>~[]x -> []~[]x", possibly_unproved, True),
    ("dia_vii", "[]([]x | ~[]x)", proof_decides, True),
    ("epi_i", "K x -> <>K x", believed_is_possible, True),
    ("epi_ii", "[]x -> []K []x", proof_of_proof_is_believed, True),
    ("epi_iii", "~[]x -> []K ~[]x", unprovability_is_believed, True),
    ("epi_v", "<>K x -> K x", possibly_believed_is_believed, True),
    ("epi_vii", "~K x -> []~K x", negative_from_positive_necessitation, True),
    ("e6_has_e4", "[](K x -> K K x)", positive_introspection_in_e6, True),
    ("e6_has_e5", "[](~K x -> K ~K x)", negative_introspection_in_e6, True),
    ("simp_dist", "[]([](x -> y) -> []x -> []y)", distribution_in_el4, True),
    ("simp_wcore", "[]([]x -> K x)", weak_coreflection_in_el4, True),
    ("simp_core", "[]([]x -> []K x)", coreflection_in_simplified, True),
    ("simp_a3", "[]([](x -> y) -> []([]x -> []y))", a3_in_simplified, True),
    ("an_on_tnd", "[](x | ~x)", an_on_tnd, False),
]


# ------------------------------------------------------------ IPC / IEL sources


def _ipc(hyps, build) -> Derivation:
    b = Builder("IPC", hyps)
    build(b)
    return b.build()


def _ipc_fixtures() -> dict[str, Derivation]:
    out = {}
    out["identity"] = _ipc([], lambda b: b.ax("INT", Imp(p, p)))
    out["modus_ponens"] = _ipc([p, Imp(p, q)], lambda b: b.mp(b.hyp(p), b.hyp(Imp(p, q))))
    out["transitivity"] = _ipc([Imp(p, q), Imp(q, r)], lambda b: b.chain(b.hyp(Imp(p, q)), b.hyp(Imp(q, r))))
    out["pairing"] = _ipc([p, q], lambda b: b.conj(b.hyp(p), b.hyp(q)))
    out["commute"] = _ipc([And(p, q)], lambda b: b.use(b.hyp(And(p, q)), Imp(And(p, q), And(q, p))))
    out["weak_excluded_middle"] = _ipc([], lambda b: b.ax("INT", neg(neg(Or(p, neg(p))))))
    out["double_negation_intro"] = _ipc([p], lambda b: b.use(b.hyp(p), Imp(p, neg(neg(p)))))

    def syllogism(b):
        d = b.hyp(Or(p, q))
        t = b.use(d, Imp(Or(p, q), Imp(neg(p), q)))
        b.mp(b.hyp(neg(p)), t)

    out["disjunctive_syllogism"] = _ipc([Or(p, q), neg(p)], syllogism)

    def curried(b):
        c = b.hyp(And(p, q))
        f = b.hyp(Imp(p, Imp(q, r)))
        t = b.use(f, Imp(b[f], Imp(And(p, q), r)))
        b.mp(c, t)

    out["uncurry"] = _ipc([Imp(p, Imp(q, r)), And(p, q)], curried)
    out["triple_negation"] = _ipc([neg(neg(neg(p)))], lambda b: b.use(b.hyp(neg(neg(neg(p)))),
                                                                       Imp(neg(neg(neg(p))), neg(p))))
    return out


IPC_FIXTURES: dict[str, Derivation] = _ipc_fixtures()


def _iel_fixtures() -> dict[str, Derivation]:
    out = {}
    b = Builder("IEL", [p])
    b.mp(b.hyp(p), b.ax("IntCo", Imp(p, K(p))))
    out["coreflect_hyp"] = b.build()
    b = Builder("IEL")
    l1 = b.ax("IntCo", Imp(p, K(p)))
    b.chain(l1, b.ax("IntRe", Imp(K(p), neg(neg(p)))))
    out["coreflect_then_reflect"] = b.build()
    b = Builder("IEL")
    l1 = b.ax("KBel", Imp(K(Imp(p, q)), Imp(K(p), K(q))))
    b.use(l1, Imp(b[l1], Imp(And(K(Imp(p, q)), K(p)), K(q))))
    out["distribution_uncurried"] = b.build()
    return out


IEL_FIXTURES: dict[str, Derivation] = _iel_fixtures()


def _all() -> dict[str, Fixture]:
    out = {}
    for name, claim, build, accept in _MODAL:
        d = build()
        out[name] = Fixture(name, d.logic, claim, d, accept)
    return out


FIXTURES: dict[str, Fixture] = _all()


def write_fixture_files(directory: Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for fx in FIXTURES.values():
        path = directory / f"{fx.name}.drv"
        expect = "accept" if fx.accept else "reject"
        path.write_text(f"# claim: {fx.claim}\n# expect: {expect}\n" + fx.derivation.to_text())
        written.append(path)
    for name, d in {**IPC_FIXTURES, **IEL_FIXTURES}.items():
        path = directory / f"src_{name}.drv"
        path.write_text(d.to_text())
        written.append(path)
    return written


def bundled_fixture_dir() -> Path:
    return Path(str(resources.files("modalbhk") / "fixtures"))


def load_fixture_file(path: Path) -> tuple[Derivation, bool]:
    """Derivation plus the expected verdict recorded in its ``# expect:`` line."""
    text = Path(path).read_text()
    accept = "# expect: reject" not in text
    return parse_derivation(text), accept
