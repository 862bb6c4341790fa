"""The acceptance suite: nine reproducible checks, each returning a pass/fail result."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from . import algebra as alg
from .algebra import AlgebraicModel, check_model, enumerate_models, eval_all, eval_batch, rigid_model, satisfies
from .bridge import algebra_to_frame, kripke_to_relational, plus_map_is_isomorphism
from .calculi import LOGICS, box_lift, check_derivation, get_logic, instantiate
from .fixtures import FIXTURES, IEL_FIXTURES, IPC_FIXTURES
from .frames import Frame, check_frame, enumerate_frames, extension_all, true_in, truth_world
from .ipc import NonTheorem, Theorem, decide_ipc, exhaustive_countermodel
from .posets import chain
from .search import Bounds, find_countermodel, solve_equation
from .syntax import Box, Formula, K, Var, dia, neg, parse, random_formula, show, substitute_all

X, Y, Z = Var("x"), Var("y"), Var("z")

IPC_THEOREMS = tuple(parse(s) for s in (
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "p & q -> p",
    "p & q -> q & p",
    "p -> p | q",
    "p | q -> q | p",
    "(p -> r) -> (q -> r) -> p | q -> r",
    "~~(p | ~p)",
    "p -> ~~p",
    "~~~p -> ~p",
    "(p -> q) -> ~q -> ~p",
    "~(p | q) <-> ~p & ~q",
    "(p & q -> r) <-> (p -> q -> r)",
    "_|_ -> p",
    "(p | q) & r -> p & r | q & r",
    "~~(~~p -> p)",
    "(p -> q) & (p -> r) -> p -> q & r",
    "p & (p -> q) -> q",
    "~(p & ~p)",
))

IPC_NON_THEOREMS = tuple(parse(s) for s in (
    "p | ~p",
    "~~p -> p",
    "((p -> q) -> p) -> p",
    "(p -> q) | (q -> p)",
    "~p | ~~p",
    "(~p -> q | r) -> (~p -> q) | (~p -> r)",
    "(p -> q) -> ~p | q",
    "~(p & q) -> ~p | ~q",
    "p",
    "(p -> q | r) -> (p -> q) | (p -> r)",
))

SWEEP_CLASSES = ("EL5m", "E4L5m", "E5L5m", "E6L5m", "EL5", "E6L5")
ALGEBRA_CARRIER = 16
ALGEBRA_WORLDS = 5


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.detail} ({self.seconds:.2f}s)"


# ------------------------------------------------------------------ corpora


def formula_corpus(seed: int = 0, size: int = 50, depth: int = 4) -> list[Formula]:
    """Deterministic corpus over ``x`` and ``y`` with box and K."""
    rng = random.Random(seed)
    fixed = [parse(s) for s in ("x -> []x", "x -> K x", "K x -> ~~x", "[]x <-> (x == T)", "<>K x -> K x",
                                "~K x -> []~K x", "x | ~x", "[](x -> y) -> K x -> K y")]
    out = list(fixed)
    while len(out) < size:
        f = random_formula(rng, depth, names=("x", "y"))
        if f not in out:
            out.append(f)
    return out


def _meta_instances(schemes: Iterable[str]) -> list[Formula]:
    out = []
    for s in schemes:
        if s in ("INT",):
            continue
        out.append(instantiate(s, X, Y, Z))
    return out


def _int_instances() -> list[Formula]:
    sub = {"p": X, "q": Y, "r": Z}
    modal = {"p": K(X), "q": Box(Y), "r": Z}
    return [substitute_all(t, sub) for t in IPC_THEOREMS] + [substitute_all(t, modal) for t in IPC_THEOREMS]


def sweep_formulas(cls: str) -> list[Formula]:
    """Scheme instances over x, y, z for every axiom of ``cls``, with TND, SP and the boxed axioms."""
    lg = get_logic(cls)
    axioms = _meta_instances(sorted(lg.axioms)) + _int_instances()
    extra = [parse("x | ~x"), parse("(x == y) -> ([]x <-> []y)"), parse("(x == y) -> (K x <-> K y)"),
             parse("(x == y) -> (x & z <-> y & z)")]
    return axioms + [Box(a) for a in axioms] + extra


# ------------------------------------------------------------------ helpers


def _groups(models: Iterable[AlgebraicModel]) -> Iterator[list[AlgebraicModel]]:
    """Runs of models sharing algebra, TRUE and box (the enumeration emits them consecutively)."""
    key = lambda m: (id(m.algebra), m.true_filter, m.box)  # noqa: E731
    for _, grp in itertools.groupby(models, key=key):
        yield list(grp)


def _names(f: Formula) -> list[str]:
    from .syntax import variables
    return variables(f)


def algebra_sweep(models: Iterable[AlgebraicModel], formulas: list[Formula]) -> tuple[int, list]:
    """Count models and collect (model, formula) pairs where some assignment falsifies the formula."""
    count = 0
    failures = []
    for grp in _groups(models):
        count += len(grp)
        m0 = grp[0]
        truth = alg.truth_mask(m0)
        ks = np.array([m.k for m in grp], dtype=np.int16) if m0.k is not None else None
        for f in formulas:
            vals = eval_batch(m0.algebra, m0.box, ks, f, _names(f))
            ok = truth[vals].reshape(len(grp), -1).all(axis=1)
            for i in np.flatnonzero(~ok):
                failures.append((grp[i], f))
    return count, failures


def frame_sweep(frames: Iterable[Frame], formulas: list[Formula]) -> tuple[int, list]:
    count = 0
    failures = []
    for fr in frames:
        count += 1
        bit = 1 << truth_world(fr)
        for f in formulas:
            if not ((extension_all(fr, f, _names(f)) & bit) != 0).all():
                failures.append((fr, f))
    return count, failures


def _timed(number: int, title: str, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as e:  # a crash is a failure, not an abort of the whole suite
        ok, detail = False, f"error: {type(e).__name__}: {e}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - t)


# ------------------------------------------------------------------ criteria


def criterion_1() -> CriterionResult:
    def body():
        t = time.perf_counter()
        wrong = []
        for fx in FIXTURES.values():
            v = check_derivation(fx.logic, fx.derivation)
            if v.accepted != fx.accept or (fx.accept and show(fx.derivation.conclusion) != show(parse(fx.claim))):
                wrong.append(fx.name)
        elapsed = time.perf_counter() - t
        n_acc = sum(fx.accept for fx in FIXTURES.values())
        ok = not wrong and n_acc >= 14 and elapsed < 1.0
        return ok, f"{n_acc} accepted, {len(FIXTURES) - n_acc} rejected as expected, mismatches {wrong}, {elapsed:.3f}s"

    return _timed(1, "fixture derivations", body)


def criterion_2(max_worlds: int = ALGEBRA_WORLDS, max_carrier: int = ALGEBRA_CARRIER,
                frame_worlds: int = 4) -> CriterionResult:
    def body():
        parts = []
        bad = 0
        for cls in SWEEP_CLASSES:
            fs = sweep_formulas(cls)
            na, fa = algebra_sweep(enumerate_models(cls, max_worlds, max_carrier=max_carrier), fs)
            nf, ff = frame_sweep(enumerate_frames(cls, frame_worlds), fs)
            bad += len(fa) + len(ff)
            parts.append(f"{cls} {na}a/{nf}f")
        return bad == 0, f"{bad} violations; " + ", ".join(parts)

    return _timed(2, "soundness sweep", body)


def criterion_3(max_worlds: int = 4) -> CriterionResult:
    def body():
        corpus = formula_corpus()
        ko_fm1 = [f for f in corpus if "K(" not in repr(f)]
        n = mism = noniso = 0
        # the L5 and EL5 classes are all contained in L5 or EL5m
        for cls, fs in (("L5", ko_fm1), ("EL5m", corpus)):
            for m in enumerate_models(cls, max_worlds, max_carrier=ALGEBRA_CARRIER):
                n += 1
                rm, _ = algebra_to_frame(m)
                fr = rm.frame
                if not plus_map_is_isomorphism(m, fr):
                    noniso += 1
                bit = 1 << fr.w_T
                truth = alg.truth_mask(m)
                for f in fs:
                    names = _names(f)
                    lhs = truth[eval_all(m, f, names)]
                    rhs = (extension_all(fr, f, names) & bit) != 0
                    mism += int((lhs != rhs).sum())
        return mism == 0 and noniso == 0, f"{n} models x {len(corpus)} formulas, {mism} disagreements, {noniso} non-isomorphic"

    return _timed(3, "correspondence instance", body)


def criterion_4(kripke_worlds: int = 6) -> CriterionResult:
    def body():
        problems = []
        for t in IPC_THEOREMS:
            if not isinstance(decide_ipc([], t), Theorem) or exhaustive_countermodel(t, kripke_worlds) is not None:
                problems.append(f"theorem {show(t)}")
            if find_countermodel("L5", [], Box(t)) is not None:
                problems.append(f"boxed theorem refuted {show(t)}")
        for f in IPC_NON_THEOREMS:
            v = decide_ipc([], f)
            if not isinstance(v, NonTheorem) or exhaustive_countermodel(f, kripke_worlds) is None:
                problems.append(f"non-theorem {show(f)}")
                continue
            rm = kripke_to_relational(v.countermodel, f)
            if true_in(rm, Box(f)) or not check_frame(rm.frame, "L5").passed:
                problems.append(f"lift {show(f)}")
        for name, d in IPC_FIXTURES.items():
            if not check_derivation("IPC", d).accepted or not check_derivation("L5", box_lift(d, "L5")).accepted:
                problems.append(f"lift of {name}")
        for name, d in IEL_FIXTURES.items():
            if not check_derivation("IEL", d).accepted or not check_derivation("EL5star", box_lift(d, "EL5star")).accepted:
                problems.append(f"lift of {name}")
        detail = (f"{len(IPC_THEOREMS)} theorems, {len(IPC_NON_THEOREMS)} non-theorems, "
                  f"{len(IPC_FIXTURES) + len(IEL_FIXTURES)} lifted derivations; problems {problems}")
        return not problems, detail

    return _timed(4, "embedding corpus", body)


def criterion_5(max_worlds: int = 4) -> CriterionResult:
    def body():
        problems = []
        liar_models = 0
        for tag in LOGICS:
            rep = solve_equation(tag, "x", X, neg(X), Bounds(max_worlds))
            liar_models += rep.models
            if not rep.unsatisfiable_everywhere:
                problems.append(f"liar solvable in {tag}")
        l5 = list(enumerate_models("L5", ALGEBRA_WORLDS))
        for m in l5:
            h = m.algebra
            if {e for e, _ in alg_solutions(m, Box(X))} != {h.bot, h.top}:
                problems.append("truth-teller")
            if h.top not in {e for e, _ in alg_solutions(m, dia(X))}:
                problems.append("x == <>x at top")
        for tag in ("L5", "EL5m", "E4L5m", "E5L5m", "E6L5m", "EL5", "E4L5", "E5L5", "E6L5", "EL5star"):
            if not solve_equation(tag, "x", X, Box(neg(X)), Bounds(max_worlds)).unsatisfiable_everywhere:
                problems.append(f"x == []~x solvable in {tag}")
        l4 = list(enumerate_models("L4", ALGEBRA_WORLDS))
        for m in l4:
            if m.algebra.bot not in {e for e, _ in alg_solutions(m, dia(X))}:
                problems.append("x == <>x at bottom in L4")
        return not problems, f"liar over {liar_models} models of {len(LOGICS)} classes; {len(l5)} L5, {len(l4)} L4 models; problems {problems[:5]}"

    return _timed(5, "self-reference", body)


def alg_solutions(m: AlgebraicModel, rhs: Formula):
    from .search import equation_solutions
    return equation_solutions(m, "x", X, rhs)


def criterion_6(max_worlds: int = 4) -> CriterionResult:
    def body():
        problems = []
        iel_axioms = [substitute_all(t, {"p": X, "q": Y, "r": K(Z)}) for t in IPC_THEOREMS]
        iel_axioms += [instantiate("KBel", X, Y), parse("x -> K x"), parse("K x -> ~~x")]
        n_iel = 0
        for fr in enumerate_frames("IEL", max_worlds):
            n_iel += 1
            root = 1 << fr.root
            for f in iel_axioms:
                if not ((extension_all(fr, f, _names(f)) & root) != 0).all():
                    problems.append(f"IEL axiom {show(f)}")
            for w in fr.order.maximal:
                if not check_frame(fr.with_designated(w), "E5L5").passed:
                    problems.append("IEL frame not E5L5")
        refuting = [fr for fr in enumerate_frames("EL5", 2)
                    if not ((extension_all(fr, parse("x -> K x"), ["x"]) >> fr.w_T & 1) != 0).all()]
        if not refuting:
            problems.append("no small EL5 frame refutes x -> K x")
        n_e6 = 0
        for fr in enumerate_frames("E6L5m", max_worlds):
            n_e6 += 1
            if not check_frame(fr, "E5L5m").passed:
                problems.append("E6 frame not E5")
        return not problems, (f"{n_iel} IEL frames, {n_e6} E6L5- frames, {len(refuting)} EL5 frames (<=2 worlds) "
                              f"refute x -> K x; problems {problems[:5]}")

    return _timed(6, "IEL suite", body)


def three_chain_model(k: tuple[int, ...] | None = None, cls: str | None = None) -> AlgebraicModel:
    """Upper sets of a 2-chain (elements bottom, a, top) with TRUE = {a, top} and rigid box."""
    return rigid_model(chain(2), 1, k, cls)


def criterion_7() -> CriterionResult:
    def body():
        m = three_chain_model(cls="L5")
        a = 1
        g = {"y": a}
        ok = (check_model(m, "L5").passed and satisfies(m, g, Box(neg(neg(Y))))
              and not satisfies(m, g, Box(Y)))
        return ok, f"[]~~y {'holds' if satisfies(m, g, Box(neg(neg(Y)))) else 'fails'}, []y {'holds' if satisfies(m, g, Box(Y)) else 'fails'} at y=a"

    return _timed(7, "replacement failure witness", body)


def criterion_8() -> CriterionResult:
    def body():
        m = three_chain_model(k=(0, 0, 2), cls="E6L5")
        rep = check_model(m, "E6L5")
        f = parse("x -> <>K x")
        refuted = not satisfies(m, {"x": 1}, f)
        return rep.passed and refuted, f"E6L5 check {'passes' if rep.passed else rep.violations}; x -> <>K x {'refuted' if refuted else 'holds'} at x=a"

    return _timed(8, "non-derivability witness", body)


def criterion_9(seed: int = 2024, count: int = 1000) -> CriterionResult:
    def body():
        from .syntax import show as pretty
        rng = random.Random(seed)
        bad = 0
        for _ in range(count):
            f = random_formula(rng, 5)
            if parse(pretty(f)) != f:
                bad += 1
        return bad == 0, f"{count} formulas, seed {seed}, {bad} mismatches"

    return _timed(9, "parser roundtrip", body)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run(numbers: Iterable[int] | None = None) -> list[CriterionResult]:
    return [CRITERIA[n]() for n in (numbers or CRITERIA)]
