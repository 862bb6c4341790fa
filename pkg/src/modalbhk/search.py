"""Bounded countermodel search and the self-referential equation solver.

Nothing found within bounds is inconclusive: the finite models searched here
are only a fragment of all models.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraicModel, enumerate_models, eval as aeval, eval_all, satisfies, truth_mask
from .calculi import Logic, get_logic
from .frames import RelationalModel, enumerate_frames, extension_all, frame_conditions, true_in, truth_world
from .syntax import Formula, ident, in_language, show, variables


@dataclass(frozen=True)
class Bounds:
    max_algebra_worlds: int = 5
    max_frame_worlds: int = 4
    max_assignments: int | None = None
    time_budget: float | None = None

    def __post_init__(self):
        for name in ("max_algebra_worlds", "max_frame_worlds", "max_assignments"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")

    @classmethod
    def parse(cls, text: str) -> "Bounds":
        """``N/M``: algebra worlds and frame worlds."""
        try:
            a, _, b = text.partition("/")
            return cls(int(a), int(b) if b else cls.max_frame_worlds)
        except ValueError as e:
            raise ValueError(f"bad bounds {text!r}, expected N/M") from e


@dataclass(frozen=True)
class Countermodel:
    kind: str  # "algebra" or "frame"
    model: AlgebraicModel | RelationalModel
    assignment: dict[str, int]

    def to_json(self) -> dict:
        return {"kind": self.kind, "model": self.model.to_json(), "assignment": self.assignment}


@dataclass
class SearchStats:
    algebras: int = 0
    frames: int = 0
    skipped: int = 0
    timed_out: bool = False

    @property
    def complete(self) -> bool:
        return not self.skipped and not self.timed_out


def _has_frames(lg: Logic) -> bool:
    try:
        frame_conditions(lg)
    except ValueError:
        return False
    return True


def find_countermodel(logic: str | Logic, hypotheses: Sequence[Formula], goal: Formula,
                      bounds: Bounds = Bounds(), stats: SearchStats | None = None) -> Countermodel | None:
    """First interpretation within bounds making every hypothesis true and the goal not true."""
    lg = get_logic(logic)
    for f in (*hypotheses, goal):
        if not in_language(f, lg.language):
            raise ValueError(f"{show(f)} is outside the language of {lg.name}")
    stats = stats if stats is not None else SearchStats()
    names = _names((*hypotheses, goal))
    deadline = time.monotonic() + bounds.time_budget if bounds.time_budget else None

    for m in enumerate_models(lg, bounds.max_algebra_worlds):
        if deadline and time.monotonic() > deadline:
            stats.timed_out = True
            return None
        if bounds.max_assignments is not None and m.algebra.n ** len(names) > bounds.max_assignments:
            stats.skipped += 1
            continue
        stats.algebras += 1
        true = truth_mask(m)
        ok = np.logical_not(true[eval_all(m, goal, names)])
        for h in hypotheses:
            ok &= true[eval_all(m, h, names)]
        hit = np.argwhere(ok)
        if len(hit):
            g = {x: int(v) for x, v in zip(names, hit[0])}
            if all(satisfies(m, g, h) for h in hypotheses) and not satisfies(m, g, goal):
                return Countermodel("algebra", m, g)
            raise AssertionError("vectorised and direct evaluation disagree")

    if not _has_frames(lg):
        return None
    for fr in enumerate_frames(lg, bounds.max_frame_worlds):
        if deadline and time.monotonic() > deadline:
            stats.timed_out = True
            return None
        if bounds.max_assignments is not None and len(fr.props) ** len(names) > bounds.max_assignments:
            stats.skipped += 1
            continue
        stats.frames += 1
        bit = 1 << truth_world(fr)
        ok = (extension_all(fr, goal, names) & bit) == 0
        for h in hypotheses:
            ok &= (extension_all(fr, h, names) & bit) != 0
        hit = np.argwhere(ok)
        if len(hit):
            g = {x: int(v) for x, v in zip(names, hit[0])}
            rm = RelationalModel(fr, g)
            if all(true_in(rm, h) for h in hypotheses) and not true_in(rm, goal):
                return Countermodel("frame", rm, g)
            raise AssertionError("vectorised and direct evaluation disagree")
    return None


def _names(fs: Iterable[Formula]) -> list[str]:
    out: list[str] = []
    for f in fs:
        for x in variables(f):
            if x not in out:
                out.append(x)
    return out


# ------------------------------------------------------------------ equations


@dataclass(frozen=True)
class Solution:
    model: int  # position in the enumeration
    element: int
    classically_true: bool | None
    parameters: tuple[tuple[str, int], ...] = ()


@dataclass
class EquationReport:
    logic: str
    equation: str
    models: int = 0
    solutions: list[Solution] = field(default_factory=list)
    models_with_solution: int = 0
    timed_out: bool = False

    @property
    def unsatisfiable_everywhere(self) -> bool:
        return not self.solutions

    @property
    def solvable_true(self) -> bool:
        return any(s.classically_true for s in self.solutions)

    @property
    def solvable_false(self) -> bool:
        return any(s.classically_true is False for s in self.solutions)

    def summary(self) -> str:
        if self.unsatisfiable_everywhere:
            verdict = "unsatisfiable everywhere"
        else:
            flags = [n for n, v in (("true", self.solvable_true), ("false", self.solvable_false)) if v]
            verdict = "solvable (" + ", ".join(flags or ["non-classical"]) + ")"
        tail = " (time budget exhausted)" if self.timed_out else ""
        return (f"{self.equation} over {self.logic}: {verdict}; "
                f"{self.models_with_solution}/{self.models} models have a solution{tail}")

    def to_json(self) -> dict:
        return {
            "logic": self.logic,
            "equation": self.equation,
            "models": self.models,
            "models_with_solution": self.models_with_solution,
            "unsatisfiable_everywhere": self.unsatisfiable_everywhere,
            "solvable_true": self.solvable_true,
            "solvable_false": self.solvable_false,
            "solutions": [
                {"model": s.model, "element": s.element, "classically_true": s.classically_true,
                 "parameters": dict(s.parameters)}
                for s in self.solutions
            ],
        }


def equation_solutions(m: AlgebraicModel, x: str, lhs: Formula, rhs: Formula) -> list[tuple[int, dict[str, int]]]:
    """Pairs (element, parameter assignment) with equal values of both sides under ``x -> element``."""
    params = [v for v in _names((lhs, rhs)) if v != x]
    names = [x, *params]
    eq = eval_all(m, lhs, names) == eval_all(m, rhs, names)
    out = []
    for idx in np.argwhere(eq):
        g = {n: int(v) for n, v in zip(names, idx)}
        out.append((g[x], {p: g[p] for p in params}))
    return out


def solve_equation(logic: str | Logic, x: str, lhs: Formula, rhs: Formula, bounds: Bounds = Bounds(),
                   models: Iterable[AlgebraicModel] | None = None) -> EquationReport:
    """Solve ``lhs == rhs`` for ``x`` in each enumerated model; other variables are swept."""
    lg = get_logic(logic)
    report = EquationReport(lg.name, show(ident(lhs, rhs)))
    deadline = time.monotonic() + bounds.time_budget if bounds.time_budget else None
    source = models if models is not None else enumerate_models(lg, bounds.max_algebra_worlds)
    for i, m in enumerate(source):
        if deadline and time.monotonic() > deadline:
            report.timed_out = True
            break
        report.models += 1
        found = equation_solutions(m, x, lhs, rhs)
        for e, params in found:
            g = {x: e, **params}
            if aeval(m, g, lhs) != aeval(m, g, rhs):
                raise AssertionError("solution does not re-verify")
            ct = m.is_true(e) if m.classical else None
            report.solutions.append(Solution(i, e, ct, tuple(sorted(params.items()))))
        report.models_with_solution += bool(found)
    return report
