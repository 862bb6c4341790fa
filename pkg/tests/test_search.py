import pytest

from modalbhk.algebra import check_model, eval, satisfies
from modalbhk.fixtures import FIXTURES
from modalbhk.frames import check_frame, true_in
from modalbhk.search import Bounds, SearchStats, equation_solutions, find_countermodel, solve_equation
from modalbhk.syntax import Box, Var, dia, neg, parse

x = Var("x")


def test_x_implies_box_x_in_l5():
    cm = find_countermodel("L5", [], parse("x -> []x"))
    m, g = cm.model, cm.assignment
    assert cm.kind == "algebra" and m.algebra.n == 3
    assert g["x"] == 1 and m.is_true(1) and m.box[1] == m.algebra.bot


def test_x_implies_kx_frames_small():
    cm = find_countermodel("EL5", [], parse("x -> K x"), Bounds(0, 2))
    assert cm.kind == "frame" and cm.model.frame.size <= 2
    assert check_frame(cm.model.frame, "EL5").passed
    assert not true_in(cm.model, parse("x -> K x"))


def test_x_implies_possibly_known_in_e6l5():
    cm = find_countermodel("E6L5", [], parse("x -> <>K x"))
    m = cm.model
    assert m.algebra.n == 3 and m.k == (0, 0, 2) and cm.assignment == {"x": 1}
    assert check_model(m, "E6L5").passed


def test_consequence_with_hypotheses():
    assert find_countermodel("L5", [parse("[]x")], x) is None
    cm = find_countermodel("L5", [x], Box(x))
    assert satisfies(cm.model, cm.assignment, x) and not satisfies(cm.model, cm.assignment, Box(x))


@pytest.mark.parametrize("name", [n for n, fx in FIXTURES.items() if fx.accept])
def test_fixture_theorems_have_no_countermodel(name):
    fx = FIXTURES[name]
    assert find_countermodel(fx.logic, [], fx.derivation.conclusion, Bounds(4, 3)) is None


def test_language_checked():
    with pytest.raises(ValueError):
        find_countermodel("L5", [], parse("K x"))


def test_budget_and_assignment_caps_are_reported():
    st = SearchStats()
    assert find_countermodel("L5", [], parse("[](x | ~x) | y | z"), Bounds(4, 2, max_assignments=8), st) is None
    assert st.skipped > 0 and not st.complete


def test_bounds_parse():
    assert Bounds.parse("3/2") == Bounds(3, 2)
    with pytest.raises(ValueError):
        Bounds.parse("a/b")
    with pytest.raises(ValueError):
        Bounds(-1, 2)


def test_liar_everywhere():
    for tag in ("L3", "L4", "L5", "EL5m", "E6L5", "IEL", "EL5star"):
        assert solve_equation(tag, "x", x, neg(x), Bounds(3)).unsatisfiable_everywhere


def test_truth_teller():
    rep = solve_equation("L5", "x", x, Box(x))
    assert rep.solvable_true and rep.solvable_false
    assert rep.models_with_solution == rep.models


def test_own_unprovability_has_no_l5_solution():
    assert solve_equation("L5", "x", x, Box(neg(x))).unsatisfiable_everywhere


def test_exploration_in_weaker_logics_reports_false_solutions():
    for tag in ("L3", "L4"):
        rep = solve_equation(tag, "x", x, Box(neg(x)))
        for s in rep.solutions:
            assert s.classically_true is False and s.element != 0


def test_believability_equations_satisfiable():
    for rhs in (dia(parse("K x")), neg(dia(parse("K x")))):
        rep = solve_equation("EL5m", "x", x, rhs, Bounds(3))
        assert not rep.unsatisfiable_everywhere


def test_solutions_reverify_with_parameters():
    from modalbhk.algebra import enumerate_models
    m = list(enumerate_models("L5", 3))[-1]
    for e, params in equation_solutions(m, "x", x, parse("y -> x")):
        g = {"x": e, **params}
        assert eval(m, g, x) == eval(m, g, parse("y -> x"))


def test_report_json_and_summary():
    rep = solve_equation("L5", "x", x, neg(x))
    assert "unsatisfiable everywhere" in rep.summary()
    assert rep.to_json()["unsatisfiable_everywhere"] is True
