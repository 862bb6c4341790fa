import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalbhk.ipc import (KripkeModel, NonTheorem, Theorem, curry, decide_ipc, eval_kripke, exhaustive_countermodel,
                          is_ipc_theorem, kripke_models)
from modalbhk.posets import chain
from modalbhk.syntax import TOP, parse, random_formula, substitute


def test_identity_is_theorem():
    assert isinstance(decide_ipc([], parse("p -> p")), Theorem)


def test_peirce_two_world_countermodel():
    f = parse("((p -> q) -> p) -> p")
    v = decide_ipc([], f)
    assert isinstance(v, NonTheorem)
    assert v.countermodel.size == 2
    assert not eval_kripke(v.countermodel, 0, f)
    # brute force agrees
    assert exhaustive_countermodel(f, 3) is not None


def test_weak_excluded_middle():
    f = parse("~~(p | ~p)")
    assert isinstance(decide_ipc([], f), Theorem)
    assert exhaustive_countermodel(f, 4) is None


def test_hypotheses_agree_with_currying():
    hyps = [parse("p -> q"), parse("q -> r")]
    goal = parse("p -> r")
    assert isinstance(decide_ipc(hyps, goal), Theorem)
    assert is_ipc_theorem(curry(hyps, goal))
    assert isinstance(decide_ipc([parse("p | q")], parse("p")), NonTheorem)


def test_modal_input_rejected():
    with pytest.raises(ValueError):
        decide_ipc([], parse("[]p -> p"))


def test_top_forced_everywhere():
    m = KripkeModel(chain(3), (frozenset(), frozenset(), frozenset({"p"})))
    assert all(eval_kripke(m, w, TOP) for w in range(3))


def test_kripke_json_roundtrip():
    m = decide_ipc([], parse("p | ~p")).countermodel
    assert KripkeModel.from_json(m.to_json()) == m


def test_persistence_violation_rejected():
    with pytest.raises(ValueError):
        KripkeModel.from_json({"worlds": 2, "order": ["11", "01"], "valuation": [["p"], []]})


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_agrees_with_exhaustive_search(seed):
    f = random_formula(random.Random(seed), 3, names=("p", "q"), modal=False)
    v = decide_ipc([], f)
    brute = exhaustive_countermodel(f, 6)
    assert isinstance(v, Theorem) == (brute is None)
    if isinstance(v, NonTheorem):
        assert not eval_kripke(v.countermodel, 0, f)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_persistence_on_random_models(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 4, names=("p", "q"), modal=False)
    models = list(kripke_models(3, ["p", "q"]))
    m = models[rng.randrange(len(models))]
    for w in range(m.size):
        for v in range(m.size):
            if m.order.leq(w, v) and eval_kripke(m, w, f):
                assert eval_kripke(m, v, f)


def test_closure_under_substitution():
    rng = random.Random(5)
    thms = [parse(s) for s in ("p -> q -> p", "~~(p | ~p)", "(p -> q) -> ~q -> ~p")]
    for t in thms:
        for _ in range(10):
            g = random_formula(rng, 2, names=("p", "q", "r"), modal=False)
            assert is_ipc_theorem(substitute(t, "p", g))
