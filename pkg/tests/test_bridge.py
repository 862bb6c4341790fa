import itertools
import random

import numpy as np
import pytest

from modalbhk.algebra import algebra_filters, check_model, enumerate_models, eval, eval_all, rigid_model, satisfies
from modalbhk.bridge import (algebra_to_frame, frame_to_algebra, is_isomorphic, kripke_to_relational,
                             plus_map_is_isomorphism)
from modalbhk.frames import Frame, RelationalModel, check_frame, enumerate_frames, extension_all, sat, true_in
from modalbhk.ipc import KripkeModel, NonTheorem, decide_ipc
from modalbhk.posets import chain
from modalbhk.syntax import Box, Var, parse, random_formula

RELATIONAL = ["L5", "EL5m", "E4L5m", "E5L5m", "E6L5m", "EL5", "E6L5", "IELm", "IEL", "EL5star"]


def test_three_chain_gives_two_worlds():
    m = rigid_model(chain(2), 1, cls="L5")
    rm, wm = algebra_to_frame(m)
    f = rm.frame
    assert f.size == 2
    assert wm.filters[0] == frozenset({2})
    assert wm.filters[f.w_T] == frozenset({1, 2})
    assert f.props[1] == 1 << f.w_T


def test_boolean_model_gives_one_world():
    m = rigid_model(chain(1), 0, cls="L5")
    rm, _ = algebra_to_frame(m)
    assert rm.frame.size == 1
    back = frame_to_algebra(rm.frame)
    assert back.algebra.n == 2


def test_weak_classes_have_no_frames():
    for m in enumerate_models("L3", 2):
        with pytest.raises(ValueError):
            algebra_to_frame(m)


def test_frame_to_algebra_needs_designated_world():
    f = next(iter(enumerate_frames("IEL", 2)))
    with pytest.raises(ValueError):
        frame_to_algebra(f)
    assert frame_to_algebra(f, intuitionistic=True).true_filter is None


@pytest.mark.parametrize("cls", RELATIONAL)
def test_roundtrip_and_agreement(cls):
    rng = random.Random(cls)
    names = ("x", "y")
    corpus = [random_formula(rng, 4, names=names) for _ in range(30)]
    for m in enumerate_models(cls, 3):
        corpus_m = [f for f in corpus
                    if (m.box is not None or "Box(" not in repr(f)) and (m.k is not None or "K(" not in repr(f))]
        rm, wm = algebra_to_frame(m)
        fr = rm.frame
        assert plus_map_is_isomorphism(m, fr)
        assert check_frame(fr, cls).passed
        back = frame_to_algebra(fr, cls, intuitionistic=True)
        assert is_isomorphic(m, back)
        assert check_model(back, cls).passed
        if back.true_filter is not None:
            assert back.true_filter in algebra_filters(back.algebra)[2]
        if cls.startswith("E6"):
            assert len(set(fr.E)) == 1
        props = np.array(fr.props)
        for f in corpus_m:
            # every world agrees with membership of the algebraic value in its filter
            assert (props[eval_all(m, f, list(names))] == extension_all(fr, f, list(names))).all()


def test_pointwise_agreement_spot_check():
    m = list(enumerate_models("EL5", 3))[-1]
    rm, wm = algebra_to_frame(m)
    f = parse("K x -> [](y | ~K y)")
    for gx, gy in itertools.product(m.algebra.carrier, repeat=2):
        g = {"x": gx, "y": gy}
        v = eval(m, g, f)
        model = RelationalModel(rm.frame, g)
        for w, P in enumerate(wm.filters):
            assert sat(model, w, f) == (v in P)
        assert true_in(model, f) == satisfies(m, g, f)


def test_iel_truth_read_at_bottom():
    for m in enumerate_models("IEL", 3):
        rm, _ = algebra_to_frame(m)
        assert rm.frame.w_T is None
        assert check_frame(rm.frame, "IEL").passed


def test_partial_family_is_closed_first():
    p = chain(2)
    f = Frame(p, (0, 0b10, 0b11), (frozenset({2}), frozenset({2})), 1)
    assert frame_to_algebra(f).algebra.n == 3
    g = Frame(p, (0, 0b11), (frozenset({1}), frozenset({1})), 1)
    m = frame_to_algebra(g)
    assert m.algebra.n == 2


def test_peirce_lift():
    goal = parse("((p -> q) -> p) -> p")
    v = decide_ipc([], goal)
    assert isinstance(v, NonTheorem)
    rm = kripke_to_relational(v.countermodel, goal)
    assert check_frame(rm.frame, "L5").passed
    assert not true_in(rm, Box(goal))


def test_one_world_lift():
    k = KripkeModel(chain(1), (frozenset(),))
    rm = kripke_to_relational(k, Var("p"))
    assert not true_in(rm, Box(Var("p")))


def test_lift_requires_refutation():
    k = KripkeModel(chain(1), (frozenset({"p"}),))
    with pytest.raises(ValueError):
        kripke_to_relational(k, Var("p"))
