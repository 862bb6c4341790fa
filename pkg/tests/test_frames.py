import itertools
import json
import random

import pytest

from modalbhk.frames import (Frame, RelationalModel, check_frame, close_propositions, enumerate_frames,
                             extension_all, frame_from_generators, sat, true_in)
from modalbhk.posets import chain, rooted_posets_upto
from modalbhk.syntax import Box, Var, parse, random_formula

R, T = 0, 1  # root and top of the 2-chain
W = 0b11


def e6_two_chain():
    p = chain(2)
    return Frame(p, p.upsets, tuple(frozenset({len(p.upsets) - 1}) for _ in range(2)), T)


def test_close_propositions_examples():
    p = chain(2)
    assert close_propositions(p, None, []) == (0, W)
    fam = close_propositions(p, [W, W], [1 << T])
    assert fam == (0, 1 << T, W)
    assert close_propositions(p, [W, W], fam) == fam
    with pytest.raises(ValueError):
        close_propositions(p, None, [1 << R])


def test_closure_is_idempotent_everywhere():
    for p in rooted_posets_upto(3):
        for gens in itertools.combinations(p.upsets, 2):
            seed = [p.full] * p.size
            once = close_propositions(p, seed, gens)
            assert close_propositions(p, seed, once) == once


def test_two_chain_e6_frame():
    f = e6_two_chain()
    assert check_frame(f, "E6L5").passed
    report = check_frame(f, "IEL")
    assert ("co-reflection", (T, 1 << T)) in report.violations
    idx = f.props.index(1 << T)
    m = RelationalModel(f, {"x": idx})
    assert true_in(m, Var("x"))
    assert not true_in(m, Box(Var("x")))


def test_one_world_frames():
    # knowledge forces E(w) = {W}; belief classes also admit the improper filter
    frames = list(enumerate_frames("EL5", 1))
    assert len(frames) == 1
    assert frames[0].E == (frozenset({1}),)
    assert sorted(sorted(f.E[0]) for f in enumerate_frames("EL5m", 1)) == [[0, 1], [1]]


@pytest.mark.parametrize("cls", ["L5", "EL5m", "E4L5m", "E5L5m", "E6L5m", "EL5", "E6L5", "IELm", "IEL", "EL5star"])
def test_emitted_frames_pass(cls):
    for f in enumerate_frames(cls, 3):
        assert check_frame(f, cls).passed


def test_e6_frames_constant():
    for f in enumerate_frames("E6L5m", 4):
        assert len(set(f.E)) == 1


def test_frame_class_inclusions():
    for f in enumerate_frames("E6L5m", 4):
        assert check_frame(f, "E5L5m").passed
    for f in enumerate_frames("IEL", 4):
        for w in f.order.maximal:
            assert check_frame(f.with_designated(w), "E5L5").passed


def test_no_frames_for_weak_logics():
    for tag in ("L", "L3", "L4", "EL4m"):
        with pytest.raises(ValueError):
            list(enumerate_frames(tag, 2))


def _models(cls, max_worlds, names):
    for f in enumerate_frames(cls, max_worlds):
        for g in itertools.product(range(len(f.props)), repeat=len(names)):
            yield RelationalModel(f, dict(zip(names, g)))


def test_box_is_world_independent_and_persistence():
    rng = random.Random(3)
    formulas = [random_formula(rng, 4, names=("x",)) for _ in range(25)]
    for m in _models("EL5m", 3, ["x"]):
        for f in formulas:
            ext = m.extension(f)
            assert m.extension(Box(f)) in (0, m.frame.full)
            for w in range(m.frame.size):
                if ext >> w & 1:
                    assert ext & m.frame.order.up[w] == m.frame.order.up[w]


def test_tnd_classical_at_designated_only():
    tnd = parse("x | ~x")
    for m in _models("L5", 3, ["x"]):
        assert true_in(m, tnd)
    assert any(not sat(m, m.frame.root, tnd) for m in _models("L5", 3, ["x"]))


def test_coreflection_without_intco():
    assert all(true_in(m, parse("[]x -> []K x")) for m in _models("EL5m", 3, ["x"]))
    assert any(not true_in(m, parse("x -> K x")) for m in _models("EL5m", 3, ["x"]))


def test_vectorised_extension_agrees():
    rng = random.Random(11)
    formulas = [random_formula(rng, 4, names=("x", "y")) for _ in range(20)]
    for f in list(enumerate_frames("EL5", 3))[:15]:
        for phi in formulas:
            arr = extension_all(f, phi, ["x", "y"])
            for gx, gy in itertools.product(range(len(f.props)), repeat=2):
                assert arr[gx, gy] == RelationalModel(f, {"x": gx, "y": gy}).extension(phi)


def test_iel_axioms_at_bottom_world():
    axioms = [parse(s) for s in ("K(x -> y) -> K x -> K y", "x -> K x", "K x -> ~~x")]
    for m in _models("IEL", 3, ["x", "y"]):
        assert all(true_in(m, a) for a in axioms)


def _brute_frames(cls, max_worlds):
    out = []
    for p in rooted_posets_upto(max_worlds):
        props = p.upsets
        designs = list(p.maximal) if cls not in ("IEL", "IELm") else [None]
        for gens in itertools.product(props, repeat=p.size):
            E = tuple(frozenset(i for i, a in enumerate(props) if gens[w] & ~a == 0) for w in range(p.size))
            for wt in designs:
                f = Frame(p, props, E, wt)
                if not check_frame(f, cls).passed:
                    continue
                key = min((tuple(tuple(sorted(props.index(_perm_mask(props[i], perm)) for i in E[perm_inv(perm)[w]]))
                                 for w in range(p.size)), perm[wt] if wt is not None else -1)
                          for perm in _order_automorphisms(p))
                if (p, key) not in out:
                    out.append((p, key))
    return out


def _order_automorphisms(p):
    return [perm for perm in itertools.permutations(range(p.size))
            if all(p.leq(i, j) == p.leq(perm[i], perm[j]) for i in range(p.size) for j in range(p.size))]


def perm_inv(perm):
    inv = [0] * len(perm)
    for a, b in enumerate(perm):
        inv[b] = a
    return inv


def _perm_mask(mask, perm):
    return sum(1 << perm[i] for i in range(len(perm)) if mask >> i & 1)


@pytest.mark.parametrize("cls", ["EL5m", "EL5", "E4L5m", "E5L5m", "E6L5m", "IEL", "IELm"])
def test_frame_enumeration_matches_brute_force(cls):
    assert len(_brute_frames(cls, 3)) == sum(1 for _ in enumerate_frames(cls, 3))


def test_frame_json_roundtrip():
    for f in list(enumerate_frames("EL5", 3))[:10]:
        back = Frame.from_json(json.loads(f.dumps()))
        assert back.props == f.props and back.E == f.E and back.w_T == f.w_T
        assert back.order == f.order


def test_frame_from_generators_builds_belief():
    p = chain(2)
    f = frame_from_generators(p, [1 << T, 1 << T], [], T)
    assert check_frame(f, "E6L5m").passed
