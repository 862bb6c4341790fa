import itertools
import json

import numpy as np
import pytest

from modalbhk.algebra import (AlgebraicModel, HeytingAlgebra, algebra_filters, check_model, enumerate_models, eval,
                              eval_all, has_disjunction_property, rigid_model, satisfies, upperset_algebra)
from modalbhk.bridge import is_isomorphic
from modalbhk.posets import Poset, chain, posets, rooted_posets, rooted_posets_upto
from modalbhk.syntax import TOP, Box, Var, ident, parse

BOT_, A, TOP_ = 0, 1, 2  # elements of the 3-chain built from a 2-chain


def three_chain(k=None, cls=None):
    return rigid_model(chain(2), 1, k, cls)


# ------------------------------------------------------------------ posets


def _brute_rooted(n):
    """Rooted posets on n points up to isomorphism, by generating all order matrices."""
    found = []
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product([False, True], repeat=len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(pairs, bits):
            leq[i][j] = b
        if any(leq[i][j] and leq[j][i] for i, j in pairs):
            continue
        if any(leq[i][j] and leq[j][k] and not leq[i][k] for i in range(n) for j in range(n) for k in range(n)):
            continue
        if not any(all(leq[r][j] for j in range(n)) for r in range(n)):
            continue
        canon = min(tuple(tuple(leq[perm[i]][perm[j]] for j in range(n)) for i in range(n))
                    for perm in itertools.permutations(range(n)))
        if canon not in found:
            found.append(canon)
    return found


def test_rooted_poset_counts_small():
    assert [len(rooted_posets(n)) for n in (1, 2, 3)] == [1, 1, 2]
    assert sum(1 for _ in rooted_posets_upto(3)) == 4
    for n in (1, 2, 3, 4):
        assert len(rooted_posets(n)) == len(_brute_rooted(n))


def test_poset_counts():
    assert [len(posets(n)) for n in range(5)] == [1, 1, 2, 5, 16]


# ---------------------------------------------------------------- algebras


def test_upperset_algebra_small_cases():
    h = upperset_algebra(chain(1))
    assert h.n == 2
    h = upperset_algebra(chain(2))
    assert h.n == 3
    assert [h.leq[a][b] for a in range(3) for b in range(3)] == [a <= b for a in range(3) for b in range(3)]
    h.validate()


def test_disjunction_property_on_rooted_posets():
    for p in rooted_posets_upto(5):
        assert has_disjunction_property(upperset_algebra(p))
    # a two-element antichain is not rooted and fails it
    assert not has_disjunction_property(upperset_algebra(Poset.from_matrix([[1, 0], [0, 1]])))


def test_from_order_matches_upperset_algebra():
    for p in rooted_posets_upto(4):
        h = upperset_algebra(p)
        g = HeytingAlgebra.from_order(h.leq)
        assert g.meet == h.meet and g.join == h.join and g.imp == h.imp


def test_from_order_rejects_non_lattice():
    with pytest.raises(ValueError):
        HeytingAlgebra.from_order([[1, 0], [0, 1]])


def _brute_filters(h):
    out = []
    for r in range(1, h.n + 1):
        for sub in itertools.combinations(h.carrier, r):
            s = frozenset(sub)
            if all(h.meet[a][b] in s for a in s for b in s) and all(b in s for a in s for b in h.up(a)):
                out.append(s)
    return out


def test_filters_examples():
    h = upperset_algebra(chain(1))
    filters, prime, ultra = algebra_filters(h)
    assert set(filters) == {frozenset({1}), frozenset({0, 1})}
    assert ultra == [frozenset({1})]
    h = upperset_algebra(chain(2))
    filters, prime, ultra = algebra_filters(h)
    assert set(prime) == {frozenset({TOP_}), frozenset({A, TOP_})}
    assert ultra == [frozenset({A, TOP_})]


@pytest.mark.parametrize("p", list(rooted_posets_upto(4)), ids=lambda p: str(p.up))
def test_filter_facts(p):
    h = upperset_algebra(p)
    filters, primes, ultras = algebra_filters(h)
    assert set(filters) == set(_brute_filters(h))
    for f in filters:
        if h.bot in f:
            continue
        above = [P for P in primes if f <= P]
        assert frozenset.intersection(*above) == f
    for U in ultras:
        for a in h.carrier:
            assert (a in U) or (h.neg(a) in U)
            for b in h.carrier:
                assert (h.join[a][b] in U) == (a in U or b in U)
                assert (h.imp[a][b] in U) == (a not in U or b in U)
    for P in primes:
        for a in h.carrier:
            for b in h.carrier:
                expect = all(b in Q for Q in primes if P <= Q and a in Q)
                assert (h.imp[a][b] in P) == expect


# ------------------------------------------------------------------ models


def test_identity_k_passes_el5():
    assert check_model(three_chain((0, 1, 2)), "EL5").passed


def test_constant_top_k_fails_el5_at_bottom():
    m = three_chain((2, 2, 2))
    assert check_model(m, "EL5m").passed
    bad = check_model(m, "EL5").violations
    assert ("intuitionistic reflection", (BOT_,)) in bad


def test_e6_models_have_two_valued_k():
    for m in enumerate_models("E6L5m", 4):
        assert set(m.k) <= {m.algebra.bot, m.algebra.top}


def test_eval_examples():
    m = three_chain(cls="L5")
    assert eval(m, {}, TOP) == m.algebra.top
    y = Var("y")
    assert satisfies(m, {"y": A}, parse("[]~~y"))
    assert not satisfies(m, {"y": A}, Box(y))
    with pytest.raises(KeyError):
        eval(m, {}, Var("z"))


def test_identity_to_top_matches_box_on_all_models():
    f = ident(Var("x"), TOP)
    g = Box(Var("x"))
    for cls in ("L3", "L4", "L5", "EL5m"):
        for m in enumerate_models(cls, 3):
            tr = np.array([m.is_true(a) for a in m.algebra.carrier])
            assert (tr[eval_all(m, f, ["x"])] == tr[eval_all(m, g, ["x"])]).all()


def test_identity_means_equal_value():
    x, y = Var("x"), Var("y")
    for m in enumerate_models("L5", 4):
        for a, b in itertools.product(m.algebra.carrier, repeat=2):
            assert satisfies(m, {"x": a, "y": b}, ident(x, y)) == (a == b)


@pytest.mark.parametrize("cls", ["L3", "L4", "L5", "EL3m", "EL5m", "E4L5m", "E5L5m", "E6L5", "IELm", "IEL", "EL5star"])
def test_emitted_models_pass_their_class(cls):
    for m in enumerate_models(cls, 3):
        assert check_model(m, cls).passed


def test_l5_box_is_rigid_and_unique():
    per_algebra = {}
    for m in enumerate_models("L5", 4):
        h = m.algebra
        assert m.box == tuple(h.top if a == h.top else h.bot for a in h.carrier)
        per_algebra.setdefault(id(h), set()).add(m.box)
    assert all(len(v) == 1 for v in per_algebra.values())


def _brute_models(cls, max_worlds, boxes_from_all_tables):
    """Filter every table combination through check_model, then dedupe by isomorphism search."""
    from modalbhk.calculi import get_logic
    lg = get_logic(cls)
    out = []
    for p in rooted_posets_upto(max_worlds):
        h = upperset_algebra(p)
        tables = list(itertools.product(h.carrier, repeat=h.n))
        ultras = algebra_filters(h)[2] if lg.classical else [None]
        for tf in ultras:
            boxes = tables if boxes_from_all_tables else [tuple(h.top if a == h.top else h.bot for a in h.carrier)]
            for bx in boxes:
                for k in (tables if lg.epistemic else [None]):
                    m = AlgebraicModel(h, tf, bx, k)
                    if check_model(m, cls, first_only=True).passed and not any(is_isomorphic(m, o) for o in out):
                        out.append(m)
    return out


def test_enumeration_matches_brute_force_l5_all_box_tables():
    assert len(_brute_models("L5", 3, True)) == sum(1 for _ in enumerate_models("L5", 3))


@pytest.mark.parametrize("cls", ["EL5m", "EL5", "E4L5m", "E5L5m", "E6L5m", "EL5star"])
def test_enumeration_matches_brute_force_epistemic(cls):
    assert len(_brute_models(cls, 3, False)) == sum(1 for _ in enumerate_models(cls, 3))


def test_enumeration_matches_brute_force_l3():
    assert len(_brute_models("L3", 3, True)) == sum(1 for _ in enumerate_models("L3", 3))


def test_enumeration_is_isomorph_free_and_deterministic():
    ms = list(enumerate_models("EL5m", 3))
    assert [m.key() for m in ms] == [m.key() for m in enumerate_models("EL5m", 3)]
    for a, b in itertools.combinations(ms, 2):
        assert not is_isomorphic(a, b)


def test_model_json_roundtrip():
    for m in list(enumerate_models("EL5", 3))[:10]:
        back = AlgebraicModel.from_json(json.loads(m.dumps()))
        assert back.true_filter == m.true_filter and back.box == m.box and back.k == m.k
        assert back.algebra.imp == m.algebra.imp


def test_soundness_of_axioms_small():
    from modalbhk.acceptance import algebra_sweep, sweep_formulas
    for cls in ("EL5m", "E4L5m", "E5L5m", "E6L5m", "EL5", "E6L5", "EL5star"):
        n, bad = algebra_sweep(enumerate_models(cls, 3), sweep_formulas(cls))
        assert n > 0 and not bad


def test_tnd_true_in_classical_models():
    for m in enumerate_models("L3", 3):
        tr = np.array([m.is_true(a) for a in m.algebra.carrier])
        assert tr[eval_all(m, parse("x | ~x"), ["x"])].all()
