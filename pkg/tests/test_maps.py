from itertools import product

import pytest

from loopcoprod.algebra import LoopClass, SpaceMismatch, SpaceSpec, TensorClass, map_legs, tensor
from loopcoprod.coproduct import coproduct
from loopcoprod.groups import cyclic, quaternion, trivial
from loopcoprod.maps import (
    COVERING,
    CUSTOM,
    UnsupportedKind,
    coproduct_via_f,
    coproduct_via_universal_cover,
    covering_map,
    custom_map,
    map_from_dict,
    pushforward,
    pushforward_tensor,
    sphere_coproduct_terms,
    sphere_self_map,
)
from conftest import SMALL_GROUPS
from oracles import sphere_terms


def mono(space, g, k, c=1):
    return LoopClass.monomial(space, g, k, c)


def test_covering_pushforward():
    target = SpaceSpec(3, cyclic(2))
    m = covering_map(target)
    assert pushforward(m, mono(m.source, 0, 2)) == mono(target, 0, 2)
    assert m.preimages == ((1, 0), (1, 1))
    assert m.degree == 2 and m.checked


def test_self_map_pushforward():
    m = sphere_self_map(3, 2)
    assert pushforward(m, mono(m.source, 0, 3)) == mono(m.target, 0, 3, 8)
    ident = sphere_self_map(3, 1)
    a = mono(ident.source, 0, 4, 5) - mono(ident.source, 0, 1)
    assert pushforward(ident, a) == a


def test_self_map_preimages():
    for d in range(-3, 4):
        m = sphere_self_map(5, d)
        assert sum(s for s, _ in m.preimages) == d
        assert len(m.preimages) == abs(d)


def test_pushforward_wrong_source():
    m = sphere_self_map(3, 2)
    with pytest.raises(SpaceMismatch):
        pushforward(m, mono(SpaceSpec(5, trivial()), 0, 1))


def test_pushforward_multiplicative():
    for d in range(-3, 4):
        m = sphere_self_map(3, d)
        for i, j in product(range(4), repeat=2):
            a, b = mono(m.source, 0, i), mono(m.source, 0, j)
            assert pushforward(m, a * b) == pushforward(m, a) * pushforward(m, b)


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=lambda G: G.name)
def test_covering_identity(G):
    m = covering_map(SpaceSpec(3, G))
    for k in range(7):
        u = mono(m.source, 0, k)
        assert coproduct_via_f(m, u) == coproduct(mono(m.target, 0, k))


def test_degree_one_single_preimage():
    m = sphere_self_map(3, 1)
    for k in range(6):
        u = mono(m.source, 0, k)
        assert coproduct_via_f(m, u) == pushforward_tensor(m, coproduct(u))


@pytest.mark.parametrize("d", range(-3, 4))
def test_degree_d_closed_form(d):
    m = sphere_self_map(3, d)
    for k in range(9):
        u = mono(m.source, 0, k)
        expected = TensorClass(m.target, {((0, i), (0, j)): d**k for i, j in sphere_terms(k)})
        assert coproduct(pushforward(m, u)) == expected
        assert d * pushforward_tensor(m, coproduct(u)) == expected


def test_universal_cover_examples():
    sp = SpaceSpec(3, cyclic(2))
    got = coproduct_via_universal_cover(sp, mono(sp, 1, 1))
    assert got == tensor(mono(sp, 1, 0), mono(sp, 0, 0)) + tensor(mono(sp, 0, 0), mono(sp, 1, 0))
    for g in sp.group.elements:
        assert coproduct_via_universal_cover(sp, mono(sp, g, 0)).is_zero()
    s = SpaceSpec(5, trivial())
    for k in range(8):
        t = coproduct_via_universal_cover(s, mono(s, 0, k))
        assert {(l[1], r[1]): c for (l, r), c in t.items()} == sphere_terms(k)


def test_sphere_coproduct_terms():
    assert sphere_coproduct_terms(0) == []
    assert sphere_coproduct_terms(3) == [(0, 2), (1, 1), (2, 0)]


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=lambda G: G.name)
def test_universal_cover_matches(G):
    sp = SpaceSpec(3, G)
    for g, k in product(G.elements, range(5)):
        a = mono(sp, g, k)
        assert coproduct_via_universal_cover(sp, a) == coproduct(a)


def test_custom_map_unchecked():
    s = SpaceSpec(3, trivial())
    target = SpaceSpec(3, cyclic(3))
    images = {(0, k): mono(target, 0, k) for k in range(4)}
    m = custom_map(s, target, [(1, 0), (1, 1), (1, 2)], images)
    assert m.kind == CUSTOM and not m.checked
    assert pushforward(m, mono(s, 0, 2)) == mono(target, 0, 2)
    with pytest.raises(ValueError, match="no image"):
        pushforward(m, mono(s, 0, 5))
    with pytest.raises(SpaceMismatch):
        custom_map(s, target, [], {(0, 0): mono(s, 0, 0)})


def test_map_from_dict():
    m = map_from_dict({"kind": COVERING, "source_n": 3}, quaternion(8))
    assert m.target.group == quaternion(8)
    m = map_from_dict({"kind": "sphere_self_map", "source_n": 5, "degree": -2})
    assert m.degree == -2
    with pytest.raises(UnsupportedKind):
        map_from_dict({"kind": "knot", "source_n": 3})
    with pytest.raises(ValueError):
        map_from_dict({"kind": COVERING, "source_n": 3})


def test_map_legs():
    s = SpaceSpec(3, trivial())
    t = tensor(mono(s, 0, 1), mono(s, 0, 2))
    out = map_legs(t, lambda g, k: mono(s, g, k, 2))
    assert out == 4 * t
