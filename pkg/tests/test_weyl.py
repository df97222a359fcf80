from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from shiftops.weyl import UnsupportedType, build_root_system

TYPES = ["A1", "A2", "B2", "C2", "BC1", "BC2"]
ORDERS = {"A1": 2, "A2": 6, "B2": 8, "C2": 8, "BC1": 2, "BC2": 8}


@pytest.mark.parametrize("label", TYPES)
def test_group_order_and_longest_element(label):
    R = build_root_system(label)
    G = R.group
    assert len(G) == ORDERS[label]
    w0 = max(G.elements, key=lambda w: w.length)
    assert w0.length == len(R.positive_reduced)
    assert {w.matrix for w in G.elements} == {G.mul(a, b).matrix for a in G.elements for b in G.elements}


def test_root_system_examples():
    A1 = build_root_system("A1")
    assert len(A1.roots) == 2 and len(A1.group) == 2
    BC1 = build_root_system("BC1")
    assert sorted(BC1.roots) == [(-2,), (-1,), (1,), (2,)]
    assert [a for a in BC1.positive_reduced] == [(2,)]
    A2 = build_root_system("A2")
    assert len(A2.roots) == 6


def test_unsupported_type():
    with pytest.raises(UnsupportedType):
        build_root_system("G2")


@pytest.mark.parametrize("label", TYPES)
def test_simple_reflections_are_involutions(label):
    R = build_root_system(label)
    G = R.group
    for i in range(1, R.rank + 1):
        s = G.simple(i)
        assert G.mul(s, s) == G.identity
        assert s.length == 1


def test_bruhat_chain_b2():
    R = build_root_system("B2")
    G = R.group
    chain = [G.identity, G.from_word([1]), G.from_word([1, 2]), G.from_word([1, 2, 1]), G.from_word([1, 2, 1, 2])]
    for a, b in zip(chain, chain[1:]):
        assert G.bruhat_leq(a, b) and not G.bruhat_leq(b, a)


def test_bruhat_a1():
    G = build_root_system("A1").group
    assert G.bruhat_leq(G.identity, G.simple(1))


def test_decomposition_examples():
    A1 = build_root_system("A1")
    d = A1.decompose((0,))
    assert d.dominant == (0,) and d.vbar == A1.group.identity and d.w_lam.length == 1
    d = A1.decompose((-1,))
    assert d.dominant == (1,) and d.vbar == A1.group.simple(1) and d.v == A1.group.identity
    A2 = build_root_system("A2")
    lam = (1, 1)
    mu = A2.group.simple(1)(lam)
    assert A2.decompose(tuple(int(x) for x in mu)).vbar == A2.group.simple(1)


@pytest.mark.parametrize("label", TYPES)
def test_decomposition_properties(label):
    R = build_root_system(label)
    for mu in R.window(4):
        d = R.decompose(mu)
        assert R.is_dominant(d.dominant)
        assert tuple(d.vbar(d.dominant)) == mu
        # vbar is the shortest element taking the dominant weight to mu
        assert all(w.length >= d.vbar.length for w in R.group.elements if tuple(w(d.dominant)) == mu)
        anti = tuple(d.v(mu))
        assert R.is_dominant(tuple(-x for x in anti))


def test_order_examples():
    A1 = build_root_system("A1")
    assert A1.order_leq((1,), (-1,))
    assert A1.order_leq((2,), (2,))
    A2 = build_root_system("A2")
    assert A2.dominance_leq((0, 0), (1, 1))


@pytest.mark.parametrize("label", TYPES)
def test_cone_is_downward_closed(label):
    R = build_root_system(label)
    for mu in R.window(3):
        cone = set(R.cone(mu))
        assert mu in cone
        for nu in cone:
            assert R.order_leq(nu, mu)


def test_characters():
    assert [c.name for c in build_root_system("A2").linear_characters()] == ["triv", "sign"]
    assert len(build_root_system("B2").linear_characters()) == 4
    BC1 = build_root_system("BC1")
    sign = BC1.character("sign")
    assert sign.on_root((1,)) == -1 and sign.on_root((2,)) == -1
    assert tuple(sign.rho_l) == (1,)
    with pytest.raises(UnsupportedType):
        build_root_system("A2").character("eps-short")


@pytest.mark.parametrize("label", TYPES)
def test_characters_are_multiplicative(label):
    R = build_root_system(label)
    G = R.group
    for eps in R.linear_characters():
        for a, b in product(G.elements, repeat=2):
            assert eps(G.mul(a, b)) == eps(a) * eps(b)


def test_spectral_vector_examples():
    from shiftops.cherednik import Multiplicity

    A1 = build_root_system("A1")
    k = Multiplicity.symbolic(A1)
    kk = k[0]
    assert A1.spectral_vector((0,), k) == tuple(-x for x in A1.rho(k))
    # (m + k) omega in the coordinates of the fundamental weight
    r = A1.spectral_vector((3,), k)
    assert A1.pairing(r, (2,)) == 3 + kk


def test_shifted_weight_examples():
    from shiftops.shiftdiff import shifted_weight

    BC1 = build_root_system("BC1")
    sign = BC1.character("sign")
    for n in range(0, 5):
        assert shifted_weight(BC1, (n + 1,), sign, 1) == (n,)
    for n in range(1, 5):
        assert shifted_weight(BC1, (-n,), sign, 1) == (-(n - 1),)
    A1 = build_root_system("A1")
    assert shifted_weight(A1, (0,), A1.character("sign"), -1) == (-1,)


@given(st.sampled_from(TYPES), st.integers(-5, 5), st.integers(-5, 5))
def test_reflection_preserves_inner_product(label, a, b):
    R = build_root_system(label)
    x = (a, b)[: R.rank]
    for w in R.group.elements:
        assert R.inner(w(x), w(x)) == R.inner(x, x)


def test_parse_weight():
    R = build_root_system("A2")
    assert R.parse_weight("1, -2") == (1, -2)
    with pytest.raises(ValueError):
        R.parse_weight("1")
