from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from shiftops import shiftdiff as sd
from shiftops.cherednik import CherednikOperators, Multiplicity, nonsym_E, parse_multiplicity, sym_P
from shiftops.galg import GAElem, ct_pairing
from shiftops.weyl import build_root_system

BC1 = build_root_system("BC1")
A1 = build_root_system("A1")
A2 = build_root_system("A2")


def mono(*lam):
    return GAElem.monomial(lam, Fraction(1))


def linear_form(R, a, xs):
    return sum(sympy.Rational(str(c)) * x for c, x in zip(R.gram_dot(a), xs))


def q_as_sympy(qp, xs, ys):
    return sympy.expand(sum(sd._from_hpoly(a, xs) * sd._from_hpoly(b, ys) for a, b in qp.pairs))


# ---------------------------------------------------------------------------
# interpolation polynomial


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "C2", "BC1", "BC2"])
def test_q_poly_defining_property(label):
    R = build_root_system(label)
    assert sd.check_q_poly(R, sd.build_q_poly(label))


@pytest.mark.parametrize("label", ["A2", "B2", "BC2"])
def test_q_poly_is_independent_of_harmonic_basis(label):
    assert sd.build_q_poly(label, 0).tensor() == sd.build_q_poly(label, 1).tensor()


@pytest.mark.parametrize("label, size", [("A1", 2), ("A2", 6), ("B2", 8), ("BC1", 2)])
def test_harmonic_basis_dimension_and_degrees(label, size):
    R = build_root_system(label)
    basis = sd.harmonic_basis(label)
    assert len(basis) == size
    assert max(sd.hpoly_degree(dict(b)) for b in basis) == len(R.positive_reduced)


def test_q_poly_rank_one_examples():
    xs, ys = sd._symbols(1), sympy.symbols("y1:2")
    a = linear_form(A1, A1.simple[0], xs)
    assert q_as_sympy(sd.build_q_poly("A1"), xs, ys) == sympy.expand((a + a.subs(xs[0], ys[0])) / 2)
    # the coroot of the short root eps_1 is 2 eps_1
    c = linear_form(BC1, (2,), xs)
    assert q_as_sympy(sd.build_q_poly("BC1"), xs, ys) == sympy.expand((c + c.subs(xs[0], ys[0])) / 4)


def test_q_poly_a2_example():
    xs, ys = sd._symbols(2), sympy.symbols("y1:3")
    a1, a2 = (linear_form(A2, a, xs) for a in A2.simple)
    u = [sympy.Integer(1), a1, a2, 2 * a1 * (a1 + 2 * a2), 2 * a2 * (2 * a1 + a2), 3 * a1 * a2 * (a1 + a2)]
    sub = dict(zip(xs, ys))
    expected = sum(u[5 - j] * u[j].subs(sub, simultaneous=True) for j in range(6)) / 18
    assert q_as_sympy(sd.build_q_poly("A2"), xs, ys) == sympy.expand(expected)


# ---------------------------------------------------------------------------
# shift factors


def test_bc1_shift_factor_examples():
    k = Multiplicity.symbolic(BC1)
    sign = BC1.character("sign")
    for n in range(0, 5):
        assert sd.shift_factor(BC1, (n + 1,), sign, 1, k) == n
    k0_long = k.k0((2,))
    for n in range(0, 5):
        assert sd.shift_factor(BC1, (-n,), sign, -1, k) == n + 2 * k0_long


def test_forced_vanishing():
    k = Multiplicity.symbolic(A1)
    assert sd.shift_factor(A1, (0,), A1.character("sign"), 1, k) == 0
    assert sd.nonsym_shift_apply(A1, A1.character("sign"), 1, k, mono(0)).is_zero()


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "C2", "BC1"])
def test_factor_forms_agree(label):
    R = build_root_system(label)
    k = Multiplicity.symbolic(R)
    for eps in R.linear_characters():
        for sign in (1, -1):
            for mu in R.window(3):
                assert sd.shift_factor(R, mu, eps, sign, k) == sd.shift_factor_product(R, mu, eps, sign, k)


@pytest.mark.parametrize("label", ["A1", "BC1", "A2"])
def test_shift_action_on_E(label):
    R = build_root_system(label)
    k = Multiplicity.symbolic(R)
    for eps in R.linear_characters():
        for sign in (1, -1):
            kt = k.shifted(eps.l, sign)
            for mu in R.window(3 if R.rank == 1 else 2):
                lhs = sd.nonsym_shift_apply(R, eps, sign, k, nonsym_E(R, mu, k))
                target = sd.shifted_weight(R, mu, eps, sign)
                rhs = nonsym_E(R, target, kt).scale(sd.shift_factor(R, mu, eps, sign, k))
                assert lhs == rhs


@pytest.mark.parametrize("label", ["A1", "BC1", "A2"])
def test_transmutation(label):
    R = build_root_system(label)
    k = Multiplicity.symbolic(R)
    src = CherednikOperators(R, k)
    for eps in R.linear_characters():
        for sign in (1, -1):
            dst = CherednikOperators(R, k.shifted(eps.l, sign))
            for mu in R.window(3 if R.rank == 1 else 2):
                f = mono(*mu)
                g = sd.nonsym_shift_apply(R, eps, sign, k, f)
                for i in range(R.rank):
                    assert sd.nonsym_shift_apply(R, eps, sign, k, src.coord(i, f)) == dst.coord(i, g)


def test_operator_independent_of_harmonic_basis():
    k = Multiplicity.symbolic(A2)
    eps = A2.character("sign")
    for mu in A2.window(2):
        f = mono(*mu)
        for sign in (1, -1):
            assert sd.nonsym_shift_apply(A2, eps, sign, k, f, 0) == sd.nonsym_shift_apply(A2, eps, sign, k, f, 1)


def test_projector_isolates_orbit_member():
    k = Multiplicity.symbolic(A2)
    lam = (1, 1)
    orbit = A2.orbit(lam)
    for mu in orbit:
        for nu in orbit:
            img = sd.projector_Q(A2, mu, k, k, nonsym_E(A2, nu, k))
            if nu == mu:
                assert not img.is_zero()
            else:
                assert img.is_zero()


# ---------------------------------------------------------------------------
# explicit rank-one operators


def test_bc1_forward_matches_explicit_operator():
    k = Multiplicity.symbolic(BC1)
    ratios = [r for r in sd.bc1_golden_scalars(k)["forward"] if r != "any"]
    assert len(ratios) == 1 and ratios[0] == 1


def test_bc1_backward_matches_corrected_explicit_operator():
    k = Multiplicity.symbolic(BC1)
    ratios = [r for r in sd.bc1_golden_scalars(k, corrected=True)["backward"] if r != "any"]
    assert len(ratios) == 1 and ratios[0] == 1


def test_bc1_backward_printed_operator_differs_on_monomials():
    k = Multiplicity.symbolic(BC1)
    f = mono(2)
    ours = sd.nonsym_shift_apply(BC1, BC1.character("sign"), -1, k, f)
    assert ours != sd.bc1_explicit_backward(k, f)
    assert ours == sd.bc1_explicit_backward_corrected(k, f)


# ---------------------------------------------------------------------------
# symmetric shift operator


@pytest.mark.parametrize("label", ["A1", "BC1", "A2", "B2"])
def test_symmetric_shift(label):
    R = build_root_system(label)
    k = Multiplicity.symbolic(R)
    triv = R.character("triv")
    for eps in R.linear_characters():
        kt = k.shifted(eps.l)
        for lam in [m for m in R.window(2) if R.is_dominant(m)]:
            low = tuple(a - b for a, b in zip(lam, eps.rho_l))
            target = sym_P(R, low, triv, kt) if R.is_dominant(low) else GAElem()
            lhs = sd.sym_shift_apply(R, eps, k, sym_P(R, lam, triv, k))
            assert lhs == target.scale(sd.sym_shift_factor(R, lam, eps, k))


# ---------------------------------------------------------------------------
# integer multiplicities: adjointness and norms


def test_norm_ratio_examples():
    k = parse_multiplicity(A1, "1")
    sign = A1.character("sign")
    assert sd.norm_ratio(A1, (1,), sign, k) == 2
    assert sd.norm_ratio(A1, (-1,), sign, k) == Fraction(3, 2)
    assert sd.norm_sq(A1, (1,), k) == 2
    assert sd.norm_sq(A1, (-1,), k) == Fraction(3, 2)
    k0 = parse_multiplicity(A1, "0")
    assert sd.norm_sq(A1, (2,), k0) == 1 and sd.norm_sq(A1, (-2,), k0) == 1


@pytest.mark.parametrize("label, kval", [("A1", "1"), ("A1", "2"), ("BC1", "1,1"), ("BC1", "2,3")])
def test_norm_ratio_against_ct_oracle(label, kval):
    R = build_root_system(label)
    k = parse_multiplicity(R, kval)
    for eps in R.linear_characters():
        if eps.is_trivial():
            continue
        km = k.shifted(eps.l, -1)
        for mu in R.window(4):
            if R.decompose(mu).dominant == (0,):
                continue
            nu = sd.shifted_weight(R, mu, eps, -1)
            assert sd.norm_sq(R, mu, k) / sd.norm_sq(R, nu, km) == sd.norm_ratio(R, mu, eps, k)


@pytest.mark.parametrize("label, kval", [("A1", "1"), ("BC1", "1,1"), ("BC1", "0,1")])
def test_adjointness(label, kval):
    R = build_root_system(label)
    k = parse_multiplicity(R, kval)
    assert sd.adjoint_check(R, R.character("sign"), k, R.window(4)) == []


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 2))
def test_adjointness_random_pairs(a, b, kv):
    k = parse_multiplicity(A1, str(kv))
    kp = k.shifted((1,))
    eps = A1.character("sign")
    f, g = mono(a), mono(b)
    lhs = ct_pairing(A1, sd.nonsym_shift_apply(A1, eps, 1, k, f), g, kp)
    rhs = ct_pairing(A1, f, sd.nonsym_shift_apply(A1, eps, -1, kp, g), k)
    assert lhs == rhs
