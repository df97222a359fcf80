"""Steinberg basis, the trigonometric interpolation polynomial and q-shift operators.

Elements of ``A'`` are :class:`~shiftops.galg.GAElem` instances with integer
exponents in the ``L'`` basis of the pair.  Evaluating ``f'`` in Cherednik
operators uses ``f'(Y)`` with ``Y^lam'``; the eigenvalue law
``Y^lam' E_mu = q^(-<lam', r(mu)>) E_mu`` means ``Y^{f'*}`` acts on
``E_mu`` by ``f'(r(mu))``, so the interpolation polynomial is always
evaluated through its starred slots.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .cherednik import PoleAtEvaluation
from .galg import DivisionRemainder, GAElem, HalfWeightNotInLattice, exact_divide, half_weight_product, plain_symmetrize
from .qaffine import (
    AffinePair,
    QMult,
    QOperators,
    ShiftData,
    _HALF,
    build_affine_pair,
    dual_finite_roots,
    dual_root_k,
    hecke_symmetrizer,
    nonsym_E_q,
    q_c_function,
    shift_data,
    simple_k,
    sym_P_q,
    tau_word_mult,
)
from .scalars import QExponent, RatFunc
from .weyl import LinearCharacter, Weight, WeylElt, mat_vec


class SingularSteinbergMatrix(ArithmeticError):
    pass


class NotInvariantInput(ValueError):
    pass


class VariantMismatch(AssertionError):
    pass


# ---------------------------------------------------------------------------
# Steinberg basis and the interpolation polynomial


def steinberg_basis(pair: AffinePair) -> List[Tuple[WeylElt, Weight]]:
    """``[(w, exponent of u_w)]`` with ``u_w = e^{w^-1 lam_w}`` in ``L'`` coordinates.

    ``lam_w`` sums the fundamental weights of ``L'`` whose simple root
    ``b'_i`` is sent to a negative root by ``w^-1``.
    """
    R = pair.R
    G = pair.W0
    out = []
    for w in G.elements:
        winv = G.inverse(w)
        lam = [0] * pair.rank
        for i, a in enumerate(R.indivisible_simple):
            if not R.is_positive(mat_vec(winv.matrix, a)):
                lam[i] += 1
        out.append((w, pair.act_lp(winv, lam)))
    return out


def varpi_dual(pair: AffinePair) -> GAElem:
    """``prod over positive b' of S'_02 of (e^{b'/2} - e^{-b'/2})`` in ``A'``."""
    bs = []
    for lp, a, ia, i2 in dual_finite_roots(pair):
        bs.append(tuple(Fraction(2 * x) for x in lp) if i2 is not None else tuple(Fraction(x) for x in lp))
    return half_weight_product(bs, pair.rank).map_coeffs(lambda c: pair.field(c))


@dataclass
class SteinbergQPoly:
    """``q = sum_w q_w (x) u_w``: first-slot polynomials ``q_w`` and Steinberg exponents ``u_w``."""

    pair: AffinePair
    basis: List[Tuple[WeylElt, Weight]]
    first: List[GAElem]
    varpi: GAElem
    det_unit: Tuple[int, Weight]

    def items(self):
        for (w, u), qw in zip(self.basis, self.first):
            yield w, qw, u

    def evaluate_pair(self, w: WeylElt) -> GAElem:
        """``x -> q(x, w x)`` as an element of ``A'``."""
        total = GAElem()
        winv = self.pair.W0.inverse(w)
        for _, qw, u in self.items():
            total = total + qw.shift(self.pair.act_lp(winv, u))
        return total


def _laurent_to_sympy(f: GAElem, zs) -> sympy.Expr:
    out = sympy.Integer(0)
    for lam, c in f.terms.items():
        term = sympy.Rational(str(c))
        for z, e in zip(zs, lam):
            term *= z ** e
        out += term
    return out


def _sympy_to_laurent(expr, zs) -> GAElem:
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    dpoly = sympy.Poly(den, *zs)
    if len(dpoly.terms()) != 1:
        raise SingularSteinbergMatrix(f"entry {expr} is not a Laurent polynomial")
    dexp, dcoeff = dpoly.terms()[0]
    out = {}
    for exp, c in sympy.Poly(num, *zs).terms():
        lam = tuple(int(a - b) for a, b in zip(exp, dexp))
        out[lam] = Fraction(str(sympy.Rational(c) / sympy.Rational(dcoeff)))
    return GAElem(out)


@lru_cache(maxsize=None)
def _build_q_trigpoly(label: str) -> SteinbergQPoly:
    pair = build_affine_pair(label)
    zs = sympy.symbols(f"z1:{pair.rank + 1}")
    basis = steinberg_basis(pair)
    G = pair.W0
    elements = [w for w, _ in basis]

    def mono(lam):
        out = sympy.Integer(1)
        for z, e in zip(zs, lam):
            out *= z ** e
        return out

    U = sympy.Matrix(len(basis), len(basis),
                     lambda r, c: mono(pair.act_lp(G.inverse(elements[r]), basis[c][1])))
    varpi = half_weight_product(
        [tuple(Fraction(2 * x) for x in lp) if i2 is not None else tuple(Fraction(x) for x in lp)
         for lp, _, _, i2 in dual_finite_roots(pair)], pair.rank)
    vp = _laurent_to_sympy(varpi, zs)
    det = sympy.factor(U.det())
    if det == 0:
        raise SingularSteinbergMatrix(f"Steinberg matrix of {label} is singular")
    unit = sympy.cancel(det / vp ** (len(basis) // 2))
    unit_l = _sympy_to_laurent(unit, zs)
    if len(unit_l) != 1:
        raise SingularSteinbergMatrix(f"det is not a unit times the Weyl denominator power: {unit}")
    (uexp, ucoeff), = unit_l.terms.items()
    rhs = sympy.Matrix([vp if w.length == 0 else 0 for w in elements])
    sol = U.LUsolve(rhs)
    first = [_sympy_to_laurent(sol[i], zs).map_coeffs(lambda c: pair.field(c)) for i in range(len(basis))]
    return SteinbergQPoly(pair, basis, first, varpi.map_coeffs(lambda c: pair.field(c)),
                          (int(ucoeff), uexp))


def build_q_trigpoly(pair: AffinePair) -> SteinbergQPoly:
    """Solve ``q(x, w x) = varpi'(x) delta_{e,w}`` in the span of the Steinberg basis."""
    return _build_q_trigpoly(pair.label)


def check_q_trigpoly(qp: SteinbergQPoly) -> bool:
    for w in qp.pair.W0.elements:
        want = qp.varpi if w.length == 0 else GAElem()
        if qp.evaluate_pair(w) != want:
            return False
    return True


# ---------------------------------------------------------------------------
# delta functions


def _half_product(pair: AffinePair, factors) -> GAElem:
    """Product of factors ``sum_m c_m e^{m v/2}`` given as ``(v, [(m, c_m), ...])``."""
    F = pair.field
    terms: Dict[tuple, RatFunc] = {(Fraction(0),) * pair.rank: F.one()}
    for v, parts in factors:
        new: Dict[tuple, RatFunc] = {}
        for key, c in terms.items():
            for m, cc in parts:
                kk = tuple(x + Fraction(m * y, 2) for x, y in zip(key, v))
                new[kk] = new[kk] + c * cc if kk in new else c * cc
        terms = {k: v for k, v in new.items() if not v.is_zero()}
    out = {}
    for key, c in terms.items():
        if any(x.denominator != 1 for x in key):
            raise HalfWeightNotInLattice(f"exponent {key} is not in the lattice")
        out[tuple(int(x) for x in key)] = c
    return GAElem(out)


def _delta_factor(pair: AffinePair, vec: Sequence[int], doubled: bool, ka: QExponent, k2: QExponent):
    """``delta_{a,k}`` as one factor for :func:`_half_product`.

    ``2a`` not a root: ``tau e^{a/2} - tau^-1 e^{-a/2}``.
    ``2a`` a root: ``-tau^-1 e^{-a} (1 - q^{k(a)} e^a)(1 + q^{k(2a)} e^a)``.
    """
    F = pair.field
    v = tuple(Fraction(x) for x in vec)
    if not doubled:
        tau = F.q_power(ka * _HALF)
        return [(v, [(1, tau), (-1, -tau.inverse())])]
    tau = F.q_power((ka + k2) * _HALF)
    ti = tau.inverse()
    return [(v, [(-2, -ti), (0, ti * (F.q_power(ka) - F.q_power(k2))), (2, tau)])]


def q_delta_root(pair: AffinePair, root: Weight, k: QMult) -> GAElem:
    """``delta_{a,k}`` for a positive finite root ``a`` of ``S_01`` (``L`` coordinates)."""
    doubled = pair.case == 3
    ka, k2 = simple_k(pair, k, 1)
    if not doubled:
        k2 = QExponent.const(0, pair.nparams)
    return _half_product(pair, _delta_factor(pair, root, doubled, ka, k2))


def _finite_S01(pair: AffinePair) -> List[Weight]:
    R = pair.R
    return [a for a in R.positive_roots if R.half(a) is None]


def q_delta_eps(pair: AffinePair, eps: LinearCharacter, k: QMult) -> GAElem:
    """``delta_{eps,k}``: product of ``delta_{a,k}`` over positive ``a`` in ``S_01`` with ``l(a) = 1``."""
    doubled = pair.case == 3
    ka, k2 = simple_k(pair, k, 1)
    if not doubled:
        k2 = QExponent.const(0, pair.nparams)
    factors = []
    for a in _finite_S01(pair):
        if eps.on_root(a) == -1:
            factors += _delta_factor(pair, a, doubled, ka, k2)
    return _half_product(pair, factors)


def q_delta_dual(pair: AffinePair, eps: LinearCharacter, kp: Sequence[QExponent], negate: bool = False) -> GAElem:
    """``delta'_{eps,k'}`` in ``A'`` (``negate`` gives ``delta'_{eps,-k'}``)."""
    factors = []
    for root in dual_finite_roots(pair):
        lp, a, ia, i2 = root
        if eps.on_root(a) != -1:
            continue
        ka, k2 = dual_root_k(pair, root, kp, None, negate)
        factors += _delta_factor(pair, lp, i2 is not None, ka, k2)
    return _half_product(pair, factors)


def varpi_eval(pair: AffinePair, x: Sequence) -> RatFunc:
    return pair.eval_lp(varpi_dual(pair), x)


def q_delta(pair: AffinePair, eps: LinearCharacter, k: QMult, variant: str) -> GAElem:
    """``variant``: ``"root"`` (``delta_{a_1,k}``), ``"eps"`` or ``"dual"``."""
    if variant == "root":
        return q_delta_root(pair, pair.R.indivisible_simple[0], k)
    if variant == "eps":
        return q_delta_eps(pair, eps, k)
    if variant == "dual":
        return q_delta_dual(pair, eps, pair.dual_values(k))
    raise ValueError(f"unknown delta variant {variant!r}")


# ---------------------------------------------------------------------------
# symmetric q-shift operator


def _star_lp(f: GAElem) -> GAElem:
    return GAElem._raw({tuple(-x for x in lam): c for lam, c in f.terms.items()})


def _is_invariant(pair: AffinePair, f: GAElem) -> bool:
    from .galg import act

    return all(act(w, f) == f for w in pair.W0.elements)


def q_sym_shift(pair: AffinePair, eps: LinearCharacter, k: QMult, f: GAElem) -> GAElem:
    """``G_+ = delta_{eps,k}^-1 delta'_{eps,k'}(Y(k)^-1)`` with ``e^{a'} -> Y^{-a'}``."""
    if not _is_invariant(pair, f):
        raise NotInvariantInput("the symmetric shift operator needs a W0-invariant input")
    dp = q_delta_dual(pair, eps, pair.dual_values(k))
    g = QOperators(pair, k).Y_poly(_star_lp(dp), f)
    return exact_divide(g, q_delta_eps(pair, eps, k))


def sym_shift_factor_q(pair: AffinePair, lam: Weight, eps: LinearCharacter, k: QMult) -> RatFunc:
    """``h_+(lam, k) = q^{k.l/2} delta'_{eps,-k'}(lam + rho_{k'})``."""
    sd = shift_data(pair, eps)
    rho = pair.rho_dual(k)
    x = tuple(r + l for r, l in zip(rho, lam))
    dp = q_delta_dual(pair, eps, pair.dual_values(k), negate=True)
    return pair.field.q_power(sd.k_dot_l(k) * _HALF) * pair.eval_lp(dp, x)


def symmetric_P(pair: AffinePair, lam: Weight, k: QMult) -> GAElem:
    return sym_P_q(pair, lam, pair.R.character("triv"), k)


# ---------------------------------------------------------------------------
# non-symmetric q-shift operators


def shifted_mult(pair: AffinePair, eps: LinearCharacter, k: QMult, sign: int) -> QMult:
    return k.shifted(shift_data(pair, eps).l_wedge, sign)


def q_projector(pair: AffinePair, mu: Weight, k: QMult, f: GAElem) -> GAElem:
    """``Q_mu = sum_w q_w(r(mu)) Y^{u_w*}``: kills ``E_nu`` for ``nu != mu`` in the orbit."""
    qp = build_q_trigpoly(pair)
    ops = QOperators(pair, k)
    r = pair.spectral(mu, k)
    out = GAElem()
    for _, qw, u in qp.items():
        c = pair.eval_lp(qw, r)
        if not c.is_zero():
            out = out + ops.Y(tuple(-x for x in u), f).scale(c)
    return out


def _symmetrize(pair: AffinePair, eps: LinearCharacter, k: QMult, f: GAElem, variant: str) -> GAElem:
    if variant == "hecke":
        return hecke_symmetrizer(pair, eps, k, f)
    if variant == "plain":
        return plain_symmetrize(pair.R, eps, f)
    raise ValueError(f"unknown symmetrizer variant {variant!r}")


def q_nonsym_shift_apply(pair: AffinePair, eps: LinearCharacter, sign: int, k: QMult, f: GAElem,
                         variant: str = "hecke") -> GAElem:
    """``G_pm f = sum_w Y^{u_w*}(k pm l^) (Delta^-+ Sym_{eps_pm}(Y^{q_w*}(k) f))``.

    Forward divides exactly by ``delta_{eps,k}`` and symmetrizes with ``eps``;
    backward symmetrizes trivially and multiplies by ``delta_{eps,k-l^}``.
    ``variant`` selects the Hecke symmetrizer or plain Weyl-group transposition.
    """
    qp = build_q_trigpoly(pair)
    ops = QOperators(pair, k)
    kt = shifted_mult(pair, eps, k, sign)
    ops_t = QOperators(pair, kt)
    sym_char = eps if sign > 0 else pair.R.character("triv")
    delta = q_delta_eps(pair, eps, k if sign > 0 else kt)
    out = GAElem()
    for _, qw, u in qp.items():
        g = ops.Y_poly(_star_lp(qw), f)
        if g.is_zero():
            continue
        s = _symmetrize(pair, sym_char, k, g, variant)
        s = exact_divide(s, delta) if sign > 0 else s * delta
        if s.is_zero():
            continue
        out = out + ops_t.Y(tuple(-x for x in u), s)
    return out


def shifted_weight_q(pair: AffinePair, mu: Weight, eps: LinearCharacter, sign: int) -> Weight:
    """``mu_{eps,pm} = vbar(mu) w_{0 lam} (lam -+ rho~_l)``."""
    return pair.R.mu_shifted(tuple(mu), shift_data(pair, eps).rho_tilde, sign)


def q_shift_factor(pair: AffinePair, mu: Weight, eps: LinearCharacter, sign: int, k: QMult,
                   literal: bool = False) -> RatFunc:
    """The shift factor of ``G_pm`` on ``E_mu`` in closed form.

    ``eps(.) tau^-+_{vbar w_lam,l^} tau^pm_{w0,l^} q^{n_pm} varpi'(r_{k'}(mu))``
    times ``c^-_{eps_pm k'}(vbar w_lam)(lam + rho_{k'})``
    times ``c^+_{-eps_-+(k' pm l^')}(vbar w_lam)(lam + rho_{k'})``,
    zero unless ``v(mu) = v(mu_{eps,pm})``.  The character is taken at
    ``vbar(mu)`` forward and at ``vbar(mu_{eps,-})`` backward.  With
    ``literal`` the sign is always ``eps(vbar(mu))`` and the first ``tau``
    factor uses ``vbar(mu)`` alone; the two readings differ only at singular
    ``lam`` in the backward direction.
    """
    R = pair.R
    F = pair.field
    sd = shift_data(pair, eps)
    mu = tuple(mu)
    d = R.decompose(mu)
    lam = d.dominant
    target = shifted_weight_q(pair, mu, eps, sign)
    if R.decompose(target).v != d.v:
        return F.zero()
    lw = QMult.constant(pair, sd.l_wedge)
    triv = R.character("triv")
    G = R.group
    vw = G.mul(d.vbar, d.w_lam)
    if sign > 0:
        n = sd.k_dot_l(k) * _HALF
        c_minus_char, c_plus_char = eps, triv
    else:
        n = -(sd.k_dot_l(k.shifted(sd.l_wedge, -1)) * _HALF)
        c_minus_char, c_plus_char = triv, eps
    if literal or sign > 0:
        s = eps(d.vbar)
    else:
        s = eps(R.decompose(target).vbar)
    kp = pair.dual_values(k)
    kt = pair.dual_values(k.shifted(sd.l_wedge, sign))
    x = tuple(r + l for r, l in zip(pair.rho_dual(k), lam))
    c1 = q_c_function(pair, -1, vw, kp, x, eps=c_minus_char)
    if c1.is_zero():
        return F.zero()
    c2 = q_c_function(pair, 1, vw, kt, x, eps=c_plus_char, negate=True)
    tau_at = d.vbar if literal else vw
    pref = tau_word_mult(pair, lw, tau_at) ** (-sign) * tau_word_mult(pair, lw, G.w0) ** sign
    out = pref * F.q_power(n) * varpi_eval(pair, pair.spectral(mu, k)) * c1 * c2
    return out * s


def q_shift_factor_from_operator(pair: AffinePair, mu: Weight, eps: LinearCharacter, sign: int, k: QMult,
                                 variant: str = "hecke") -> Optional[RatFunc]:
    """Ratio of ``G_pm E_mu(k)`` to ``E_{mu_{eps,pm}}(k pm l^)``; ``None`` if they are not proportional."""
    E = nonsym_E_q(pair, mu, k)
    img = q_nonsym_shift_apply(pair, eps, sign, k, E, variant)
    target = shifted_weight_q(pair, mu, eps, sign)
    Et = nonsym_E_q(pair, target, shifted_mult(pair, eps, k, sign))
    if img.is_zero():
        return pair.field.zero()
    c = img.coeff(target)
    if c == 0:
        return None
    return c if Et.scale(c) == img else None


def q_shift_factor_fixed_weight(pair: AffinePair, mu: Weight, eps: LinearCharacter, sign: int,
                                k: QMult) -> RatFunc:
    """The shift factor of the fixed-weight operator, before simplification.

    ``eps_pm(vbar(mu)) eps_-+(vbar(mu_pm)) tau_{vbar(mu) w_lam,k} tau^-1_{vbar(mu_pm) w_lam_pm,k pm l^}``
    ``tau^pm_{w0,l^} q^{n_pm} varpi'(r_{k' pm l^'}(mu_pm))``
    ``c^-_{eps_pm k'}(vbar(mu) w_lam)(lam + rho_{k'})``
    ``c^+_{-eps_-+(k' pm l^')}(vbar(mu_pm) w_lam_pm)(lam + rho_{k'})``.
    """
    R = pair.R
    F = pair.field
    sd = shift_data(pair, eps)
    mu = tuple(mu)
    d = R.decompose(mu)
    lam = d.dominant
    target = shifted_weight_q(pair, mu, eps, sign)
    dt = R.decompose(target)
    triv = R.character("triv")
    lw = QMult.constant(pair, sd.l_wedge)
    kt = k.shifted(sd.l_wedge, sign)
    if sign > 0:
        s = eps(d.vbar)
        n = sd.k_dot_l(k) * _HALF
        c_minus_char, c_plus_char = eps, triv
    else:
        s = eps(dt.vbar)
        n = -(sd.k_dot_l(k.shifted(sd.l_wedge, -1)) * _HALF)
        c_minus_char, c_plus_char = triv, eps
    G = R.group
    vw = G.mul(d.vbar, d.w_lam)
    vwt = G.mul(dt.vbar, dt.w_lam)
    x = tuple(r + l for r, l in zip(pair.rho_dual(k), lam))
    c1 = q_c_function(pair, -1, vw, pair.dual_values(k), x, eps=c_minus_char)
    if c1.is_zero():
        return F.zero()
    c2 = q_c_function(pair, 1, vwt, pair.dual_values(kt), x, eps=c_plus_char, negate=True)
    pref = tau_word_mult(pair, k, vw) / tau_word_mult(pair, kt, vwt) * tau_word_mult(pair, lw, G.w0) ** sign
    return pref * F.q_power(n) * varpi_eval(pair, pair.spectral(target, kt)) * c1 * c2 * s
