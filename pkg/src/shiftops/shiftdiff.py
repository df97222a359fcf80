"""Shift operators for non-symmetric Heckman-Opdam polynomials.

The central object is the interpolation polynomial ``q`` on ``h x h`` with
``q(x, w x) = pi(x) delta_{e,w}``, written as ``sum_j q_j (x) u_j`` over a
basis ``u_j`` of W-harmonic polynomials.  Substituting Dunkl-Cherednik
operators into both slots gives the projectors ``Q_mu`` and the genuine
shift operators

    G_+ f = sum_j T_{u_j}(k+l) ( Delta^-1 * U_eps ( T_{q_j}(k) f ) )
    G_- f = sum_j T_{u_j}(k-l) ( Delta * U_triv ( T_{q_j}(k) f ) )
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .cherednik import (
    CherednikOperators,
    HPoly,
    Multiplicity,
    c_function,
    eval_hpoly,
    nonsym_E,
    sym_P,
)
from .galg import (
    GAElem,
    ct_pairing,
    exact_divide,
    is_zero,
    plain_symmetrize,
    weyl_denominator,
)
from .weyl import LinearCharacter, RootSystem, Weight, build_root_system


class SingularSteinbergMatrix(ArithmeticError):
    pass


def _symbols(n: int):
    return sympy.symbols(f"x1:{n + 1}")


def _to_hpoly(expr, xs) -> HPoly:
    p = sympy.Poly(sympy.expand(expr), *xs)
    return {tuple(int(e) for e in m): Fraction(str(c)) for m, c in p.terms() if c != 0}


def _from_hpoly(p: HPoly, xs):
    return sum(sympy.Rational(str(c)) * sympy.prod([x ** e for x, e in zip(xs, m)]) for m, c in p.items())


def hpoly_degree(p: HPoly) -> int:
    return max(sum(m) for m in p) if p else -1


def pi_poly(R: RootSystem, xs=None):
    """``prod over a in R0+ of (a^vee, x)`` as a sympy expression."""
    xs = xs or _symbols(R.rank)
    out = sympy.Integer(1)
    for a in R.positive_reduced:
        g = R.gram_dot(R.coroot(a))
        out *= sum(sympy.Rational(str(c)) * x for c, x in zip(g, xs))
    return sympy.expand(out)


@lru_cache(maxsize=None)
def harmonic_basis(label: str, variant: int = 0) -> Tuple[Tuple[Tuple[Tuple[int, ...], Fraction], ...], ...]:
    """A homogeneous basis of the W-harmonic polynomials.

    The harmonics are the span of all partial derivatives of ``pi``.  Variant 0
    takes the reduced row-echelon basis in each degree; variant 1 takes the
    first independent derivatives instead, which gives a different basis of
    the same space (used to check that ``q`` does not depend on the choice).
    Returned as tuples of ``(exponent, coeff)`` pairs for hashability.
    """
    R = build_root_system(label)
    xs = _symbols(R.rank)
    top = pi_poly(R, xs)
    N = len(R.positive_reduced)
    layers = [[top]]
    for _ in range(N):
        nxt = []
        for f in layers[-1]:
            for x in xs:
                d = sympy.expand(sympy.diff(f, x))
                if d != 0:
                    nxt.append(d)
        layers.append(nxt)
    basis = []
    for depth in range(N, -1, -1):
        deg = N - depth
        mons = sorted({m for f in layers[depth] for m in sympy.Poly(f, *xs).monoms()}, reverse=True)
        rows = []
        for f in layers[depth]:
            p = sympy.Poly(f, *xs)
            rows.append([p.coeff_monomial(m) for m in mons])
        M = sympy.Matrix(rows)
        if variant == 0:
            red, _ = M.rref()
            chosen = [red.row(i) for i in range(red.rows) if any(v != 0 for v in red.row(i))]
        else:
            chosen, cur = [], sympy.zeros(0, len(mons))
            for i in range(M.rows):
                trial = cur.col_join(M.row(i))
                if trial.rank() > cur.rank():
                    cur = trial
                    chosen.append(M.row(i) * (i + 2))
        for row in chosen:
            expr = sum(c * sympy.prod([x ** e for x, e in zip(xs, m)]) for c, m in zip(row, mons))
            basis.append(tuple(sorted(_to_hpoly(expr, xs).items())))
    basis.sort(key=lambda b: sum(b[0][0]))
    if len(basis) != len(R.group):
        raise AssertionError("harmonic space has the wrong dimension")
    return tuple(basis)


@dataclass(frozen=True)
class QPoly:
    """``q = sum_j q_j (x) u_j``."""

    system: str
    pairs: Tuple[Tuple[HPoly, HPoly], ...]

    def tensor(self) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]:
        """Coefficients of ``q`` in the monomial basis of both slots."""
        out: Dict = {}
        for qj, uj in self.pairs:
            for a, c in qj.items():
                for b, d in uj.items():
                    out[a, b] = out.get((a, b), 0) + c * d
        return {k: v for k, v in out.items() if v}

    def __call__(self, x: Sequence, y: Sequence):
        return sum((eval_hpoly(qj, x) * eval_hpoly(uj, y) for qj, uj in self.pairs), 0)


@lru_cache(maxsize=None)
def build_q_poly(label: str, variant: int = 0) -> QPoly:
    """Solve ``sum_j q_j(x) u_j(w x) = pi(x) delta_{e,w}`` over Q."""
    return q_poly_from_basis(build_root_system(label), [dict(b) for b in harmonic_basis(label, variant)])


def q_poly_from_basis(R: RootSystem, basis: Sequence[HPoly]) -> QPoly:
    """The interpolation polynomial expressed against a given harmonic basis."""
    xs = _symbols(R.rank)
    N = len(R.positive_reduced)
    if len(basis) != len(R.group):
        raise SingularSteinbergMatrix("basis size differs from |W|")
    pi = pi_poly(R, xs)
    unknowns = []
    q_exprs = []
    for j, u in enumerate(basis):
        d = N - hpoly_degree(u)
        if d < 0:
            raise SingularSteinbergMatrix("harmonic degree exceeds |R0+|")
        expr = 0
        for mono in _monomials(R.rank, d):
            c = sympy.Symbol(f"c_{j}_{'_'.join(map(str, mono))}")
            unknowns.append(c)
            expr += c * sympy.prod([x ** e for x, e in zip(xs, mono)])
        q_exprs.append(expr)
    eqs = []
    for w in R.group.elements:
        wx = [sum(int(w.matrix[i][j]) * xs[j] for j in range(R.rank)) for i in range(R.rank)]
        total = 0
        for qe, u in zip(q_exprs, basis):
            total += qe * _from_hpoly(u, xs).subs(dict(zip(xs, wx)), simultaneous=True)
        if w == R.group.identity:
            total -= pi
        eqs.extend(sympy.Poly(sympy.expand(total), *xs).coeffs())
    sol = sympy.solve(eqs, unknowns, dict=True)
    if not sol:
        raise SingularSteinbergMatrix(f"no interpolation polynomial for {R.label}")
    sol = sol[0]
    if any(c not in sol for c in unknowns):
        raise SingularSteinbergMatrix("interpolation polynomial not unique")
    pairs = []
    for qe, u in zip(q_exprs, basis):
        qp = _to_hpoly(qe.subs(sol), xs) if qe != 0 else {}
        pairs.append((qp, dict(u)))
    return QPoly(R.label, tuple(pairs))


def check_q_poly(R: RootSystem, qp: QPoly) -> bool:
    """Symbolic check of ``q(x, w x) = pi(x) delta_{e,w}``."""
    xs = _symbols(R.rank)
    pi = pi_poly(R, xs)
    for w in R.group.elements:
        wx = [sum(int(w.matrix[i][j]) * xs[j] for j in range(R.rank)) for i in range(R.rank)]
        total = sum((_from_hpoly(qj, xs) * _from_hpoly(uj, xs).subs(dict(zip(xs, wx)), simultaneous=True)
                     for qj, uj in qp.pairs), sympy.Integer(0))
        target = pi if w == R.group.identity else 0
        if sympy.expand(total - target) != 0:
            return False
    return True


def _monomials(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for i in range(d, -1, -1):
        for rest in _monomials(n - 1, d - i):
            yield (i,) + rest


# ---------------------------------------------------------------------------
# operators


def _poly_many(ops: CherednikOperators, polys: Sequence[HPoly], f: GAElem) -> List[GAElem]:
    """``[T_p f for p in polys]`` sharing the powers of the coordinate operators."""
    memo: Dict[Tuple[int, ...], GAElem] = {(0,) * ops.R.rank: f}

    def power(a):
        if a in memo:
            return memo[a]
        i = next(j for j, x in enumerate(a) if x)
        prev = tuple(x - (j == i) for j, x in enumerate(a))
        memo[a] = ops.coord(i, power(prev))
        return memo[a]

    out = []
    for p in polys:
        acc = GAElem()
        for a in sorted(p):
            acc = acc + power(a).scale(p[a])
        out.append(acc)
    return out


def projector_Q(R: RootSystem, mu: Weight, m: Multiplicity, k: Multiplicity, f: GAElem) -> GAElem:
    """``Q_mu(m, k) f = sum_j q_j(r_m(mu)) T_{u_j}(k) f``."""
    qp = build_q_poly(R.label)
    r = R.spectral_vector(mu, m)
    ops = CherednikOperators(R, k)
    images = _poly_many(ops, [u for _, u in qp.pairs], f)
    out = GAElem()
    for (qj, _), g in zip(qp.pairs, images):
        c = eval_hpoly(qj, r)
        if not is_zero(c):
            out = out + g.scale(c)
    return out


_SHIFT_CACHE: Dict[tuple, GAElem] = {}


def nonsym_shift_apply(R: RootSystem, eps: LinearCharacter, sign: int, k: Multiplicity,
                       f: GAElem, variant: int = 0) -> GAElem:
    """The genuine operator ``G^(eps)_{sign}(k)`` applied to ``f``, assembled from cached monomial images."""
    base = (R.label, eps.signs, sign, k.key(), variant)
    out = GAElem()
    for lam, c in f.terms.items():
        key = base + (lam,)
        img = _SHIFT_CACHE.get(key)
        if img is None:
            img = _shift_raw(R, eps, sign, k, GAElem.monomial(lam, 1), variant)
            _SHIFT_CACHE[key] = img
        out = out + img.scale(c)
    return out


def _shift_raw(R: RootSystem, eps: LinearCharacter, sign: int, k: Multiplicity,
               f: GAElem, variant: int) -> GAElem:
    qp = build_q_poly(R.label, variant)
    l = eps.l
    ops = CherednikOperators(R, k)
    target = CherednikOperators(R, k.shifted(l, sign))
    delta = weyl_denominator(R, eps)
    sym_char = eps if sign > 0 else R.character("triv")
    firsts = _poly_many(ops, [q for q, _ in qp.pairs], f)
    out = GAElem()
    for (_, u), g in zip(qp.pairs, firsts):
        if g.is_zero():
            continue
        s = plain_symmetrize(R, sym_char, g)
        if s.is_zero():
            continue
        h = exact_divide(s, delta) if sign > 0 else delta * s
        out = out + target.poly(u, h)
    return out


def shift_factor(R: RootSystem, mu: Weight, eps: LinearCharacter, sign: int, k: Multiplicity):
    """Shift factor in c-function form:

    ``sgn pi(r_k(mu)) c^-_{eps_sign k}(w)(lam + rho_k) c^+_{-eps_{-sign}(k + sign l)}(w)(lam + rho_k)``
    with ``w = vbar(mu) w_lam``, ``eps_+ = eps`` and ``eps_- = triv``.  The sign
    is ``eps(vbar(mu))`` forward and ``eps(vbar(mu_{eps,-}))`` backward; the two
    differ by ``eps(w_lam)``, which is nontrivial when ``lam`` is singular.
    """
    d = R.decompose(mu)
    w = R.group.mul(d.vbar, d.w_lam)
    x = tuple(a + b for a, b in zip(d.dominant, R.rho(k)))
    triv = R.character("triv")
    e_plus, e_minus = (eps, triv) if sign > 0 else (triv, eps)
    pi_val = _pi_at(R, R.spectral_vector(mu, k))
    c1 = c_function(R, -1, w, k.signed(e_plus), x)
    c2 = c_function(R, +1, w, k.shifted(eps.l, sign).signed(e_minus).negated(), x)
    if sign > 0:
        sgn = eps(d.vbar)
    else:
        sgn = eps(R.decompose(shifted_weight(R, mu, eps, -1)).vbar)
    return sgn * pi_val * c1 * c2


def shift_factor_product(R: RootSystem, mu: Weight, eps: LinearCharacter, sign: int, k: Multiplicity):
    """Shift factor as a product of linear factors (no denominators)."""
    d = R.decompose(mu)
    w = R.group.mul(d.vbar, d.w_lam)
    x = tuple(a + b for a, b in zip(d.dominant, R.rho(k)))
    r = R.spectral_vector(mu, k)
    out = 1
    for a in R.positive_reduced:
        k0 = k.k0(a)
        if eps.l_of(a) == 1:
            delta = 1 if not R.is_positive(w(a)) else 0
            out = out * (R.pairing(x, a) - sign * k0 - 1 + delta)
        else:
            out = out * (R.pairing(r, a) - k0)
    return out


def _pi_at(R: RootSystem, x: Sequence):
    out = 1
    for a in R.positive_reduced:
        out = out * R.pairing(x, a)
    return out


def shifted_weight(R: RootSystem, mu: Weight, eps: LinearCharacter, sign: int) -> Weight:
    return R.mu_shifted(mu, eps.rho_l, sign)


# ---------------------------------------------------------------------------
# symmetric shift operator


def sym_shift_apply(R: RootSystem, eps: LinearCharacter, k: Multiplicity, f: GAElem) -> GAElem:
    """``Delta_eps^-1 prod_{l(a)=1} (T_{a^vee}(k) + k0(a)) f`` by exact division."""
    ops = CherednikOperators(R, k)
    g = f
    for a in R.positive_reduced:
        if eps.l_of(a) == 1:
            g = ops.xi(R.coroot(a), g) + g.scale(k.k0(a))
    return exact_divide(g, weyl_denominator(R, eps))


def sym_shift_factor(R: RootSystem, lam: Weight, eps: LinearCharacter, k: Multiplicity):
    """``prod_{a in R0+, l(a)=1} ((lam + rho_k, a^vee) - k0(a))``."""
    x = tuple(a + b for a, b in zip(lam, R.rho(k)))
    out = 1
    for a in R.positive_reduced:
        if eps.l_of(a) == 1:
            out = out * (R.pairing(x, a) - k.k0(a))
    return out


# ---------------------------------------------------------------------------
# norms and adjointness at integer multiplicities


def norm_sq(R: RootSystem, mu: Weight, k: Multiplicity) -> Fraction:
    E = nonsym_E(R, mu, k)
    return ct_pairing(R, E, E, k)


def norm_ratio(R: RootSystem, mu: Weight, eps: LinearCharacter, k: Multiplicity):
    """``H_-(mu, k) / H_+(mu_{eps,-}, k - l)``."""
    nu = shifted_weight(R, mu, eps, -1)
    km = k.shifted(eps.l, -1)
    return shift_factor_product(R, mu, eps, -1, k) / shift_factor_product(R, nu, eps, +1, km)


def adjoint_check(R: RootSystem, eps: LinearCharacter, k: Multiplicity, weights: Sequence[Weight]):
    """``(G_+(k) e^a, e^b)_{k+l} == (e^a, G_-(k+l) e^b)_k`` on all pairs; returns failures."""
    kp = k.shifted(eps.l, +1)
    fwd = {a: nonsym_shift_apply(R, eps, +1, k, GAElem.monomial(a, Fraction(1))) for a in weights}
    bwd = {b: nonsym_shift_apply(R, eps, -1, kp, GAElem.monomial(b, Fraction(1))) for b in weights}
    bad = []
    for a in weights:
        for b in weights:
            lhs = ct_pairing(R, fwd[a], GAElem.monomial(b, Fraction(1)), kp)
            rhs = ct_pairing(R, GAElem.monomial(a, Fraction(1)), bwd[b], k)
            if lhs != rhs:
                bad.append((a, b, lhs, rhs))
    return bad


# ---------------------------------------------------------------------------
# explicit rank-one operators on BC1 (x = e^{eps1}, d x^m = m x^m, r x^m = x^-m)


def _bc1_parts(f: GAElem):
    x = GAElem.monomial((1,), Fraction(1))
    xi = GAElem.monomial((-1,), Fraction(1))
    df = GAElem._raw({m: c * m[0] for m, c in f.terms.items() if m[0]})
    rf = GAElem._raw({(-m[0],): c for m, c in f.terms.items()})
    return x, xi, df, rf


def bc1_explicit_forward(f: GAElem) -> GAElem:
    """``(x - 1/x)^-1 d f - x (f - r f) / (x - 1/x)^2``."""
    x, xi, df, rf = _bc1_parts(f)
    d = x - xi
    return exact_divide(d * df - x * (f - rf), d * d)


def bc1_explicit_backward(k: Multiplicity, f: GAElem) -> GAElem:
    """``d f + (k1 + 2 k2 - 1)(x + 1/x) f + 2 k1 f + f/x - x r f``."""
    x, xi, df, rf = _bc1_parts(f)
    k1, k2 = k
    return df + (x + xi) * f.scale(k1 + 2 * k2 - 1) + f.scale(2 * k1) + xi * f - x * rf


def bc1_explicit_backward_corrected(k: Multiplicity, f: GAElem) -> GAElem:
    """As :func:`bc1_explicit_backward` with ``d f`` replaced by ``(x - 1/x) d f``."""
    x, xi, df, rf = _bc1_parts(f)
    k1, k2 = k
    return (x - xi) * df + (x + xi) * f.scale(k1 + 2 * k2 - 1) + f.scale(2 * k1) + xi * f - x * rf


def bc1_golden_scalars(k: Multiplicity, bound: int = 6, corrected: bool = False):
    """Ratios of the constructed to the explicit operators on ``e^m``, ``|m| <= bound``.

    Returns ``{direction: set of ratios}``; agreement up to one global scalar
    means each set has one element besides ``"any"`` (both sides zero).
    ``None`` in a set marks a monomial on which the two are not proportional.
    """
    R = build_root_system("BC1")
    eps = R.character("sign")
    backward = bc1_explicit_backward_corrected if corrected else bc1_explicit_backward
    out = {}
    for sign, explicit in ((1, bc1_explicit_forward), (-1, lambda f: backward(k, f))):
        ratios = set()
        for m in range(-bound, bound + 1):
            f = GAElem.monomial((m,), Fraction(1))
            ours = nonsym_shift_apply(R, eps, sign, k, f)
            theirs = explicit(f)
            ratios.add(_ratio(ours, theirs))
        out["forward" if sign > 0 else "backward"] = ratios
    return out


def _ratio(a: GAElem, b: GAElem):
    """The scalar ``c`` with ``a == c b``; ``None`` when no such scalar exists."""
    if a.is_zero() and b.is_zero():
        return "any"
    if a.is_zero() or b.is_zero() or a.terms.keys() != b.terms.keys():
        return None
    key = next(iter(a.terms))
    c = a.terms[key] / b.terms[key]
    return c if a == b.scale(c) else None
