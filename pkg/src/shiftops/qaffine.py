"""Affine root-system pairs, Demazure-Lusztig operators and Cherednik Y-operators.

Weights of ``L`` and ``L'`` are integer tuples in fixed lattice bases.  The
coefficient field is :class:`~shiftops.scalars.QField`; every ``tau`` and
every ``q``-power is a Laurent monomial in ``qs = q^(1/2e)`` and
``u_i = q^(k_i/2)``, so no series arithmetic enters the operator layer.

Conventions (all pinned by tests):

* ``e^lam`` is the function ``x -> q^<lam, x>``; an affine map ``w`` acts by
  ``(w f)(x) = f(w^-1 x)``, so ``(A, b) e^lam = q^(-<A lam, b>) e^(A lam)``.
* ``T_i = tau_i + c_{a_i,k}(X)(s_i - 1)`` with ``X = e^{a_i}`` and
  ``c_{a,k} = (1 - tau tau~ X)(1 + tau tau~^-1 X) / (tau (1 - X^2))``.
* ``Y^lam' = T(t(lam'))`` for dominant ``lam'``; other weights are handled
  through ``Y^(mu' - nu') = Y^mu' (Y^nu')^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cherednik import PoleAtEvaluation, ProbeNotSeparating, ResonantSpectrum
from .galg import GAElem, NonIntegerMultiplicity, is_zero, plain_symmetrize
from .scalars import QExponent, QField, RatFunc
from .weyl import LinearCharacter, RootSystem, Weight, WeylElt, build_root_system, mat_vec


class UnsupportedCase(ValueError):
    pass


class WeightNotInLattice(ValueError):
    pass


class NonCancellingDenominator(ArithmeticError):
    pass


Vec = Tuple[Fraction, ...]


def _mat_vec(m, v):
    return tuple(sum((m[i][j] * v[j] for j in range(len(v))), Fraction(0)) for i in range(len(m)))


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)) for i in range(n))


def _identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _inv2(m):
    """Inverse of a 1x1 or 2x2 rational matrix."""
    if len(m) == 1:
        return ((1 / Fraction(m[0][0]),),)
    (a, b), (c, d) = m
    det = Fraction(a * d - b * c)
    return ((d / det, -b / det), (-c / det, a / det))


def _as_int(v) -> Weight:
    if any(Fraction(x).denominator != 1 for x in v):
        raise WeightNotInLattice(f"{v} is not integral")
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class AffineRoot:
    """``x -> <grad, x> + const``; ``grad`` in ``L`` coordinates."""

    grad: Weight
    const: Fraction


@dataclass(frozen=True)
class _PairData:
    case: int
    finite: str
    e: int
    nparams: int
    gram: Tuple[Tuple[Fraction, ...], ...]
    lp_basis: Tuple[Tuple[Fraction, ...], ...]
    a0: AffineRoot
    simple_params: Tuple[Tuple[int, Optional[int]], ...]
    dual: Tuple[Tuple[Fraction, ...], ...]
    dual_simple_params: Tuple[Tuple[int, Optional[int]], ...]
    rho_terms: Tuple[Tuple[Weight, int, Fraction], ...]


def _F(*rows):
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


_HALF = Fraction(1, 2)

_PAIRS = {
    # S = S(R), S' = S(R^vee), L = P, L' = P^vee; omega^vee = omega since (a, a) = 2.
    "case1:A1": _PairData(
        1, "A1", 2, 1, _F((_HALF,)), _F((1,)), AffineRoot((-2,), Fraction(1)),
        ((0, None), (0, None)), _F((1,)), ((0, None),), (((2,), 0, _HALF),)),
    "case1:A2": _PairData(
        1, "A2", 3, 1, _F((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3))), _F((1, 0), (0, 1)),
        AffineRoot((-1, -1), Fraction(1)), ((0, None), (0, None), (0, None)), _F((1,)), ((0, None),),
        (((2, -1), 0, _HALF), ((-1, 2), 0, _HALF), ((1, 1), 0, _HALF))),
    # (C1^vee, C1): a1 = eps1 (k1), 2a1 (k2), a0 = 1/2 - eps1 (k3), 2a0 (k4); L = L' = Z eps1.
    "case3:C1vC1": _PairData(
        3, "BC1", 1, 4, _F((1,)), _F((1,)), AffineRoot((-1,), _HALF),
        ((2, 3), (0, 1)),
        _F((_HALF, _HALF, _HALF, _HALF), (_HALF, _HALF, -_HALF, -_HALF),
           (_HALF, -_HALF, _HALF, -_HALF), (_HALF, -_HALF, -_HALF, _HALF)),
        ((0, 1),), (((1,), 0, Fraction(1)),)),
}

PAIR_LABELS = tuple(_PAIRS)


class AffinePair:
    """One supported pair ``(S, S')`` with its lattices and parameter bookkeeping."""

    def __init__(self, label: str):
        if label not in _PAIRS:
            raise UnsupportedCase(f"unsupported affine pair {label!r}; choose from {', '.join(_PAIRS)}")
        d = _PAIRS[label]
        self.label = label
        self.case = d.case
        self.data = d
        self.R: RootSystem = build_root_system(d.finite)
        self.rank = self.R.rank
        self.e = d.e
        self.nparams = d.nparams
        self.field = QField(d.e, d.nparams)
        self.gram = d.gram
        self.lp_basis = d.lp_basis
        self.lp_inv = _inv2(d.lp_basis)
        # <L_i, L'_j>
        self.pair_matrix = tuple(
            tuple(sum((d.gram[i][m] * d.lp_basis[m][j] for m in range(self.rank)), Fraction(0))
                  for j in range(self.rank)) for i in range(self.rank))
        # affine simple roots: index 0 is a0, index i >= 1 the finite simple roots of S
        finite_simple = self.R.indivisible_simple
        self.simple: Tuple[AffineRoot, ...] = (d.a0,) + tuple(AffineRoot(a, Fraction(0)) for a in finite_simple)
        self.simple_params = d.simple_params
        self.doubled = tuple(p[1] is not None for p in d.simple_params)
        self.W0 = self.R.group
        for i, a in enumerate(finite_simple):
            g = self.R.simple[i]
            if not all(x * a[0] == y * g[0] for x, y in zip(g, a)):
                raise AssertionError("affine and finite simple roots are ordered differently")
        self._check_e()

    def _check_e(self):
        vals = {x for row in self.pair_matrix for x in row}
        den = 1
        for v in vals:
            den = den * v.denominator // _gcd(den, v.denominator)
        if den != self.e:
            raise AssertionError(f"<L, L'> has denominator {den}, expected {self.e}")

    def __repr__(self):
        return f"AffinePair({self.label!r})"

    # geometry ------------------------------------------------------------
    def inner(self, a: Sequence, b: Sequence) -> Fraction:
        """Inner product of two vectors in ``L`` coordinates."""
        return sum((a[i] * self.gram[i][j] * b[j] for i in range(self.rank) for j in range(self.rank)), Fraction(0))

    def pairing(self, lam: Sequence, lamp: Sequence):
        """``<lam, lam'>`` for ``lam`` in ``L`` coordinates (entries may be QExponents)."""
        total = None
        for i in range(self.rank):
            for j in range(self.rank):
                c = self.pair_matrix[i][j] * lamp[j]
                if c:
                    t = lam[i] * c
                    total = t if total is None else total + t
        return total if total is not None else 0

    def coroot_pairing(self, lam: Sequence, grad: Sequence) -> Fraction:
        return 2 * self.inner(lam, grad) / self.inner(grad, grad)

    def l_to_lp(self, v: Sequence) -> Vec:
        return _mat_vec(self.lp_inv, [Fraction(x) for x in v])

    def lp_to_l(self, v: Sequence) -> Vec:
        return _mat_vec(self.lp_basis, [Fraction(x) for x in v])

    def w_on_lp(self, w: WeylElt):
        m = tuple(tuple(Fraction(x) for x in row) for row in w.matrix)
        return _mat_mul(self.lp_inv, _mat_mul(m, self.lp_basis))

    def act_lp(self, w: WeylElt, lamp: Sequence) -> Weight:
        return _as_int(_mat_vec(self.w_on_lp(w), [Fraction(x) for x in lamp]))

    def is_positive_affine(self, a: AffineRoot) -> bool:
        if a.const != 0:
            return a.const > 0
        return self.R.is_positive(a.grad)

    def is_dominant_lp(self, lamp: Sequence) -> bool:
        return all(self.pairing(a, lamp) >= 0 for a in self.R.indivisible_simple)

    def fundamental_coweights(self) -> List[Weight]:
        """Basis of ``L'`` dual to the finite simple roots (up to the lattice scale)."""
        out = []
        for i in range(self.rank):
            v = tuple(int(i == j) for j in range(self.rank))
            out.append(v)
        return out

    # parameters ------------------------------------------------------------
    def dual_values(self, k: "QMult") -> Tuple[QExponent, ...]:
        """``k'`` as exponents, via the pair's linear duality map."""
        out = []
        for row in self.data.dual:
            acc = QExponent.const(0, self.nparams)
            for c, v in zip(row, k):
                if c:
                    acc = acc + v * c
            out.append(acc)
        return tuple(out)

    def rho_dual(self, k: "QMult") -> Tuple[QExponent, ...]:
        """``rho_{k'}`` in ``L`` coordinates."""
        kp = self.dual_values(k)
        acc = [QExponent.const(0, self.nparams) for _ in range(self.rank)]
        for vec, idx, coeff in self.data.rho_terms:
            for i, x in enumerate(vec):
                if x:
                    acc[i] = acc[i] + kp[idx] * (coeff * x)
        return tuple(acc)

    def spectral(self, mu: Weight, k: "QMult") -> Tuple[QExponent, ...]:
        """``r_{k'}(mu) = mu - v(mu)^-1 rho_{k'}``."""
        rho = self.rho_dual(k)
        v = self.R.decompose(mu).v
        vinv = self.W0.inverse(v)
        m = vinv.matrix
        out = []
        for i in range(self.rank):
            acc = QExponent.const(mu[i], self.nparams)
            for j in range(self.rank):
                if m[i][j]:
                    acc = acc - rho[j] * m[i][j]
            out.append(acc)
        return tuple(out)

    def q_eval(self, lamp: Sequence, x: Sequence) -> RatFunc:
        """``e^lam'`` evaluated at ``x``: ``q^<lam', x>``."""
        ex = self.pairing(x, lamp)
        if not isinstance(ex, QExponent):
            ex = QExponent.const(ex, self.nparams)
        return self.field.q_power(ex)

    def eval_lp(self, f: GAElem, x: Sequence):
        """Evaluate an element of ``A'`` at ``x``."""
        total = self.field.zero()
        for lamp, c in f.terms.items():
            total = total + c * self.q_eval(lamp, x)
        return total

    # affine Weyl group -----------------------------------------------------
    def simple_reflection(self, i: int) -> "AffElt":
        a = self.simple[i]
        n = self.rank
        mat = []
        for r in range(n):
            row = []
            for c in range(n):
                e_c = tuple(Fraction(int(j == c)) for j in range(n))
                img = e_c[r] - self.coroot_pairing(e_c, a.grad) * a.grad[r]
                row.append(Fraction(img))
            mat.append(tuple(row))
        mat = tuple(mat)
        gg = self.inner(a.grad, a.grad)
        corootl = tuple(Fraction(2 * x) / gg for x in a.grad)
        b = _as_int(tuple(-a.const * x for x in self.l_to_lp(corootl)))
        return AffElt(self, mat, b)

    def translation(self, lamp: Weight) -> "AffElt":
        return AffElt(self, _identity(self.rank), tuple(lamp))

    @lru_cache(maxsize=None)
    def translation_word(self, lamp: Weight) -> Tuple["AffElt", Tuple[int, ...]]:
        """``t(lam') = u s_{i_m} ... s_{i_1}`` with ``u`` of length zero; returns ``(u, (i_1, ..., i_m))``."""
        w = self.translation(lamp)
        word = []
        refl = [self.simple_reflection(i) for i in range(self.rank + 1)]
        while True:
            for i in range(self.rank + 1):
                if not self.is_positive_affine(w.act_root(self.simple[i])):
                    w = w * refl[i]
                    word.append(i)
                    break
            else:
                break
        return w, tuple(word)

    def omega_group(self) -> List["AffElt"]:
        """Length-zero elements, one per class of ``L' / Q^vee``."""
        seen = {}
        n = self.rank
        rng = range(-2, 3)
        from itertools import product as _p

        for lamp in _p(rng, repeat=n):
            u, _ = self.translation_word(tuple(lamp))
            seen[(u.A, u.b)] = u
        return list(seen.values())


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class AffElt:
    """``x -> A x + b`` with ``A`` on ``L`` coordinates and ``b`` in ``L'``."""

    __slots__ = ("pair", "A", "b")

    def __init__(self, pair: AffinePair, A, b):
        self.pair = pair
        self.A = tuple(tuple(Fraction(x) for x in row) for row in A)
        self.b = tuple(int(x) for x in b)

    def __mul__(self, other: "AffElt") -> "AffElt":
        P = self.pair
        Ap = _mat_mul(P.lp_inv, _mat_mul(self.A, P.lp_basis))
        b = tuple(x + y for x, y in zip(_as_int(_mat_vec(Ap, [Fraction(v) for v in other.b])), self.b))
        return AffElt(P, _mat_mul(self.A, other.A), b)

    def act_root(self, a: AffineRoot) -> AffineRoot:
        g = _as_int(_mat_vec(self.A, [Fraction(x) for x in a.grad]))
        return AffineRoot(g, a.const - self.pair.pairing(g, self.b))

    def act_monomial(self, lam: Weight) -> Tuple[Weight, Fraction]:
        """``w e^lam = q^c e^{lam2}``; returns ``(lam2, c)``."""
        g = _as_int(_mat_vec(self.A, [Fraction(x) for x in lam]))
        return g, -self.pair.pairing(g, self.b)

    def is_identity(self) -> bool:
        return self.A == _identity(self.pair.rank) and not any(self.b)

    def __repr__(self):
        return f"AffElt(A={self.A}, b={self.b})"


@lru_cache(maxsize=None)
def build_affine_pair(label: str) -> AffinePair:
    return AffinePair(label)


# ---------------------------------------------------------------------------
# multiplicities


class QMult(tuple):
    """Multiplicity values per parameter slot, as exponents ``pure + sum c_i k_i``."""

    def __new__(cls, pair: AffinePair, values: Sequence[QExponent]):
        obj = super().__new__(cls, tuple(values))
        obj.pair = pair
        return obj

    def __reduce__(self):
        return (_rebuild_qmult, (self.pair.label, tuple(self)))

    @staticmethod
    def symbolic(pair: AffinePair) -> "QMult":
        return QMult(pair, [QExponent.param(i, pair.nparams) for i in range(pair.nparams)])

    @staticmethod
    def constant(pair: AffinePair, values: Sequence) -> "QMult":
        return QMult(pair, [QExponent.const(v, pair.nparams) for v in values])

    def shifted(self, l: Sequence, sign: int = 1) -> "QMult":
        return QMult(self.pair, [v + Fraction(sign * x) for v, x in zip(self, l)])

    def negated(self) -> "QMult":
        return QMult(self.pair, [-v for v in self])

    def specialize(self, values: Sequence) -> "QMult":
        """Substitute rational values for the symbolic ``k_i``."""
        out = []
        for v in self:
            out.append(QExponent.const(v.pure + sum((c * Fraction(x) for c, x in zip(v.coeffs, values)), Fraction(0)),
                                       self.pair.nparams))
        return QMult(self.pair, out)

    def is_constant(self) -> bool:
        return all(not any(v.coeffs) for v in self)

    def integer_values(self) -> Tuple[int, ...]:
        out = []
        for v in self:
            if any(v.coeffs) or v.pure.denominator != 1 or v.pure < 0:
                raise NonIntegerMultiplicity(f"multiplicity {v} is not a nonnegative integer")
            out.append(int(v.pure))
        return tuple(out)

    def key(self):
        return (self.pair.label, tuple((v.pure, v.coeffs) for v in self))

    def dot(self, l: Sequence) -> QExponent:
        acc = QExponent.const(0, self.pair.nparams)
        for v, x in zip(self, l):
            if x:
                acc = acc + v * x
        return acc

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self) + ")"


def _rebuild_qmult(label, values):
    return QMult(build_affine_pair(label), values)


def parse_qmult(pair: AffinePair, text: Optional[str]) -> QMult:
    """``None`` or ``"symbolic"`` gives symbolic parameters; otherwise comma-separated rationals."""
    if text is None or text.strip() in ("", "symbolic"):
        return QMult.symbolic(pair)
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != pair.nparams:
        raise ValueError(f"{pair.label} needs {pair.nparams} multiplicity values")
    return QMult.constant(pair, [Fraction(p) for p in parts])


def simple_k(pair: AffinePair, k: QMult, i: int) -> Tuple[QExponent, QExponent]:
    """``(k(a_i), k(2 a_i))`` with ``k(2a) = 0`` when ``2a`` is not a root."""
    ia, i2 = pair.simple_params[i]
    z = QExponent.const(0, pair.nparams)
    return k[ia], (k[i2] if i2 is not None else z)


def tau_simple(pair: AffinePair, k: QMult, i: int) -> RatFunc:
    ka, k2 = simple_k(pair, k, i)
    return pair.field.q_power((ka + k2) * _HALF)


# ---------------------------------------------------------------------------
# operators


class QOperators:
    """Demazure-Lusztig and Cherednik operators at one multiplicity, with monomial caches."""

    _cache: Dict[tuple, "QOperators"] = {}

    def __new__(cls, pair: AffinePair, k: QMult):
        key = k.key()
        if key in cls._cache:
            return cls._cache[key]
        self = object.__new__(cls)
        self.pair = pair
        self.k = k
        self.F = pair.field
        self._T: Dict[Tuple[int, Weight], GAElem] = {}
        self._Y: Dict[Tuple[Weight, Weight], GAElem] = {}
        self.tau = [tau_simple(pair, k, i) for i in range(pair.rank + 1)]
        self.tau_inv = [t.inverse() for t in self.tau]
        cls._cache[key] = self
        return self

    # T_i -------------------------------------------------------------------
    def _x_power(self, i: int, j: int) -> GAElem:
        a = self.pair.simple[i]
        lam = tuple(j * x for x in a.grad)
        return GAElem._raw({lam: self.F.q_power(QExponent.const(a.const * j, self.pair.nparams))})

    def T_monomial(self, i: int, lam: Weight) -> GAElem:
        key = (i, lam)
        if key in self._T:
            return self._T[key]
        P = self.pair
        a = P.simple[i]
        m = P.coroot_pairing(lam, a.grad)
        if m.denominator != 1:
            raise WeightNotInLattice("coroot pairing is not integral")
        m = int(m)
        tau, tinv = self.tau[i], self.tau_inv[i]
        out = GAElem._raw({lam: tau})
        if m:
            ka, k2 = simple_k(P, self.k, i)
            if P.doubled[i]:
                if m % 2:
                    raise WeightNotInLattice("odd pairing with a doubled root")
                step, mm = 2, m // 2
                numer = GAElem._raw({(0,) * P.rank: self.F.one()})
                numer = numer - self._x_power(i, 1).scale(self.F.q_power(ka))
                numer = numer * (GAElem._raw({(0,) * P.rank: self.F.one()}) + self._x_power(i, 1).scale(self.F.q_power(k2)))
            else:
                step, mm = 1, m
                numer = GAElem._raw({(0,) * P.rank: self.F.one()}) - self._x_power(i, 1).scale(tau * tau)
            if mm > 0:
                geom = GAElem._raw({})
                for j in range(1, mm + 1):
                    geom = geom + self._x_power(i, -step * j)
            else:
                geom = GAElem._raw({})
                for j in range(0, -mm):
                    geom = geom - self._x_power(i, step * j)
            out = out + (numer * geom).shift(lam).scale(tinv)
        self._T[key] = out
        return out

    def T(self, i: int, f: GAElem) -> GAElem:
        out = GAElem()
        for lam, c in f.terms.items():
            out = out + self.T_monomial(i, lam).scale(c)
        return out

    def T_inv(self, i: int, f: GAElem) -> GAElem:
        """``T_i^-1 = T_i - tau_i + tau_i^-1``."""
        return self.T(i, f) - f.scale(self.tau[i] - self.tau_inv[i])

    def act(self, w: AffElt, f: GAElem) -> GAElem:
        out: Dict[Weight, object] = {}
        for lam, c in f.terms.items():
            lam2, ex = w.act_monomial(lam)
            out[lam2] = c * self.F.q_power(QExponent.const(ex, self.pair.nparams))
        return GAElem(out)

    def act_inverse(self, w: AffElt, f: GAElem) -> GAElem:
        """Inverse of a length-zero element, found by matching on monomials."""
        inv = _affine_inverse(w)
        return self.act(inv, f)

    # Y ---------------------------------------------------------------------
    def _Y_dominant_monomial(self, lamp: Weight, lam: Weight) -> GAElem:
        key = (lamp, lam)
        if key in self._Y:
            return self._Y[key]
        u, word = self.pair.translation_word(lamp)
        f = GAElem.monomial(lam, self.F.one())
        for i in word:
            f = self.T(i, f)
        f = self.act(u, f)
        self._Y[key] = f
        return f

    def Y_dominant(self, lamp: Weight, f: GAElem) -> GAElem:
        out = GAElem()
        for lam, c in f.terms.items():
            out = out + self._Y_dominant_monomial(lamp, lam).scale(c)
        return out

    def Y_dominant_inverse(self, lamp: Weight, f: GAElem) -> GAElem:
        u, word = self.pair.translation_word(lamp)
        f = self.act_inverse(u, f)
        for i in reversed(word):
            f = self.T_inv(i, f)
        return f

    def Y(self, lamp: Sequence, f: GAElem) -> GAElem:
        """``Y^lam'`` for any ``lam'`` in ``L'``."""
        lamp = tuple(int(x) for x in lamp)
        if self.pair.is_dominant_lp(lamp):
            return self.Y_dominant(lamp, f)
        shift = _dominating_shift(self.pair, lamp)
        mu = tuple(a + b for a, b in zip(lamp, shift))
        return self.Y_dominant(mu, self.Y_dominant_inverse(shift, f))

    def Y_poly(self, fp: GAElem, f: GAElem) -> GAElem:
        """``Y^{f'}`` for ``f'`` in ``A'``."""
        out = GAElem()
        for lamp, c in sorted(fp.terms.items()):
            out = out + self.Y(lamp, f).scale(c)
        return out


def _affine_inverse(w: AffElt) -> AffElt:
    P = w.pair
    Ainv = _inv2(w.A)
    Ap = _mat_mul(P.lp_inv, _mat_mul(Ainv, P.lp_basis))
    b = _as_int(tuple(-x for x in _mat_vec(Ap, [Fraction(v) for v in w.b])))
    return AffElt(P, Ainv, b)


def _dominating_shift(pair: AffinePair, lamp: Weight) -> Weight:
    """A dominant ``nu'`` with ``lam' + nu'`` dominant."""
    basis = pair.fundamental_coweights()
    rho = tuple(sum(b[i] for b in basis) for i in range(pair.rank))
    n = 1
    while True:
        nu = tuple(n * x for x in rho)
        if pair.is_dominant_lp(nu) and pair.is_dominant_lp(tuple(a + b for a, b in zip(lamp, nu))):
            return nu
        n += 1


def dl_operator(pair: AffinePair, i: int, k: QMult, f: GAElem) -> GAElem:
    return QOperators(pair, k).T(i, f)


def y_operator(pair: AffinePair, lamp: Sequence, k: QMult, f: GAElem) -> GAElem:
    return QOperators(pair, k).Y(lamp, f)


def y_eigenvalue(pair: AffinePair, lamp: Sequence, mu: Weight, k: QMult) -> RatFunc:
    """``q^(-<lam', r_{k'}(mu)>)``."""
    r = pair.spectral(mu, k)
    ex = pair.pairing(r, lamp)
    if not isinstance(ex, QExponent):
        ex = QExponent.const(ex, pair.nparams)
    return pair.field.q_power(-ex)


# ---------------------------------------------------------------------------
# non-symmetric polynomials


_PROBES_Q = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 5), (1, 1)]
_EQ_CACHE: Dict[tuple, GAElem] = {}


def _probe_for(pair: AffinePair, cone: Sequence[Weight], mu: Weight, k: QMult) -> Tuple[Weight, Dict]:
    for probe in _PROBES_Q:
        probe = tuple(probe[: pair.rank])
        if not pair.is_dominant_lp(probe):
            continue
        theta = {nu: pair.pairing(pair.spectral(nu, k), probe) for nu in cone}
        top = theta[mu]
        if all(not _exp_eq(theta[nu], top) for nu in cone if nu != mu):
            return probe, theta
    raise ResonantSpectrum(f"no separating probe for {mu} at k={k}")


def _exp_eq(a, b) -> bool:
    if isinstance(a, QExponent) and isinstance(b, QExponent):
        return (a - b).is_zero()
    return a == b


def nonsym_E_q(pair: AffinePair, mu: Weight, k: QMult) -> GAElem:
    """``E_mu(k) = e^mu + lower terms``, the joint ``Y``-eigenfunction.

    Triangular back-substitution for one dominant probe ``Y^lam0'`` whose
    eigenvalues separate the cone below ``mu``.
    """
    mu = tuple(mu)
    key = (k.key(), mu)
    if key in _EQ_CACHE:
        return _EQ_CACHE[key]
    R = pair.R
    cone = R.cone(mu)
    probe, theta = _probe_for(pair, cone, mu, k)
    ops = QOperators(pair, k)
    F = pair.field
    top = F.q_power(-theta[mu])
    coeffs: Dict[Weight, object] = {mu: F.one()}
    images = {nu: ops.Y_dominant(probe, GAElem.monomial(nu, F.one())) for nu in cone}
    allowed = set(cone)
    for nu in cone:
        for lam in images[nu].terms:
            if lam not in allowed:
                raise NonCancellingDenominator(f"Y^{probe} e^{nu} leaves the cone at {lam}")
    for nu in cone:
        if nu == mu:
            continue
        acc = F.zero()
        for m, c in coeffs.items():
            t = images[m].terms.get(nu)
            if t is not None:
                acc = acc + c * t
        if acc.is_zero():
            continue
        coeffs[nu] = acc / (top - F.q_power(-theta[nu]))
    out = GAElem(coeffs)
    _EQ_CACHE[key] = out
    return out


def nonsym_E_q_at(pair: AffinePair, mu: Weight, k: QMult) -> GAElem:
    """``E_mu`` at constant parameters, falling back to specializing the symbolic one."""
    try:
        return nonsym_E_q(pair, mu, k)
    except ResonantSpectrum:
        E = nonsym_E_q(pair, mu, QMult.symbolic(pair))
        vals = [v.pure for v in k]
        return E.map_coeffs(lambda c: pair.field.specialize_params(c, vals))


# ---------------------------------------------------------------------------
# symmetrizers and symmetric polynomials


def tau_eps_word(pair: AffinePair, eps: LinearCharacter, k: QMult, word: Sequence[int]) -> RatFunc:
    out = pair.field.one()
    for i in word:
        t = tau_simple(pair, k, i)
        if eps(pair.W0.simple(i)) == 1:
            out = out * t
        else:
            out = out * (-t.inverse())
    return out


def hecke_T_all(pair: AffinePair, k: QMult, f: GAElem) -> Dict[tuple, GAElem]:
    """``{w.matrix: T(w) f}`` for all ``w`` in ``W0``, via ``T(w) = T_i T(s_i w)``."""
    ops = QOperators(pair, k)
    out = {pair.W0.identity.matrix: f}
    for w in sorted(pair.W0.elements, key=lambda w: w.length):
        if w.length == 0:
            continue
        i = w.word[0]
        rest = pair.W0.mul(pair.W0.simple(i), w)
        out[w.matrix] = ops.T(i, out[rest.matrix])
    return out


def hecke_symmetrizer(pair: AffinePair, eps: LinearCharacter, k: QMult, f: GAElem) -> GAElem:
    """``U_eps(k) = eps(w0) (tau^eps_{w0})^-1 sum_w tau^eps_w T(w)``."""
    images = hecke_T_all(pair, k, f)
    out = GAElem()
    for w in pair.W0.elements:
        out = out + images[w.matrix].scale(tau_eps_word(pair, eps, k, w.word))
    w0 = pair.W0.w0
    return out.scale(eps(w0) * tau_eps_word(pair, eps, k, w0.word).inverse())


def symmetrize(pair: AffinePair, eps: LinearCharacter, k: QMult, f: GAElem, variant: str = "hecke") -> GAElem:
    if variant == "hecke":
        return hecke_symmetrizer(pair, eps, k, f)
    if variant == "plain":
        return plain_symmetrize(pair.R, eps, f)
    raise ValueError(f"unknown symmetrizer variant {variant!r}")


def poincare_tau2(pair: AffinePair, k: QMult, lam: Weight) -> RatFunc:
    """``W_{0 lam}(tau^2) = sum over the stabilizer of tau_w^2``."""
    d = pair.R.decompose(lam)
    total = pair.field.zero()
    for w in d.stabilizer:
        t = tau_eps_word(pair, pair.R.character("triv"), k, w.word)
        total = total + t * t
    return total


def sym_P_q(pair: AffinePair, lam: Weight, eps: LinearCharacter, k: QMult) -> GAElem:
    """``tau_{w0} W_{0 lam}(tau^2)^-1 U_eps(k) E_lam(k)``; zero when ``eps`` is nontrivial on ``W_{0 lam}``."""
    lam = tuple(lam)
    d = pair.R.decompose(lam)
    if d.dominant != lam:
        raise ValueError("sym_P_q needs a dominant weight")
    if any(eps(w) == -1 for w in d.stabilizer):
        return GAElem()
    E = nonsym_E_q(pair, lam, k)
    U = hecke_symmetrizer(pair, eps, k, E)
    triv = pair.R.character("triv")
    c = tau_eps_word(pair, triv, k, pair.W0.w0.word) / poincare_tau2(pair, k, lam)
    return U.scale(c)


def sym_P_q_monic(pair: AffinePair, lam: Weight, eps: LinearCharacter, k: QMult) -> GAElem:
    """``P^(eps)_lam`` rescaled to have coefficient 1 at ``e^lam``."""
    P = sym_P_q(pair, lam, eps, k)
    if P.is_zero():
        return P
    return P.scale(P.coeff(tuple(lam)).inverse())


# ---------------------------------------------------------------------------
# c-functions on the dual side


def dual_finite_roots(pair: AffinePair) -> List[Tuple[Weight, Weight, int, Optional[int]]]:
    """Positive roots ``a'`` of ``S'_01`` as ``(a' in L', matching root of R, slot of k'(a'), slot of k'(2a'))``."""
    return _dual_roots(pair.label)


@lru_cache(maxsize=None)
def _dual_roots(label: str):
    pair = build_affine_pair(label)
    R = pair.R
    slot = pair.data.dual_simple_params[0]
    out = []
    for a in R.positive_roots:
        if R.half(a) is not None:
            continue
        if pair.case == 1:
            gg = pair.inner(a, a)
            vec = tuple(Fraction(2 * x) / gg for x in a)
        else:
            vec = tuple(Fraction(x) for x in a)
        out.append((_as_int(pair.l_to_lp(vec)), a, slot[0], slot[1]))
    return tuple(out)


def dual_root_k(pair: AffinePair, root, kp: Sequence[QExponent], eps: Optional[LinearCharacter] = None,
                negate: bool = False) -> Tuple[QExponent, QExponent]:
    """``(k'(a'), k'(2a'))`` for one dual root, optionally signed by ``eps(r_a)`` and negated."""
    _, a, ia, i2 = root
    s = -1 if negate else 1
    if eps is not None:
        s *= eps.on_root(a)
    ka = kp[ia] * s
    k2 = kp[i2] * s if i2 is not None else QExponent.const(0, pair.nparams)
    return ka, k2


def c_factor_dual(pair: AffinePair, ka: QExponent, k2: QExponent, X: RatFunc) -> RatFunc:
    """``(1 - q^{k'(a')} X)(1 + q^{k'(2a')} X) / (tau (1 - X^2))`` with ``tau = q^((k'(a') + k'(2a'))/2)``."""
    F = pair.field
    num = (F.one() - F.q_power(ka) * X) * (F.one() + F.q_power(k2) * X)
    den = F.q_power((ka + k2) * _HALF) * (F.one() - X * X)
    if den.is_zero():
        raise PoleAtEvaluation("c-function pole")
    return num / den


def q_c_function(pair: AffinePair, sign: int, w: WeylElt, kp: Sequence[QExponent], x: Sequence,
                 eps: Optional[LinearCharacter] = None, negate: bool = False) -> RatFunc:
    """Product of ``c_{a',k'}(x)`` over positive ``a'`` in ``S'_01`` with ``w a'`` of sign ``sign``.

    ``eps`` gives the signed multiplicity ``eps k'``; ``negate`` replaces it by its negative.
    """
    out = pair.field.one()
    for root in dual_finite_roots(pair):
        img = mat_vec(w.matrix, root[1])
        if pair.R.is_positive(img) != (sign > 0):
            continue
        ka, k2 = dual_root_k(pair, root, kp, eps, negate)
        out = out * c_factor_dual(pair, ka, k2, pair.q_eval(root[0], x))
    return out


# ---------------------------------------------------------------------------
# shift data of a linear character


@dataclass(frozen=True)
class ShiftData:
    """``l`` per parameter slot, ``k.l`` coefficients, ``l^`` per slot and ``rho~_l`` in ``L``."""

    l_slots: Tuple[int, ...]
    kdotl: Tuple[int, ...]
    l_wedge: Tuple[int, ...]
    rho_tilde: Weight

    def k_dot_l(self, k: QMult) -> QExponent:
        return k.dot(self.kdotl)


def shift_data(pair: AffinePair, eps: LinearCharacter) -> ShiftData:
    R = pair.R
    l_slots = [0] * pair.nparams
    for i in range(1, pair.rank + 1):
        if eps(pair.W0.simple(i)) == -1:
            ia, i2 = pair.simple_params[i]
            l_slots[ia] = 1
            if i2 is not None:
                l_slots[i2] = 1
    kdotl = [0] * pair.nparams
    for a in R.positive_roots:
        if eps.on_root(a) != -1:
            continue
        slot = pair.simple_params[1][1] if (pair.case == 3 and R.half(a) is not None) else pair.simple_params[1][0]
        kdotl[slot] += 1
    l_wedge = tuple(l_slots)
    rho = pair.rho_dual(QMult.constant(pair, l_wedge))
    rho_tilde = _as_int(tuple(x.pure for x in rho))
    return ShiftData(tuple(l_slots), tuple(kdotl), l_wedge, rho_tilde)


def tau_word_mult(pair: AffinePair, k: QMult, w: WeylElt) -> RatFunc:
    """``tau_{w,k}`` as the product of ``tau_{a_i,k}`` along a reduced word."""
    out = pair.field.one()
    for i in w.word:
        out = out * tau_simple(pair, k, i)
    return out


# ---------------------------------------------------------------------------
# truncated constant-term pairing at integer multiplicities


def _ct_classes(pair: AffinePair):
    """Telescoping classes ``(grad, c0, slot_a, slot_2a)`` of ``S_1^+``.

    Each class ``{grad + c0 + j : j >= 0}`` carries constant multiplicities,
    so its weight factor collapses to a finite product at integer ``k``.
    """
    R = pair.R
    out = []
    if pair.case == 1:
        for a in R.roots:
            out.append((a, Fraction(0) if R.is_positive(a) else Fraction(1), 0, None))
    else:
        for a in R.roots:
            if R.half(a) is not None:
                continue
            pos = R.is_positive(a)
            out.append((a, Fraction(0) if pos else Fraction(1), 0, 1))
            out.append((a, _HALF, 2, 3))
    return out


def ct_weight(pair: AffinePair, k: QMult) -> GAElem:
    """``Delta_{S,k}`` at nonnegative integer ``k`` as a finite Laurent polynomial."""
    kk = k.integer_values()
    F = pair.field
    one = GAElem.constant(F.one(), pair.rank)
    out = one
    for grad, c0, ia, i2 in _ct_classes(pair):
        for j in range(kk[ia]):
            out = out * (one - GAElem.monomial(grad, F.q_power(QExponent.const(c0 + j, pair.nparams))))
        if i2 is not None:
            for j in range(kk[i2]):
                out = out * (one + GAElem.monomial(grad, F.q_power(QExponent.const(c0 + j, pair.nparams))))
    return out


def ct_q(pair: AffinePair, f: GAElem, g: GAElem, k: QMult, order: Optional[int] = None):
    """``ct(f g^* Delta_{S,k})`` at integer ``k``.

    At integer multiplicities the weight is a finite product, so the result is
    exact and ``order`` (a truncation bound for the series) is never needed.
    """
    F = pair.field
    wt = ct_weight(pair, k)
    gs = GAElem._raw({tuple(-x for x in lam): F.star(c) for lam, c in g.terms.items()})
    total = F.zero()
    for lam, a in f.terms.items():
        for mu, b in gs.terms.items():
            key = tuple(-(x + y) for x, y in zip(lam, mu))
            c = wt.terms.get(key)
            if c is not None:
                total = total + a * b * c
    return total
