"""Dunkl-Cherednik operators and non-symmetric Heckman-Opdam polynomials.

Polynomials on the Cartan subalgebra are dictionaries ``{exponents: coeff}``
in the coordinate functions ``x_i(v) = v_i`` (fundamental-weight coordinates).
The operator attached to ``x_i`` is ``T_{xi_i}`` with ``(xi_i, v) = v_i``, so
``T_p E_lam = p(r_k(lam)) E_lam`` is evaluation in the same coordinates.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .galg import GAElem, is_zero, plain_symmetrize
from .scalars import Field, RatFunc, param_field
from .weyl import LinearCharacter, RootSystem, Weight, WeylElt, build_root_system

HPoly = Dict[Tuple[int, ...], Fraction]


class ResonantSpectrum(ArithmeticError):
    """Two weights of the cone share an eigenvalue at this multiplicity."""


class ProbeNotSeparating(ArithmeticError):
    pass


class PoleAtEvaluation(ZeroDivisionError):
    pass


class Multiplicity(tuple):
    """Orbit values ``(k1, ..., km)`` of a multiplicity function on ``R``."""

    def __new__(cls, R: RootSystem, values: Iterable):
        vals = tuple(values)
        if len(vals) != R.n_orbits:
            raise ValueError(f"{R.label} needs {R.n_orbits} multiplicity values")
        obj = super().__new__(cls, vals)
        obj.R = R
        return obj

    def __reduce__(self):
        return (_rebuild_mult, (self.R.label, tuple(self)))

    @staticmethod
    def symbolic(R: RootSystem) -> "Multiplicity":
        return Multiplicity(R, param_field(R.n_orbits).gens())

    @property
    def field(self) -> Optional[Field]:
        for v in self:
            if isinstance(v, RatFunc):
                return v.field
        return None

    def of(self, a: Weight):
        return self[self.R.orbit_of[a]]

    def k0(self, a: Weight):
        """``1/2 k(a/2) + k(a)`` for ``a`` in ``R0``."""
        h = self.R.half(a)
        v = self.of(a)
        return v + self.of(h) * Fraction(1, 2) if h is not None else v

    def shifted(self, l: Sequence[int], sign: int = 1) -> "Multiplicity":
        return Multiplicity(self.R, (v + sign * x if x else v for v, x in zip(self, l)))

    def signed(self, eps: LinearCharacter) -> "Multiplicity":
        """``a -> eps(r_a) k(a)``."""
        return Multiplicity(self.R, (v if s == 1 else -v for v, s in zip(self, eps.signs)))

    def negated(self) -> "Multiplicity":
        return Multiplicity(self.R, (-v for v in self))

    def specialize(self, values: Sequence) -> "Multiplicity":
        return Multiplicity(self.R, (Fraction(v) for v in values))

    def rho(self) -> tuple:
        return self.R.rho(self)

    def key(self) -> tuple:
        return (self.R.label,) + tuple(str(v) for v in self)


def _rebuild_mult(label, values):
    return Multiplicity(build_root_system(label), values)


def parse_multiplicity(R: RootSystem, text: Optional[str]) -> Multiplicity:
    """``None`` or ``"sym"`` gives symbolic values; otherwise comma-separated rationals."""
    if text is None or text.strip() in ("", "sym", "symbolic"):
        return Multiplicity.symbolic(R)
    parts = [p.strip() for p in text.split(",")]
    field = param_field(R.n_orbits)
    vals = []
    for p in parts:
        try:
            vals.append(Fraction(p))
        except ValueError:
            vals.append(field.parse(p))
    return Multiplicity(R, vals)


# ---------------------------------------------------------------------------
# the operators


class CherednikOperators:
    """``T_xi(k)`` for one root system and multiplicity, with a monomial cache."""

    _instances: Dict[tuple, "CherednikOperators"] = {}

    def __new__(cls, R: RootSystem, k: Multiplicity):
        key = k.key()
        inst = cls._instances.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(R, k)
            cls._instances[key] = inst
        return inst

    def _init(self, R: RootSystem, k: Multiplicity):
        self.R = R
        self.k = k
        self.rho = R.rho(k)
        # per positive root: (root, coroot, k(a) * a_i for each coordinate i)
        self._roots = []
        for a in R.positive_roots:
            kv = k.of(a)
            if is_zero(kv):
                continue
            self._roots.append((a, R.coroot(a), tuple(kv * ai if ai else 0 for ai in a)))
        self._cache: Dict[Tuple[int, Weight], GAElem] = {}

    def coord_on_monomial(self, i: int, lam: Weight) -> GAElem:
        key = (i, lam)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        R = self.R
        terms: Dict[Weight, object] = {}

        def add(w, c):
            if w in terms:
                terms[w] = terms[w] + c
            else:
                terms[w] = c

        diag = lam[i] - self.rho[i]
        add(lam, diag)
        for a, cor, ka in self._roots:
            c = ka[i]
            if is_zero(c):
                continue
            m = int(sum(Fraction(x) * y for x, y in zip(R.gram_dot(cor), lam)))
            if m > 0:
                for j in range(m):
                    add(tuple(x - j * y for x, y in zip(lam, a)), c)
            elif m < 0:
                for j in range(1, -m + 1):
                    add(tuple(x + j * y for x, y in zip(lam, a)), -c)
        out = GAElem(terms)
        self._cache[key] = out
        return out

    def coord(self, i: int, f: GAElem) -> GAElem:
        acc: Dict[Weight, object] = {}
        for lam, c in f.terms.items():
            for mu, d in self.coord_on_monomial(i, lam).terms.items():
                v = c * d
                acc[mu] = acc[mu] + v if mu in acc else v
        return GAElem(acc)

    def xi(self, xi: Sequence, f: GAElem) -> GAElem:
        """``T_xi f`` for an ambient vector ``xi`` (omega coordinates)."""
        coeffs = self.R.gram_dot(xi)
        out = GAElem()
        for i, c in enumerate(coeffs):
            if c:
                out = out + self.coord(i, f).scale(c)
        return out

    def poly(self, p: Mapping[Tuple[int, ...], object], f: GAElem) -> GAElem:
        """``T_p f`` for a polynomial ``p`` in the coordinates."""
        memo: Dict[Tuple[int, ...], GAElem] = {(0,) * self.R.rank: f}

        def power(a):
            if a in memo:
                return memo[a]
            i = next(j for j, x in enumerate(a) if x)
            prev = tuple(x - (j == i) for j, x in enumerate(a))
            memo[a] = self.coord(i, power(prev))
            return memo[a]

        out = GAElem()
        for a in sorted(p):
            c = p[a]
            if is_zero(c):
                continue
            out = out + power(a).scale(c)
        return out


def _gram_dot(self: RootSystem, v: Sequence) -> Tuple:
    """``G v``: coefficients expressing ``(v, .)`` in the coordinates."""
    out = []
    for row in self.gram:
        acc = 0
        for g, x in zip(row, v):
            if g and x:
                acc = acc + g * x
        out.append(acc)
    return tuple(out)


RootSystem.gram_dot = _gram_dot  # type: ignore[attr-defined]


def dunkl_cherednik(R: RootSystem, xi: Sequence, k: Multiplicity, f: GAElem) -> GAElem:
    return CherednikOperators(R, k).xi(xi, f)


def apply_poly_T(R: RootSystem, p: Mapping, k: Multiplicity, f: GAElem) -> GAElem:
    return CherednikOperators(R, k).poly(p, f)


def eval_hpoly(p: Mapping[Tuple[int, ...], object], x: Sequence):
    """Evaluate a coordinate polynomial at a vector of scalars."""
    total = 0
    for a, c in p.items():
        term = c
        for xi, e in zip(x, a):
            if e:
                term = term * xi ** e
        total = total + term
    return total


def linear_form(R: RootSystem, v: Sequence) -> HPoly:
    """The polynomial ``x -> (v, x)``."""
    g = R.gram_dot(v)
    n = R.rank
    return {tuple(int(i == j) for j in range(n)): Fraction(c) for i, c in enumerate(g) if c}


# ---------------------------------------------------------------------------
# polynomials


_E_CACHE: Dict[tuple, GAElem] = {}

_PROBES = [(1, 3), (2, 7), (5, 2), (3, 11), (1, 1), (7, 3)]


def eigenvalue(R: RootSystem, lam: Weight, k: Multiplicity, probe: Sequence) -> object:
    r = R.spectral_vector(lam, k)
    return sum((c * x for c, x in zip(probe, r)), 0)


def nonsym_E(R: RootSystem, lam: Weight, k: Multiplicity, method: str = "triangular") -> GAElem:
    """Monic joint eigenfunction ``E_lam(k) = e^lam + lower terms``.

    ``method="triangular"`` back-substitutes the eigen-equation of one generic
    operator ``T_probe`` down the cone; ``method="projector"`` applies the
    product of spectral projectors to ``e^lam``.  Both give the same result.
    """
    lam = tuple(lam)
    key = (k.key(), lam, method)
    if key in _E_CACHE:
        return _E_CACHE[key]
    cone = R.cone(lam)
    ops = CherednikOperators(R, k)
    for probe in _PROBES:
        probe = tuple(probe[: R.rank])
        theta = {nu: eigenvalue(R, nu, k, probe) for nu in cone}
        top = theta[lam]
        if all(not is_zero(theta[nu] - top) for nu in cone if nu != lam):
            break
    else:
        raise ResonantSpectrum(f"no separating probe for {lam} at k={tuple(k)}")
    xi = _probe_vector(R, probe)
    if method == "projector":
        f = GAElem.monomial(lam, 1)
        for nu in cone:
            if nu == lam:
                continue
            f = (ops.xi(xi, f) - f.scale(theta[nu])).scale(1 / (top - theta[nu]) if not isinstance(top, RatFunc) else (top - theta[nu]).inverse())
        # the projectors may leave a unit in front; all of them fix e^lam's coefficient 1
        out = f
    else:
        coeffs: Dict[Weight, object] = {lam: 1}
        images = {nu: ops.xi(xi, GAElem.monomial(nu, 1)) for nu in cone}
        for nu in cone:
            if nu == lam:
                continue
            acc = 0
            for mu, c in coeffs.items():
                t = images[mu].terms.get(nu)
                if t is not None:
                    acc = acc + c * t
            if is_zero(acc):
                continue
            d = top - theta[nu]
            coeffs[nu] = acc / d if isinstance(d, RatFunc) or not isinstance(acc, RatFunc) else acc * (1 / Fraction(d))
        out = GAElem(coeffs)
    _E_CACHE[key] = out
    return out


def _probe_vector(R: RootSystem, probe: Sequence) -> tuple:
    """Ambient vector ``xi`` with ``(xi, v) = sum probe_i v_i``."""
    import sympy

    G = sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in R.gram])
    sol = G.inv() * sympy.Matrix([sympy.Integer(c) for c in probe])
    return tuple(Fraction(str(c)) for c in sol)


def sym_P(R: RootSystem, lam: Weight, eps: LinearCharacter, k: Multiplicity) -> GAElem:
    """``|W_lam|^-1 sum_w eps(w) w(E_lam(k))``; zero when ``eps`` is nontrivial on ``W_lam``."""
    d = R.decompose(lam)
    if d.dominant != tuple(lam):
        raise ValueError("sym_P needs a dominant weight")
    if any(eps(w) == -1 for w in d.stabilizer):
        return GAElem()
    E = nonsym_E(R, lam, k)
    return plain_symmetrize(R, eps, E).scale(Fraction(1, len(d.stabilizer)))


def c_function(R: RootSystem, sign: int, w: WeylElt, k: Multiplicity, x: Sequence):
    """``prod over a in R0+ with w(a) of sign ``sign`` of (1 + k0(a)/(x, a^vee))``."""
    out = 1
    for a in R.positive_reduced:
        wa = w(a)
        if R.is_positive(wa) != (sign > 0):
            continue
        p = R.pairing(x, a)
        if is_zero(p):
            raise PoleAtEvaluation(f"(x, a^vee) = 0 for a = {a}")
        out = out * (1 + k.k0(a) / p)
    return out


def expand_P_in_E(R: RootSystem, lam: Weight, eps: LinearCharacter, k: Multiplicity) -> Dict[Weight, object]:
    """Coefficients of ``P^(eps)_lam`` on the ``E_mu``, ``mu`` in the orbit of ``lam``."""
    d = R.decompose(lam)
    x = tuple(a + b for a, b in zip(lam, R.rho(k)))
    ek = k.signed(eps).negated()
    out = {}
    for mu in R.orbit(lam):
        dm = R.decompose(mu)
        w = R.group.mul(dm.vbar, d.w_lam)
        out[mu] = eps(dm.vbar) * c_function(R, +1, w, ek, x)
    return out


def verify_graded_hecke(R: RootSystem, k: Multiplicity, weights: Iterable[Weight]):
    """Check ``r_i T_xi = T_{r_i xi} r_i - k0(a_i)(xi, a_i)`` on monomials.

    Returns ``None`` on success or a description of the first violation.
    """
    ops = CherednikOperators(R, k)
    n = R.rank
    basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    for i in range(1, n + 1):
        ri = R.group.simple(i)
        a = R.simple[i - 1]
        k0 = k.k0(a)
        for xi in basis:
            rxi = ri(xi)
            c = k0 * R.inner(xi, a)
            for lam in weights:
                e = GAElem.monomial(lam, 1)
                lhs = ops.xi(xi, e).act(ri)
                rhs = ops.xi(rxi, e.act(ri)) - e.scale(c)
                if lhs != rhs:
                    return {"i": i, "xi": [str(x) for x in xi], "weight": list(lam)}
    return None
