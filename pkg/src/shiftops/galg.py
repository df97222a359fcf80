"""Laurent exponential polynomials ``sum c_lam e^lam`` over a weight lattice.

Coefficients are generic: anything that supports ``+``, ``*`` and unary minus
(rationals, :class:`~shiftops.scalars.RatFunc`).  Weights are integer tuples.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from .scalars import RatFunc
from .weyl import LinearCharacter, RootSystem, Weight, WeylElt, mat_vec


class DivisionRemainder(ArithmeticError):
    """The divisor does not divide the dividend in the group algebra."""


class HalfWeightNotInLattice(ValueError):
    pass


class NonIntegerMultiplicity(ValueError):
    pass


def is_zero(c) -> bool:
    if isinstance(c, RatFunc):
        return c.num.is_zero()
    return c == 0


class GAElem:
    """A finitely supported map ``weight -> coefficient``; zero entries are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Weight, object]] = None):
        self.terms: Dict[Weight, object] = {}
        if terms:
            for k, v in terms.items():
                if not is_zero(v):
                    self.terms[tuple(k)] = v

    @classmethod
    def _raw(cls, terms: Dict[Weight, object]) -> "GAElem":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @staticmethod
    def monomial(lam: Sequence[int], coeff=1) -> "GAElem":
        return GAElem({tuple(lam): coeff})

    @staticmethod
    def constant(c, rank: int) -> "GAElem":
        return GAElem({(0,) * rank: c})

    # container protocol ---------------------------------------------------
    def __iter__(self) -> Iterator[Tuple[Weight, object]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def support(self) -> list:
        return sorted(self.terms)

    def coeff(self, lam: Sequence[int]):
        return self.terms.get(tuple(lam), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, GAElem):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):
        return hash(tuple(sorted((k, str(v)) for k, v in self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"({self.terms[k]})*e^{list(k)}" for k in self.support()]
        return " + ".join(parts)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "GAElem") -> "GAElem":
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                s = out[k] + v
                if is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return GAElem._raw(out)

    def __neg__(self) -> "GAElem":
        return GAElem._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "GAElem") -> "GAElem":
        return self + (-other)

    def scale(self, c) -> "GAElem":
        if is_zero(c):
            return GAElem()
        return GAElem._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "GAElem":
        if not isinstance(other, GAElem):
            return self.scale(other)
        out: Dict[Weight, object] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                v = ca * cb
                out[k] = out[k] + v if k in out else v
        return GAElem(out)

    def __rmul__(self, c) -> "GAElem":
        return self.scale(c)

    def __pow__(self, n: int) -> "GAElem":
        rank = len(next(iter(self.terms))) if self.terms else 0
        out = GAElem.constant(1, rank)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, mu: Sequence[int]) -> "GAElem":
        """Multiply by ``e^mu``."""
        return GAElem._raw({tuple(x + y for x, y in zip(k, mu)): v for k, v in self.terms.items()})

    def map_coeffs(self, fn: Callable) -> "GAElem":
        return GAElem({k: fn(v) for k, v in self.terms.items()})

    def act(self, w: WeylElt) -> "GAElem":
        return act(w, self)

    def star(self, conj: Optional[Callable] = None) -> "GAElem":
        """``e^lam -> e^-lam``; ``conj`` optionally maps the coefficients too."""
        return GAElem._raw({tuple(-x for x in k): (conj(v) if conj else v) for k, v in self.terms.items()})

    def leading(self) -> Tuple[Weight, object]:
        k = max(self.terms)
        return k, self.terms[k]

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        keys = self.support()
        return {"weights": [list(k) for k in keys], "coeffs": [str(self.terms[k]) for k in keys]}

    @staticmethod
    def from_json(data: Mapping, parse: Callable[[str], object]) -> "GAElem":
        return GAElem({tuple(w): parse(c) for w, c in zip(data["weights"], data["coeffs"])})


def act(w: WeylElt, f: GAElem) -> GAElem:
    """``e^lam -> e^{w lam}``."""
    return GAElem._raw({mat_vec(w.matrix, k): v for k, v in f.terms.items()})


def exact_divide(f: GAElem, g: GAElem) -> GAElem:
    """Return ``h`` with ``f == g * h`` or raise :class:`DivisionRemainder`.

    Long division by lexicographic leading terms; lex order is a group order
    on the lattice, so leading terms multiply.  Quotient exponents must lie in
    the box ``[min f - min g, max f - max g]`` coordinatewise.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero group-algebra element")
    if f.is_zero():
        return GAElem()
    rank = len(next(iter(g.terms)))
    lo = [min(k[i] for k in f.terms) - min(k[i] for k in g.terms) for i in range(rank)]
    hi = [max(k[i] for k in f.terms) - max(k[i] for k in g.terms) for i in range(rank)]
    glead, gc = g.leading()
    ginv = gc.inverse() if isinstance(gc, RatFunc) else 1 / Fraction(gc)
    rest = dict(f.terms)
    quot: Dict[Weight, object] = {}
    gterms = list(g.terms.items())
    while rest:
        top = max(rest)
        c = rest[top] * ginv
        qk = tuple(a - b for a, b in zip(top, glead))
        if any(x < l or x > h for x, l, h in zip(qk, lo, hi)):
            raise DivisionRemainder("divisor does not divide the dividend")
        quot[qk] = c
        for k, v in gterms:
            key = tuple(a + b for a, b in zip(qk, k))
            s = rest.get(key, 0) - c * v
            if is_zero(s):
                rest.pop(key, None)
            else:
                rest[key] = s
    return GAElem(quot)


def half_weight_product(factors: Iterable[Sequence[Fraction]], rank: int) -> GAElem:
    """``prod (e^{a/2} - e^{-a/2})`` for vectors ``a``, returned on the integer lattice."""
    terms = {(Fraction(0),) * rank: 1}
    for a in factors:
        h = tuple(Fraction(x) / 2 for x in a)
        new: Dict[tuple, int] = {}
        for k, v in terms.items():
            for sgn in (1, -1):
                kk = tuple(x + sgn * y for x, y in zip(k, h))
                new[kk] = new.get(kk, 0) + sgn * v
        terms = {k: v for k, v in new.items() if v}
    out = {}
    for k, v in terms.items():
        if any(x.denominator != 1 for x in k):
            raise HalfWeightNotInLattice(f"exponent {k} is not in the lattice")
        out[tuple(int(x) for x in k)] = v
    return GAElem(out)


@lru_cache(maxsize=None)
def _weyl_denominator(system: str, signs: Tuple[int, ...]) -> GAElem:
    from .weyl import build_root_system

    R = build_root_system(system)
    eps = LinearCharacter("", system, signs)
    roots = [a for a in R.positive_reduced if eps.l_of(a) == 1]
    return half_weight_product(roots, R.rank)


def weyl_denominator(R: RootSystem, eps: LinearCharacter) -> GAElem:
    """``prod over positive a in R0 with l(a) = 1 of (e^{a/2} - e^{-a/2})``."""
    return _weyl_denominator(R.label, eps.signs)


def plain_symmetrize(R: RootSystem, eps: LinearCharacter, f: GAElem) -> GAElem:
    """``sum_w eps(w) w(f)``."""
    out = GAElem()
    for w in R.group.elements:
        s = eps(w)
        g = act(w, f)
        out = out + (g if s == 1 else -g)
    return out


@lru_cache(maxsize=None)
def _pairing_weight(system: str, k: Tuple[int, ...]) -> GAElem:
    from .weyl import build_root_system

    R = build_root_system(system)
    out = GAElem.constant(Fraction(1), R.rank)
    for a in R.roots:
        kv = k[R.orbit_of[a]]
        if kv:
            factor = GAElem({(0,) * R.rank: Fraction(1), a: Fraction(-1)})
            out = out * factor ** kv
    return out


def integer_multiplicity(k: Sequence) -> Tuple[int, ...]:
    out = []
    for v in k:
        if isinstance(v, RatFunc):
            if not v.is_constant():
                raise NonIntegerMultiplicity("symbolic multiplicity")
            v = v.to_fraction()
        v = Fraction(v)
        if v.denominator != 1 or v < 0:
            raise NonIntegerMultiplicity(f"multiplicity value {v} is not a nonnegative integer")
        out.append(int(v))
    return tuple(out)


def ct_pairing(R: RootSystem, f: GAElem, g: GAElem, k: Sequence) -> object:
    """Constant term of ``f * g^* * prod_{a in R} (1 - e^a)^{k(a)}``."""
    kk = integer_multiplicity(k)
    wt = _pairing_weight(R.label, kk)
    total = 0
    for lam, a in f.terms.items():
        for mu, b in g.terms.items():
            # need weight term at mu - lam
            key = tuple(m - l for l, m in zip(lam, mu))
            c = wt.terms.get(key)
            if c is not None:
                total = total + a * b * c
    return total
