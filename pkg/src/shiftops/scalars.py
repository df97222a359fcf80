"""Exact rational functions over Q in a fixed list of named variables.

Every value is stored as a reduced pair ``num/den`` of integer multivariate
polynomials (python-flint ``fmpz_mpoly``) with ``gcd(num, den) == 1`` and a
positive leading coefficient of ``den`` in deglex order.  That pair is unique,
so equality is structural and the string form is deterministic.

Two kinds of fields are used by the rest of the package:

* the multiplicity field ``Q(k1, ..., km)`` for the differential setting;
* the q-field ``Q(qs, u1, ..., ur)`` where ``q = qs**(2e)`` and
  ``ui = q**(ki/2)``; Laurent monomials in these variables are just
  fractions with a monomial denominator.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import flint


class DivisionByZero(ZeroDivisionError):
    """Raised when dividing by the zero rational function."""


class PoleAtSpecialization(ValueError):
    """Raised when a specialization sends the denominator to zero."""


class NonRepresentableExponent(ValueError):
    """Raised when a q-power is not a Laurent monomial in ``qs`` and the ``ui``."""


class ParseError(ValueError):
    """Raised on malformed scalar text."""


Number = Union[int, Fraction]


class Field:
    """The field ``Q(names...)``.  Instances are cached per name tuple."""

    _cache: Dict[Tuple[str, ...], "Field"] = {}

    def __new__(cls, names: Sequence[str]):
        key = tuple(names)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        self._setup(key)
        cls._cache[key] = self
        return self

    def _setup(self, names: Tuple[str, ...]) -> None:
        self.names = names
        # flint refuses empty variable lists; a dummy generator keeps the
        # constant field uniform with the others and is never exposed.
        self.ctx = flint.fmpz_mpoly_ctx.get(names or ("_c",), "deglex")
        self._one = self.ctx.from_dict({(0,) * self.ctx.nvars(): 1})
        self._zero = self.ctx.from_dict({})
        self._constants: Dict[Number, "RatFunc"] = {}

    def __repr__(self) -> str:
        return f"Field({', '.join(self.names)})"

    def __reduce__(self):
        return (Field, (self.names,))

    # constructors -------------------------------------------------------
    def zero(self) -> "RatFunc":
        return RatFunc._raw(self._zero, self._one, self)

    def one(self) -> "RatFunc":
        return RatFunc._raw(self._one, self._one, self)

    def gen(self, name: str) -> "RatFunc":
        i = self.names.index(name)
        return RatFunc._raw(self.ctx.gens()[i], self._one, self)

    def gens(self) -> Tuple["RatFunc", ...]:
        return tuple(self.gen(n) for n in self.names)

    def constant(self, value: Number) -> "RatFunc":
        """The rational constant ``value``, cached for reuse."""
        hit = self._constants.get(value)
        if hit is None:
            hit = self(value)
            if len(self._constants) < 4096:
                self._constants[value] = hit
        return hit

    def __call__(self, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            if value.field is not self:
                raise TypeError(f"scalar from {value.field!r} used in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        v = Fraction(value)
        nv = self.ctx.nvars()
        return RatFunc._raw(
            self.ctx.from_dict({(0,) * nv: v.numerator}),
            self.ctx.from_dict({(0,) * nv: v.denominator}),
            self,
        )

    def monomial(self, exponents: Sequence[int], coeff: Number = 1) -> "RatFunc":
        """Laurent monomial ``coeff * prod(var_i ** exponents[i])``."""
        nv = self.ctx.nvars()
        exps = tuple(exponents) + (0,) * (nv - len(exponents))
        pos = tuple(max(e, 0) for e in exps)
        neg = tuple(max(-e, 0) for e in exps)
        c = Fraction(coeff)
        return RatFunc(
            self.ctx.from_dict({pos: c.numerator}),
            self.ctx.from_dict({neg: c.denominator}),
            self,
        )

    # parsing -------------------------------------------------------------
    def parse(self, text: str, aliases: Mapping[str, "RatFunc"] | None = None) -> "RatFunc":
        """Parse ASCII like ``"(k1+1)/(k1+2)"`` or ``"qs^3*u1^-1"``."""
        src = text.strip().replace("^", "**")
        if not src:
            raise ParseError("empty scalar")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse scalar {text!r}") from exc
        names = {n: self.gen(n) for n in self.names}
        if aliases:
            names.update(aliases)
        return _eval_ast(tree.body, names, self, text)


def _eval_ast(node, names, field: Field, text: str) -> "RatFunc":
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return field(node.value)
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ParseError(f"unknown symbol {node.id!r} in {text!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_ast(node.operand, names, field, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_ast(node.left, names, field, text)
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ParseError(f"exponents must be integers in {text!r}")
            return base ** (sign * exp.value)
        a = _eval_ast(node.left, names, field, text)
        b = _eval_ast(node.right, names, field, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    raise ParseError(f"unsupported syntax in {text!r}")


def _poly_str(p) -> str:
    return p.str().replace(" ", "")


def _is_atom(s: str) -> bool:
    return all(ch.isalnum() or ch in "_^" for ch in s)


class RatFunc:
    """An element of a :class:`Field`, kept in canonical reduced form."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den, field: Field):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num, self.den, self.field = field._zero, field._one, field
            return
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self.num, self.den, self.field = num, den, field

    @classmethod
    def _raw(cls, num, den, field):
        obj = object.__new__(cls)
        obj.num, obj.den, obj.field = num, den, field
        return obj

    # coercion -----------------------------------------------------------
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.field is not self.field:
                raise TypeError(f"mixing {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.constant(other)
        return NotImplemented

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RatFunc._raw(self.num + o.num, self.den, self.field)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den, self.field)
        g = self.den.gcd(o.den)
        b1 = self.den / g
        d1 = o.den / g
        return RatFunc(self.num * d1 + o.num * b1, self.den * d1, self.field)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den, self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if type(other) is int and self.den.is_one():
            return RatFunc._raw(self.num * other, self.den, self.field) if other else self.field.zero()
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_one() and o.den.is_one():
            return RatFunc._raw(self.num * o.num, self.den, self.field)
        if self.num.is_zero() or o.num.is_zero():
            return self.field.zero()
        a, b, c, d = self.num, self.den, o.num, o.den
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_one():
            a, d = a / g1, d / g1
        if not g2.is_one():
            c, b = c / g2, b / g2
        num, den = a * c, b * d
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RatFunc._raw(num, den, self.field)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RatFunc._raw(num, den, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers")
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n, self.field)

    # comparisons --------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, str) else NotImplemented
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.field.names, _poly_str(self.num), _poly_str(self.den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        n = int(self.num.coefficient(0)) if not self.num.is_zero() else 0
        return Fraction(n, int(self.den.coefficient(0)))

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        n = _poly_str(self.num)
        if self.den.is_one():
            return n
        d = _poly_str(self.den)
        if len(self.num.monoms()) > 1:
            n = f"({n})"
        if not _is_atom(d):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    # substitutions ------------------------------------------------------
    def specialize(self, values: Mapping[str, Number]) -> "RatFunc":
        """Substitute rational numbers for some variables (others stay symbolic)."""
        idx = {self.field.names.index(k): Fraction(v) for k, v in values.items()}
        num = _specialize_poly(self.num, idx, self.field)
        den = _specialize_poly(self.den, idx, self.field)
        if den[0].is_zero():
            raise PoleAtSpecialization(f"{self} has a pole at {dict(values)}")
        # num = N/a, den = D/b  ->  (N*b)/(D*a)
        return RatFunc(num[0] * den[1], den[0] * num[1], self.field)

    def substitute(self, images: Mapping[str, "RatFunc"]) -> "RatFunc":
        """Substitute rational functions (same field) for variables."""
        f = self.field
        gens = f.ctx.gens()
        polys, dens = [], []
        simple = True
        for i, name in enumerate(f.names):
            img = images.get(name)
            if img is None:
                polys.append(gens[i])
            else:
                img = f(img)
                if not img.den.is_one():
                    simple = False
                polys.append(img.num)
        if simple:
            return RatFunc(self.num.compose(*polys), self.den.compose(*polys), f)
        full = [images.get(n, f.gen(n)) for n in f.names]
        return _eval_poly(self.num, full, f) / _eval_poly(self.den, full, f)

    def monomial_map(self, images: Mapping[str, Sequence[int]]) -> "RatFunc":
        """Send variable ``v`` to the Laurent monomial with exponent vector ``images[v]``."""
        f = self.field
        nv = f.ctx.nvars()
        mat = []
        for i, name in enumerate(f.names):
            e = images.get(name)
            if e is None:
                e = tuple(1 if j == i else 0 for j in range(nv))
            mat.append(tuple(e) + (0,) * (nv - len(e)))
        n_d, n_shift = _monomial_map_poly(self.num, mat, nv)
        d_d, d_shift = _monomial_map_poly(self.den, mat, nv)
        # undo the shifts that made exponents nonnegative
        shift = tuple(d - n for n, d in zip(n_shift, d_shift))
        pos = tuple(max(s, 0) for s in shift)
        neg = tuple(max(-s, 0) for s in shift)
        num = f.ctx.from_dict(n_d) * f.ctx.from_dict({pos: 1})
        den = f.ctx.from_dict(d_d) * f.ctx.from_dict({neg: 1})
        return RatFunc(num, den, f)

    def degree_in(self, name: str) -> Tuple[int, int]:
        i = self.field.names.index(name)
        return self.num.degrees()[i], self.den.degrees()[i]


def _specialize_poly(p, idx: Dict[int, Fraction], field: Field):
    """Return ``(P, a)`` with integer polynomial ``P`` and ``p(values) = P / a``."""
    terms = {}
    for mon, c in zip(p.monoms(), p.coeffs()):
        mon = tuple(int(e) for e in mon)
        val = Fraction(int(c))
        rest = list(mon)
        for i, v in idx.items():
            if mon[i]:
                val *= v ** mon[i]
                rest[i] = 0
        key = tuple(rest)
        terms[key] = terms.get(key, 0) + val
    lcm = 1
    for v in terms.values():
        lcm = lcm * v.denominator // _gcd(lcm, v.denominator)
    d = {k: int(v * lcm) for k, v in terms.items() if v}
    return field.ctx.from_dict(d), field.ctx.from_dict({(0,) * field.ctx.nvars(): lcm})


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _eval_poly(p, images: Sequence[RatFunc], field: Field) -> RatFunc:
    total = field.zero()
    for mon, c in zip(p.monoms(), p.coeffs()):
        mon = tuple(int(e) for e in mon)
        term = field(int(c))
        for img, e in zip(images, mon):
            if e:
                term = term * img ** e
        total = total + term
    return total


def _monomial_map_poly(p, mat, nv):
    out = {}
    for mon, c in zip(p.monoms(), p.coeffs()):
        mon = tuple(int(e) for e in mon)
        new = [0] * nv
        for i, e in enumerate(mon):
            if e:
                row = mat[i]
                for j in range(nv):
                    new[j] += e * row[j]
        key = tuple(new)
        out[key] = out.get(key, 0) + int(c)
    out = {k: v for k, v in out.items() if v}
    if not out:
        return {}, (0,) * nv
    shift = tuple(min(k[j] for k in out) for j in range(nv))
    shifted = {tuple(k[j] - shift[j] for j in range(nv)): v for k, v in out.items()}
    return shifted, tuple(-s for s in shift)


# ---------------------------------------------------------------------------
# multiplicity and q fields


@lru_cache(maxsize=None)
def param_field(nparams: int) -> Field:
    """``Q(k1, ..., kn)``."""
    return Field(tuple(f"k{i + 1}" for i in range(nparams)))


@dataclass(frozen=True)
class QExponent:
    """An exponent ``pure + sum(coeffs[i] * k_i)`` of ``q``."""

    pure: Fraction
    coeffs: Tuple[Fraction, ...]

    @staticmethod
    def const(value: Number, nparams: int) -> "QExponent":
        return QExponent(Fraction(value), (Fraction(0),) * nparams)

    @staticmethod
    def param(i: int, nparams: int, scale: Number = 1) -> "QExponent":
        c = [Fraction(0)] * nparams
        c[i] = Fraction(scale)
        return QExponent(Fraction(0), tuple(c))

    def __add__(self, other: "QExponent") -> "QExponent":
        if isinstance(other, (int, Fraction)):
            return QExponent(self.pure + other, self.coeffs)
        return QExponent(self.pure + other.pure,
                         tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "QExponent":
        return QExponent(-self.pure, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QExponent") -> "QExponent":
        return self + (-other)

    def __mul__(self, s: Number) -> "QExponent":
        s = Fraction(s)
        return QExponent(self.pure * s, tuple(c * s for c in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.pure == 0 and not any(self.coeffs)

    def __str__(self) -> str:
        parts = [str(self.pure)] if self.pure else []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*k{i + 1}")
        return "+".join(parts) or "0"


class QField(Field):
    """``Q(qs, u1, ..., ur)`` with ``q = qs**(2e)`` and ``ui = q**(ki/2)``."""

    _qcache: Dict[Tuple[int, int], "QField"] = {}

    def __new__(cls, e: int, nparams: int):
        if (e, nparams) in cls._qcache:
            return cls._qcache[e, nparams]
        self = object.__new__(cls)
        self._setup(("qs",) + tuple(f"u{i + 1}" for i in range(nparams)))
        self.e = e
        self.nparams = nparams
        cls._qcache[e, nparams] = self
        return self

    def __repr__(self) -> str:
        return f"QField(e={self.e}, params={self.nparams})"

    def __reduce__(self):
        return (QField, (self.e, self.nparams))

    def exponent_vector(self, x: QExponent) -> Tuple[int, ...]:
        qs = x.pure * 2 * self.e
        us = [c * 2 for c in x.coeffs]
        if qs.denominator != 1 or any(u.denominator != 1 for u in us):
            raise NonRepresentableExponent(f"q^({x}) with e={self.e}")
        return (int(qs),) + tuple(int(u) for u in us)

    def q_power(self, x: QExponent | Number, coeff: Number = 1) -> RatFunc:
        """``coeff * q**x`` as a Laurent monomial."""
        if not isinstance(x, QExponent):
            x = QExponent.const(x, self.nparams)
        return self.monomial(self.exponent_vector(x), coeff)

    def q(self) -> RatFunc:
        return self.q_power(1)

    def aliases(self) -> Dict[str, RatFunc]:
        """Names accepted by :meth:`parse` besides the generators: ``q`` and ``ti = ui**2``."""
        out = {"q": self.q()}
        for i in range(self.nparams):
            out[f"t{i + 1}"] = self.gen(f"u{i + 1}") ** 2
        return out

    def parse(self, text, aliases=None):
        al = self.aliases()
        if aliases:
            al.update(aliases)
        return Field.parse(self, text, al)

    def star(self, x: RatFunc) -> RatFunc:
        """Invert ``qs`` and every ``ui``."""
        return x.monomial_map({n: tuple(-1 if j == i else 0 for j in range(len(self.names)))
                               for i, n in enumerate(self.names)})

    def shift_params(self, x: RatFunc, shifts: Sequence[Number]) -> RatFunc:
        """Replace ``k_i`` by ``k_i + shifts[i]`` (integers), i.e. ``ui -> ui * q**(shift/2)``."""
        images = {}
        nv = len(self.names)
        for i, s in enumerate(shifts):
            if s:
                qs = Fraction(s) * self.e
                if qs.denominator != 1:
                    raise NonRepresentableExponent(f"shift {s} with e={self.e}")
                vec = [0] * nv
                vec[0] = int(qs)
                vec[i + 1] = 1
                images[f"u{i + 1}"] = tuple(vec)
        return x.monomial_map(images) if images else x

    def specialize_params(self, x: RatFunc, ks: Sequence[Number]) -> RatFunc:
        """Set ``k_i`` to rational values, leaving only ``qs`` symbolic."""
        images = {}
        nv = len(self.names)
        for i, kv in enumerate(ks):
            qs = Fraction(kv) * self.e
            if qs.denominator != 1:
                raise NonRepresentableExponent(f"k={kv} with e={self.e}")
            vec = [0] * nv
            vec[0] = int(qs)
            images[f"u{i + 1}"] = tuple(vec)
        return x.monomial_map(images)


def parse_scalar(field: Field, text: str) -> RatFunc:
    return field.parse(text)


def serialize(x: RatFunc) -> str:
    return str(x)


def as_fraction_tuple(values: Iterable[Number]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)
