"""Finite root systems, Weyl groups, linear characters and weight combinatorics.

Coordinates
-----------
Every vector of the ambient space is written in the basis of fundamental
weights ``omega_i`` of the reduced system ``R0`` (the roots ``a`` with ``2a``
not a root).  Weights of ``P`` therefore have integer coordinates, and the
i-th coordinate of a vector ``x`` equals ``(x, a_i^vee)`` for the i-th simple
coroot.  The inner product is ``x^T G y`` with ``G_ij = (omega_i, omega_j)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

Weight = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]


class UnsupportedType(ValueError):
    pass


# Roots in an orthonormal epsilon basis, the simple roots of R0, and one root
# per W-orbit in the order that fixes the names k1, k2, ...
_CATALOG = {
    "A1": dict(
        dim=2,
        roots=[(1, -1), (-1, 1)],
        simple=[(1, -1)],
        orbit_reps=[(1, -1)],
    ),
    "A2": dict(
        dim=3,
        roots=[(1, -1, 0), (0, 1, -1), (1, 0, -1), (-1, 1, 0), (0, -1, 1), (-1, 0, 1)],
        simple=[(1, -1, 0), (0, 1, -1)],
        orbit_reps=[(1, -1, 0)],
    ),
    "B2": dict(
        dim=2,
        roots=[(1, -1), (-1, 1), (1, 1), (-1, -1), (1, 0), (-1, 0), (0, 1), (0, -1)],
        simple=[(1, -1), (0, 1)],
        orbit_reps=[(1, -1), (0, 1)],
    ),
    "C2": dict(
        dim=2,
        roots=[(1, -1), (-1, 1), (1, 1), (-1, -1), (2, 0), (-2, 0), (0, 2), (0, -2)],
        simple=[(1, -1), (0, 2)],
        orbit_reps=[(1, -1), (0, 2)],
    ),
    "BC1": dict(
        dim=1,
        roots=[(1,), (-1,), (2,), (-2,)],
        simple=[(2,)],
        orbit_reps=[(1,), (2,)],
    ),
    "BC2": dict(
        dim=2,
        roots=[(1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (-2, 0), (0, 2), (0, -2),
               (1, -1), (-1, 1), (1, 1), (-1, -1)],
        simple=[(1, -1), (0, 2)],
        orbit_reps=[(1, 0), (2, 0), (1, -1)],
    ),
}

SUPPORTED_TYPES = tuple(_CATALOG)


def _dot(x: Sequence, y: Sequence):
    return sum(Fraction(a) * b for a, b in zip(x, y))


def mat_vec(m: Matrix, v: Sequence):
    """Integer matrix times a vector of any ring elements supporting ``int * x``."""
    out = []
    for row in m:
        acc = 0
        for a, x in zip(row, v):
            if a:
                acc = acc + a * x
        out.append(acc)
    return tuple(out)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True, eq=False)
class WeylElt:
    """A Weyl group element: a reduced word (1-based indices) and its matrix."""

    word: Tuple[int, ...]
    matrix: Matrix

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other):
        return isinstance(other, WeylElt) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __call__(self, v: Sequence):
        return mat_vec(self.matrix, v)

    def __str__(self) -> str:
        return " ".join(f"s{i}" for i in self.word) or "e"

    __repr__ = __str__


class RootSystem:
    """One member of the fixed catalog, with its Weyl group."""

    def __init__(self, label: str):
        if label not in _CATALOG:
            raise UnsupportedType(f"unsupported root system {label!r}")
        data = _CATALOG[label]
        self.label = label
        eps_roots = [tuple(Fraction(c) for c in r) for r in data["roots"]]
        eps_simple = [tuple(Fraction(c) for c in r) for r in data["simple"]]
        self.rank = len(eps_simple)
        self.ambient_dim = data["dim"]

        def coroot(a):
            n = _dot(a, a)
            return tuple(2 * c / n for c in a)

        cor = [coroot(a) for a in eps_simple]
        # fundamental weights: omega_i = sum_m c_im alpha_m with (omega_i, alpha_j^vee) = delta
        A = sympy.Matrix(self.rank, self.rank, lambda m, j: sympy.Rational(str(_dot(eps_simple[m], cor[j]))))
        Ainv = A.inv()
        omegas = []
        for i in range(self.rank):
            vec = [Fraction(0)] * self.ambient_dim
            for m in range(self.rank):
                c = Fraction(str(Ainv[i, m]))
                vec = [v + c * s for v, s in zip(vec, eps_simple[m])]
            omegas.append(tuple(vec))
        self.gram: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(_dot(omegas[i], omegas[j]) for j in range(self.rank)) for i in range(self.rank)
        )

        def to_omega(v):
            vals = tuple(_dot(v, c) for c in cor)
            return vals

        roots = []
        for r in eps_roots:
            w = to_omega(r)
            if any(x.denominator != 1 for x in w):
                raise AssertionError("root not in P")
            roots.append(tuple(int(x) for x in w))
        self.roots: Tuple[Weight, ...] = tuple(roots)
        rootset = set(self.roots)
        self.simple: Tuple[Weight, ...] = tuple(tuple(int(x) for x in to_omega(a)) for a in eps_simple)
        self.reduced_roots = tuple(a for a in self.roots if tuple(2 * x for x in a) not in rootset)
        # positivity: a regular dominant functional, (a, rho0^vee) > 0
        self._pos_probe = tuple(Fraction(1) for _ in range(self.rank))
        self.positive_roots = tuple(a for a in self.roots if self._positivity(a) > 0)
        self.positive_reduced = tuple(a for a in self.positive_roots if a in set(self.reduced_roots))
        # simple roots of the indivisible system span the dominance cone
        indiv = [a for a in self.positive_roots
                 if not all(x % 2 == 0 for x in a) or tuple(x // 2 for x in a) not in rootset]
        self.indivisible_simple = tuple(
            a for a in indiv
            if not any(_is_sum(a, b, c) for b in indiv for c in indiv)
        )
        # orbits, named by the catalog representatives
        self._eps_to_omega = to_omega
        self.group = WeylGroup(self)
        reps = [tuple(int(x) for x in to_omega(tuple(Fraction(c) for c in r))) for r in data["orbit_reps"]]
        self.orbit_of: Dict[Weight, int] = {}
        for idx, rep in enumerate(reps):
            for w in self.group.elements:
                self.orbit_of[w(rep)] = idx
        assert set(self.orbit_of) == rootset
        self.n_orbits = len(reps)
        self.orbit_reps = tuple(reps)
        self._simple_root_inv = sympy.Matrix(
            [[sympy.Integer(x) for x in a] for a in self.indivisible_simple]
        ).T.inv()

    def __repr__(self):
        return f"RootSystem({self.label})"

    def __reduce__(self):
        return (build_root_system, (self.label,))

    # geometry -------------------------------------------------------------
    def inner(self, x: Sequence, y: Sequence):
        acc = 0
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            row = self.gram[i]
            s = 0
            for j, yj in enumerate(y):
                if row[j]:
                    s = s + row[j] * yj
            acc = acc + xi * s
        return acc

    def coroot(self, a: Sequence) -> Tuple[Fraction, ...]:
        n = self.inner(a, a)
        return tuple(Fraction(2 * x) / n for x in a)

    def pairing(self, x: Sequence, a: Weight):
        """``(x, a^vee)``."""
        return self.inner(x, self.coroot(a))

    def _positivity(self, a):
        return sum(a_i * p for a_i, p in zip(self.dual_coords(a), self._pos_probe))

    def dual_coords(self, a):
        # (a, omega_i) pairs positive with the fundamental chamber
        return tuple(self.inner(a, tuple(1 if j == i else 0 for j in range(self.rank)))
                     for i in range(self.rank))

    def is_positive(self, a: Weight) -> bool:
        return self._positivity(a) > 0

    def reflect(self, x: Sequence, a: Weight):
        c = self.pairing(x, a)
        return tuple(xi - c * ai for xi, ai in zip(x, a))

    def half(self, a: Weight) -> Optional[Weight]:
        if all(x % 2 == 0 for x in a):
            h = tuple(x // 2 for x in a)
            if h in self.orbit_of:
                return h
        return None

    def double(self, a: Weight) -> Optional[Weight]:
        d = tuple(2 * x for x in a)
        return d if d in self.orbit_of else None

    def simple_root_coords(self, v: Sequence) -> Tuple[Fraction, ...]:
        """Coordinates of ``v`` in the simple roots of the indivisible system."""
        vec = sympy.Matrix([sympy.Rational(str(Fraction(x))) for x in v])
        sol = self._simple_root_inv * vec
        return tuple(Fraction(str(c)) for c in sol)

    def to_omega(self, eps_vector: Sequence) -> Tuple[Fraction, ...]:
        """Convert a vector in the orthonormal epsilon basis to omega coordinates."""
        return self._eps_to_omega(tuple(Fraction(c) for c in eps_vector))

    # weights -------------------------------------------------------------
    def is_dominant(self, lam: Sequence) -> bool:
        return all(x >= 0 for x in lam)

    def dominant(self, mu: Weight) -> Weight:
        return self.decompose(mu).dominant

    def decompose(self, mu: Weight) -> "Decomposition":
        return _decompose(self.label, tuple(mu))

    def height(self, mu: Weight) -> int:
        """Sum of the fundamental-weight coordinates of the dominant representative."""
        return sum(self.dominant(mu))

    def orbit(self, lam: Weight) -> List[Weight]:
        seen = []
        for w in self.group.elements:
            v = w(lam)
            if v not in seen:
                seen.append(v)
        return seen

    def dominance_leq(self, lam: Weight, mu: Weight) -> bool:
        diff = tuple(m - l for l, m in zip(lam, mu))
        c = self.simple_root_coords(diff)
        return all(x.denominator == 1 and x >= 0 for x in c)

    def order_leq(self, lam: Weight, mu: Weight) -> bool:
        dl, dm = self.decompose(lam), self.decompose(mu)
        if dl.dominant == dm.dominant:
            return self.group.bruhat_leq(dl.vbar, dm.vbar)
        return self.dominance_leq(dl.dominant, dm.dominant)

    def dominant_below(self, lam: Weight) -> List[Weight]:
        """Dominant weights ``nu`` with ``nu <= lam`` in dominance (``lam`` dominant)."""
        coords = self.simple_root_coords(lam)
        bounds = [int(c) if c >= 0 else -1 for c in coords]
        out = []
        for cs in product(*[range(b + 1) for b in bounds]):
            nu = list(lam)
            for c, a in zip(cs, self.indivisible_simple):
                nu = [x - c * y for x, y in zip(nu, a)]
            if all(x >= 0 for x in nu):
                out.append(tuple(nu))
        return out

    def cone(self, mu: Weight) -> List[Weight]:
        """All ``nu <= mu``, listed with larger weights first where comparable."""
        return list(_cone(self.label, tuple(mu)))

    def window(self, height: int) -> List[Weight]:
        """All weights whose dominant representative has height at most ``height``."""
        out = []
        for lam in product(range(height + 1), repeat=self.rank):
            if sum(lam) <= height:
                out.extend(self.orbit(tuple(lam)))
        return sorted(set(out), key=lambda m: (self.height(m), m))

    # characters ------------------------------------------------------------
    def linear_characters(self) -> List["LinearCharacter"]:
        return _characters(self.label)

    def character(self, name: str) -> "LinearCharacter":
        for c in self.linear_characters():
            if c.name == name:
                return c
        raise UnsupportedType(f"character {name!r} not available for {self.label}")

    def rho(self, k: Sequence) -> tuple:
        """``1/2 sum_{a in R+} k(a) a`` for orbit values ``k``."""
        acc = [0] * self.rank
        for a in self.positive_roots:
            kv = k[self.orbit_of[a]]
            for i in range(self.rank):
                if a[i]:
                    acc[i] = acc[i] + kv * Fraction(a[i], 2)
        return tuple(acc)

    def spectral_vector(self, lam: Weight, k: Sequence) -> tuple:
        """``r_k(lam) = lam + 1/2 sum_{a>0} k(a) sgn((lam, a^vee)) a`` with ``sgn(0) = -1``."""
        acc = list(lam)
        for a in self.positive_roots:
            s = 1 if self.pairing(lam, a) > 0 else -1
            kv = k[self.orbit_of[a]]
            for i in range(self.rank):
                if a[i]:
                    acc[i] = acc[i] + kv * Fraction(s * a[i], 2)
        return tuple(acc)

    def mu_shifted(self, mu: Weight, shift: Sequence, sign: int) -> Weight:
        """``vbar(mu) w_lam (lam - sign * shift)``; ``sign=+1`` is the forward direction."""
        d = self.decompose(mu)
        v = tuple(l - sign * s for l, s in zip(d.dominant, shift))
        out = d.vbar(d.w_lam(v))
        if any(Fraction(x).denominator != 1 for x in out):
            raise ValueError("shifted weight is not integral")
        return tuple(int(x) for x in out)

    def same_antidominant_element(self, mu: Weight, nu: Weight) -> bool:
        return self.decompose(mu).v == self.decompose(nu).v

    def parse_weight(self, text: str) -> Weight:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != self.rank:
            raise ValueError(f"weight {text!r} needs {self.rank} coordinates")
        return tuple(int(p) for p in parts)


def _is_sum(a, b, c) -> bool:
    return all(x == y + z for x, y, z in zip(a, b, c))


class WeylGroup:
    """All elements with reduced words found by breadth-first search."""

    def __init__(self, R: RootSystem):
        n = R.rank
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self.generators: List[Matrix] = []
        for i, a in enumerate(R.simple):
            m = tuple(
                tuple(int(r == c) - (a[r] if c == i else 0) for c in range(n)) for r in range(n)
            )
            self.generators.append(m)
        start = WeylElt((), ident)
        self.elements: List[WeylElt] = [start]
        index = {ident: start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i, g in enumerate(self.generators):
                m = mat_mul(w.matrix, g)
                if m not in index:
                    u = WeylElt(w.word + (i + 1,), m)
                    index[m] = u
                    self.elements.append(u)
                    queue.append(u)
        self._index = index
        self.identity = start
        self.w0 = max(self.elements, key=lambda w: w.length)
        self._below: Dict[Matrix, frozenset] = {}
        self.rank = n

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def element(self, matrix: Matrix) -> WeylElt:
        return self._index[matrix]

    def from_word(self, word: Iterable[int]) -> WeylElt:
        m = self.identity.matrix
        for i in word:
            m = mat_mul(m, self.generators[i - 1])
        return self._index[m]

    def parse(self, text: str) -> WeylElt:
        toks = text.replace(",", " ").split()
        if toks in (["e"], []):
            return self.identity
        return self.from_word(int(t.lstrip("s")) for t in toks)

    def mul(self, a: WeylElt, b: WeylElt) -> WeylElt:
        return self._index[mat_mul(a.matrix, b.matrix)]

    def inverse(self, a: WeylElt) -> WeylElt:
        return self.from_word(reversed(a.word))

    def simple(self, i: int) -> WeylElt:
        return self.from_word([i])

    def below(self, w: WeylElt) -> frozenset:
        if w.matrix not in self._below:
            mats = set()
            for mask in product((0, 1), repeat=w.length):
                sub = [i for i, keep in zip(w.word, mask) if keep]
                mats.add(self.from_word(sub).matrix)
            self._below[w.matrix] = frozenset(mats)
        return self._below[w.matrix]

    def bruhat_leq(self, u: WeylElt, w: WeylElt) -> bool:
        return u.matrix in self.below(w)


@dataclass(frozen=True)
class Decomposition:
    """``mu = vbar * dominant`` with the canonical shortest elements."""

    mu: Weight
    dominant: Weight
    vbar: WeylElt
    v: WeylElt
    w_lam: WeylElt
    stabilizer: Tuple[WeylElt, ...]


@lru_cache(maxsize=None)
def build_root_system(label: str) -> RootSystem:
    return RootSystem(label)


@lru_cache(maxsize=None)
def _decompose(label: str, mu: Weight) -> Decomposition:
    R = build_root_system(label)
    G = R.group
    lam = list(mu)
    while True:
        neg = [i for i, x in enumerate(lam) if x < 0]
        if not neg:
            break
        lam = list(R.reflect(lam, R.simple[neg[0]]))
    lam = tuple(int(x) for x in lam)
    by_len = sorted(G.elements, key=lambda w: (w.length, w.word))
    vbar = next(w for w in by_len if w(lam) == mu)
    anti = G.w0(lam)
    v = next(w for w in by_len if w(mu) == anti)
    stab = tuple(w for w in by_len if w(lam) == lam)
    w_lam = max(stab, key=lambda w: w.length)
    return Decomposition(mu, lam, vbar, v, w_lam, stab)


@lru_cache(maxsize=None)
def _cone(label: str, mu: Weight) -> Tuple[Weight, ...]:
    R = build_root_system(label)
    d = R.decompose(mu)
    out = []
    for nu_plus in R.dominant_below(d.dominant):
        for nu in R.orbit(nu_plus):
            if nu_plus == d.dominant and not R.group.bruhat_leq(R.decompose(nu).vbar, d.vbar):
                continue
            out.append(nu)
    # sort from the top: larger dominant part, then longer vbar
    def key(nu):
        dn = R.decompose(nu)
        return (-sum(R.simple_root_coords(dn.dominant)), -dn.vbar.length, nu)

    return tuple(sorted(out, key=key))


# ---------------------------------------------------------------------------
# linear characters


@dataclass(frozen=True)
class LinearCharacter:
    """A linear character of W given by its sign on each reflection orbit."""

    name: str
    system: str
    signs: Tuple[int, ...]  # value of eps(r_a) for a in orbit i of R

    @property
    def R(self) -> RootSystem:
        return build_root_system(self.system)

    def on_root(self, a: Weight) -> int:
        return self.signs[self.R.orbit_of[a]]

    def __call__(self, w: WeylElt) -> int:
        R = self.R
        s = 1
        for i in w.word:
            s *= self.on_root(R.simple[i - 1])
        return s

    @property
    def l(self) -> Tuple[int, ...]:
        """Shift multiplicity: 1 on orbits inside R0 where the sign is -1."""
        R = self.R
        red = set(R.reduced_roots)
        return tuple(
            int(self.signs[i] == -1 and R.orbit_reps[i] in red) for i in range(R.n_orbits)
        )

    def l_of(self, a: Weight) -> int:
        return self.l[self.R.orbit_of[a]]

    @property
    def rho_l(self) -> Weight:
        v = self.R.rho(self.l)
        return tuple(int(x) for x in v)

    def is_trivial(self) -> bool:
        return all(s == 1 for s in self.signs)


@lru_cache(maxsize=None)
def _characters(label: str) -> List[LinearCharacter]:
    R = build_root_system(label)
    red = set(R.reduced_roots)
    # group R-orbits by their reflection class: a and 2a give the same reflection
    cls = []
    for i, rep in enumerate(R.orbit_reps):
        h = R.half(rep)
        cls.append(R.orbit_of[h] if h is not None else i)
    classes = sorted(set(cls))
    out = []
    for vals in product((1, -1), repeat=len(classes)):
        signs = tuple(vals[classes.index(c)] for c in cls)
        out.append(signs)
    named = []
    for signs in out:
        if all(s == 1 for s in signs):
            name = "triv"
        elif all(s == -1 for s in signs):
            name = "sign"
        else:
            # which R0 roots flip sign: short or long ones
            flipped = [R.orbit_reps[i] for i in range(R.n_orbits) if signs[i] == -1 and R.orbit_reps[i] in red]
            kept = [R.orbit_reps[i] for i in range(R.n_orbits) if signs[i] == 1 and R.orbit_reps[i] in red]
            name = "eps-short" if R.inner(flipped[0], flipped[0]) < R.inner(kept[0], kept[0]) else "eps-long"
        named.append(LinearCharacter(name, label, signs))
    order = {"triv": 0, "sign": 1, "eps-short": 2, "eps-long": 3}
    return sorted(named, key=lambda c: order[c.name])


def linear_characters(R: RootSystem) -> List[LinearCharacter]:
    return R.linear_characters()


def dominant_decomposition(R: RootSystem, mu: Weight) -> Decomposition:
    return R.decompose(mu)


def order_leq(R: RootSystem, lam: Weight, mu: Weight) -> bool:
    return R.order_leq(lam, mu)
