"""Command-line interface: polynomials, shift-operator images and verification suites.

Exit codes: 0 success (all identities hold), 1 a verified identity failed,
2 malformed input or configuration.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import cherednik as ch
from . import qaffine as qa
from . import qshift as qs
from . import shiftdiff as sd
from .galg import DivisionRemainder, GAElem, ct_pairing, exact_divide, weyl_denominator
from .scalars import ParseError, QExponent
from .weyl import UnsupportedType, build_root_system

DIFF_SUITES = ("hecke", "commute", "eigen", "shift-principle", "transmutation", "shift-factor",
               "sym-shift", "adjoint", "norms")
Q_SUITES = ("q-hecke", "q-eigen", "q-transmutation", "q-shift-principle", "q-sym-shift")
ALL_SUITES = DIFF_SUITES + Q_SUITES + ("all",)
INTEGER_SUITES = ("adjoint", "norms")


class ConfigError(ValueError):
    pass


class UnavailableCharacter(ConfigError):
    pass


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckResult:
    identity: str
    passed: bool
    checked: int
    counterexample: Optional[dict] = None
    notes: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"identity": self.identity, "passed": self.passed, "checked": self.checked,
               "counterexample": self.counterexample}
        if self.notes:
            out["notes"] = self.notes
        return out


@dataclass
class VerificationReport:
    suite: str
    case: Dict[str, object]
    results: List[CheckResult]
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {"suite": self.suite, "case": self.case, "passed": self.passed,
                "results": [r.to_json() for r in self.results], "wall_time": self.wall_time}

    @staticmethod
    def from_json(data: dict) -> "VerificationReport":
        results = [CheckResult(r["identity"], r["passed"], r["checked"], r["counterexample"], r.get("notes", {}))
                   for r in data["results"]]
        return VerificationReport(data["suite"], data["case"], results, data["wall_time"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _ser(x) -> object:
    if isinstance(x, GAElem):
        return x.to_json()
    if isinstance(x, (tuple, list)):
        return [_ser(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _ser(v) for k, v in x.items()}
    if isinstance(x, (int, str)) or x is None:
        return x
    return str(x)


class Recorder:
    """Counts checks of one identity and keeps the first counterexample."""

    def __init__(self, identity: str):
        self.identity = identity
        self.count = 0
        self.counter: Optional[dict] = None
        self.notes: Dict[str, object] = {}

    def check(self, ok: bool, inputs: dict, lhs=None, rhs=None) -> bool:
        self.count += 1
        if not ok and self.counter is None:
            self.counter = {"inputs": _ser(inputs), "lhs": _ser(lhs), "rhs": _ser(rhs)}
        return ok

    def result(self) -> CheckResult:
        return CheckResult(self.identity, self.counter is None, self.count, self.counter, self.notes)


# ---------------------------------------------------------------------------
# context


@dataclass
class Context:
    kind: str  # "diff" or "q"
    label: str
    window: int
    k_text: Optional[str]
    chars: Optional[List[str]]
    directions: List[int]

    @property
    def R(self):
        return build_root_system(self.label) if self.kind == "diff" else qa.build_affine_pair(self.label).R

    @property
    def pair(self):
        return qa.build_affine_pair(self.label)

    def diff_k(self):
        return ch.parse_multiplicity(self.R, self.k_text)

    def q_k(self):
        return qa.parse_qmult(self.pair, self.k_text)

    def characters(self):
        R = self.R
        if self.chars is None:
            return R.linear_characters()
        out = []
        for name in self.chars:
            try:
                out.append(R.character(name))
            except UnsupportedType as exc:
                raise UnavailableCharacter(str(exc)) from exc
        return out

    def describe(self) -> dict:
        return {"kind": self.kind, ("type" if self.kind == "diff" else "pair"): self.label,
                "window": self.window, "parameters": self.k_text or "symbolic",
                "characters": [c.name for c in self.characters()],
                "directions": ["forward" if d > 0 else "backward" for d in self.directions]}


def _dominant_window(R, window):
    return [m for m in R.window(window) if R.is_dominant(m)]


def _basis_vectors(n):
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


# ---------------------------------------------------------------------------
# differential suites


def suite_hecke(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    rec = Recorder("graded Hecke relation r_i T_xi = T_{r_i xi} r_i - k0(a_i)(xi, a_i)")
    weights = R.window(ctx.window)
    bad = ch.verify_graded_hecke(R, k, weights)
    rec.count = len(weights) * R.rank * R.rank
    if bad is not None:
        rec.counter = {"inputs": _ser(bad), "lhs": None, "rhs": None}
    return [rec.result()]


def suite_commute(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    ops = ch.CherednikOperators(R, k)
    rec = Recorder("T_xi T_eta = T_eta T_xi")
    tri = Recorder("T_xi e^mu lies in the span of e^nu with nu <= mu")
    for mu in R.window(ctx.window):
        f = GAElem.monomial(mu, 1)
        cone = set(R.cone(mu))
        for i in range(R.rank):
            img = ops.coord(i, f)
            tri.check(set(img.terms) <= cone, {"weight": mu, "coordinate": i}, img, None)
        for i in range(R.rank):
            for j in range(i + 1, R.rank):
                lhs = ops.coord(i, ops.coord(j, f))
                rhs = ops.coord(j, ops.coord(i, f))
                rec.check(lhs == rhs, {"weight": mu, "i": i, "j": j}, lhs, rhs)
    return [rec.result(), tri.result()]


def suite_eigen(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    ops = ch.CherednikOperators(R, k)
    eig = Recorder("T_xi E_mu = (xi, r_k(mu)) E_mu")
    tri = Recorder("E_mu = e^mu + lower terms")
    out = [eig, tri]
    integer = all(isinstance(v, Fraction) for v in k)
    gs = Recorder("E_mu is orthogonal to every lower e^nu (Gram-Schmidt)") if integer else None
    for mu in R.window(ctx.window):
        E = ch.nonsym_E(R, mu, k)
        r = R.spectral_vector(mu, k)
        for i in range(R.rank):
            lhs = ops.coord(i, E)
            rhs = E.scale(r[i])
            eig.check(lhs == rhs, {"weight": mu, "coordinate": i}, lhs, rhs)
        cone = set(R.cone(mu))
        tri.check(E.coeff(mu) == 1 and set(E.terms) <= cone, {"weight": mu}, E, None)
        if gs is not None:
            for nu in cone - {mu}:
                v = ct_pairing(R, E, GAElem.monomial(nu, Fraction(1)), k)
                gs.check(v == 0, {"weight": mu, "lower": nu}, v, 0)
    if gs is not None:
        out.append(gs)
    return [r.result() for r in out]


def suite_shift_principle(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    rec = Recorder("P_{lam - rho_l}(k + l) = Delta_eps^-1 P^(eps)_lam(k)")
    for eps in ctx.characters():
        for lam in _dominant_window(R, ctx.window):
            low = tuple(a - b for a, b in zip(lam, eps.rho_l))
            if not R.is_dominant(low):
                continue
            Pe = ch.sym_P(R, lam, eps, k)
            try:
                rhs = exact_divide(Pe, weyl_denominator(R, eps))
            except DivisionRemainder:
                rhs = "not divisible"
            lhs = ch.sym_P(R, low, R.character("triv"), k.shifted(eps.l))
            rec.check(lhs == rhs, {"character": eps.name, "weight": lam}, lhs, rhs)
    return [rec.result()]


def suite_transmutation(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    rec = Recorder("G_pm(k) T_xi(k) = T_xi(k pm l) G_pm(k)")
    for eps in ctx.characters():
        for sign in ctx.directions:
            src = ch.CherednikOperators(R, k)
            dst = ch.CherednikOperators(R, k.shifted(eps.l, sign))
            for mu in R.window(ctx.window):
                f = GAElem.monomial(mu, 1)
                g = sd.nonsym_shift_apply(R, eps, sign, k, f)
                for i in range(R.rank):
                    lhs = sd.nonsym_shift_apply(R, eps, sign, k, src.coord(i, f))
                    rhs = dst.coord(i, g)
                    rec.check(lhs == rhs, {"character": eps.name, "direction": sign, "weight": mu,
                                           "coordinate": i}, lhs, rhs)
    return [rec.result()]


def suite_shift_factor(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    act = Recorder("G_pm E_mu(k) = H_pm(mu, k) E_{mu_pm}(k pm l)")
    forms = Recorder("c-function form of H equals the product form")
    for eps in ctx.characters():
        for sign in ctx.directions:
            kt = k.shifted(eps.l, sign)
            for mu in R.window(ctx.window):
                H = sd.shift_factor(R, mu, eps, sign, k)
                Hp = sd.shift_factor_product(R, mu, eps, sign, k)
                inputs = {"character": eps.name, "direction": sign, "weight": mu}
                forms.check(H == Hp, inputs, H, Hp)
                lhs = sd.nonsym_shift_apply(R, eps, sign, k, ch.nonsym_E(R, mu, k))
                target = sd.shifted_weight(R, mu, eps, sign)
                rhs = ch.nonsym_E(R, target, kt).scale(H)
                act.check(lhs == rhs, inputs, lhs, rhs)
    return [act.result(), forms.result()]


def suite_sym_shift(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, ctx.diff_k()
    sym = Recorder("G_+ P_lam(k) = h_+(lam, k) P_{lam - rho_l}(k + l)")
    res = Recorder("sign character: non-symmetric G_+ on P_lam equals h_+ P_{lam - rho_l}(k + l)")
    triv = R.character("triv")
    for eps in ctx.characters():
        kt = k.shifted(eps.l)
        for lam in _dominant_window(R, ctx.window):
            P = ch.sym_P(R, lam, triv, k)
            low = tuple(a - b for a, b in zip(lam, eps.rho_l))
            target = ch.sym_P(R, low, triv, kt) if R.is_dominant(low) else GAElem()
            h = sd.sym_shift_factor(R, lam, eps, k)
            lhs = sd.sym_shift_apply(R, eps, k, P)
            sym.check(lhs == target.scale(h), {"character": eps.name, "weight": lam}, lhs, target.scale(h))
            if eps.name == "sign":
                lhs2 = sd.nonsym_shift_apply(R, eps, 1, k, P)
                res.check(lhs2 == target.scale(h), {"weight": lam}, lhs2, target.scale(h))
    return [sym.result(), res.result()]


def _require_integer_k(ctx: Context):
    k = ctx.diff_k()
    if not all(isinstance(v, Fraction) and v.denominator == 1 and v >= 0 for v in k):
        raise ConfigError("this suite needs nonnegative integer multiplicities (--k)")
    return k


def suite_adjoint(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, _require_integer_k(ctx)
    rec = Recorder("(G_+(k) f, g)_{k+l} = (f, G_-(k+l) g)_k")
    weights = R.window(ctx.window)
    for eps in ctx.characters():
        if eps.is_trivial():
            continue
        bad = sd.adjoint_check(R, eps, k, weights)
        rec.count += len(weights) ** 2
        if bad and rec.counter is None:
            a, b, lhs, rhs = bad[0]
            rec.counter = {"inputs": _ser({"character": eps.name, "f": a, "g": b}), "lhs": _ser(lhs),
                           "rhs": _ser(rhs)}
    return [rec.result()]


def suite_norms(ctx: Context) -> List[CheckResult]:
    R, k = ctx.R, _require_integer_k(ctx)
    rec = Recorder("||E_mu(k)||^2 / ||E_{mu_-}(k - l)||^2 = H_-(mu, k) / H_+(mu_-, k - l)")
    table = []
    for eps in ctx.characters():
        if eps.is_trivial():
            continue
        km = k.shifted(eps.l, -1)
        if any(v < 0 for v in km):
            continue
        for mu in R.window(ctx.window):
            lam = R.decompose(mu).dominant
            if any(R.pairing(lam, a) == 0 for a in R.positive_reduced):
                continue
            nu = sd.shifted_weight(R, mu, eps, -1)
            oracle = sd.norm_sq(R, mu, k) / sd.norm_sq(R, nu, km)
            formula = sd.norm_ratio(R, mu, eps, k)
            table.append({"character": eps.name, "weight": list(mu), "ratio": str(formula)})
            rec.check(oracle == formula, {"character": eps.name, "weight": mu}, oracle, formula)
    rec.notes["ratios"] = table
    return [rec.result()]


# ---------------------------------------------------------------------------
# q suites


def suite_q_hecke(ctx: Context) -> List[CheckResult]:
    P, k = ctx.pair, ctx.q_k()
    ops = qa.QOperators(P, k)
    quad = Recorder("(T_i - tau_i)(T_i + tau_i^-1) = 0")
    braid = Recorder("braid relations")
    n = P.rank + 1
    mij = _affine_braid_orders(P)
    for mu in P.R.window(ctx.window):
        f = GAElem.monomial(mu, P.field.one())
        for i in range(n):
            Tf = ops.T(i, f)
            lhs = ops.T(i, Tf) - Tf.scale(ops.tau[i] - ops.tau_inv[i]) - f
            quad.check(lhs.is_zero(), {"weight": mu, "i": i}, lhs, 0)
        for (i, j), m in mij.items():
            a, b = f, f
            for t in range(m):
                a = ops.T(i if t % 2 == 0 else j, a)
                b = ops.T(j if t % 2 == 0 else i, b)
            braid.check(a == b, {"weight": mu, "i": i, "j": j}, a, b)
    return [quad.result(), braid.result()]


def _affine_braid_orders(P) -> Dict[tuple, int]:
    """Braid lengths ``m_ij`` of the affine Coxeter graph (``None`` pairs omitted)."""
    out = {}
    n = P.rank + 1
    for i in range(n):
        for j in range(i + 1, n):
            a, b = P.simple[i].grad, P.simple[j].grad
            c = P.coroot_pairing(a, b) * P.coroot_pairing(b, a)
            m = {0: 2, 1: 3, 2: 4, 3: 6}.get(int(c))
            if m is not None and c.denominator == 1:
                out[(i, j)] = m
    return out


def suite_q_eigen(ctx: Context) -> List[CheckResult]:
    P, k = ctx.pair, ctx.q_k()
    ops = qa.QOperators(P, k)
    comm = Recorder("Y^lam' Y^mu' = Y^mu' Y^lam'")
    eig = Recorder("Y^lam' E_mu = q^(-<lam', r_{k'}(mu)>) E_mu")
    sym = Recorder("Y^{f'} P_lam = f'(-lam - rho_{k'}) P_lam for invariant f'")
    cows = P.fundamental_coweights()
    cows = cows + [tuple(-x for x in c) for c in cows]
    for mu in P.R.window(ctx.window):
        f = GAElem.monomial(mu, P.field.one())
        for i, a in enumerate(cows):
            for b in cows[i + 1:]:
                lhs = ops.Y(a, ops.Y(b, f))
                rhs = ops.Y(b, ops.Y(a, f))
                comm.check(lhs == rhs, {"weight": mu, "lam": a, "mu": b}, lhs, rhs)
        E = qa.nonsym_E_q(P, mu, k)
        for a in cows:
            lhs = ops.Y(a, E)
            rhs = E.scale(qa.y_eigenvalue(P, a, mu, k))
            eig.check(lhs == rhs, {"weight": mu, "lam": a}, lhs, rhs)
    triv = P.R.character("triv")
    invariants = []
    for c in P.fundamental_coweights():
        orbit = {P.act_lp(w, c) for w in P.W0.elements}
        invariants.append(GAElem({o: P.field.one() for o in orbit}))
    for lam in _dominant_window(P.R, ctx.window):
        Pl = qa.sym_P_q(P, lam, triv, k)
        x = tuple(-(r + l) for r, l in zip(P.rho_dual(k), lam))
        for fp in invariants:
            lhs = ops.Y_poly(fp, Pl)
            rhs = Pl.scale(P.eval_lp(fp, x))
            sym.check(lhs == rhs, {"weight": lam, "f": fp}, lhs, rhs)
    return [comm.result(), eig.result(), sym.result()]


def suite_q_transmutation(ctx: Context) -> List[CheckResult]:
    P, k = ctx.pair, ctx.q_k()
    results: List[CheckResult] = []
    outcome: Dict[str, str] = {}
    selected = None
    for variant in ("hecke", "plain"):
        trans = Recorder(f"G_pm(k) Y^lam'(k) = Y^lam'(k pm l^) G_pm(k) [{variant} symmetrizer]")
        act = Recorder(f"G_pm E_mu(k) = H_pm(mu, k) E_mu_pm(k pm l^) [{variant} symmetrizer]")
        for eps in ctx.characters():
            for sign in ctx.directions:
                kt = qs.shifted_mult(P, eps, k, sign)
                src, dst = qa.QOperators(P, k), qa.QOperators(P, kt)
                for mu in P.R.window(ctx.window):
                    inputs = {"character": eps.name, "direction": sign, "weight": mu}
                    f = GAElem.monomial(mu, P.field.one())
                    try:
                        g = qs.q_nonsym_shift_apply(P, eps, sign, k, f, variant)
                        for lp in P.fundamental_coweights():
                            lhs = qs.q_nonsym_shift_apply(P, eps, sign, k, src.Y(lp, f), variant)
                            rhs = dst.Y(lp, g)
                            trans.check(lhs == rhs, dict(inputs, lam=lp), lhs, rhs)
                        lhs = qs.q_nonsym_shift_apply(P, eps, sign, k, qa.nonsym_E_q(P, mu, k), variant)
                    except DivisionRemainder as exc:
                        trans.check(False, inputs, str(exc), None)
                        act.check(False, inputs, str(exc), None)
                        continue
                    H = qs.q_shift_factor(P, mu, eps, sign, k)
                    target = qs.shifted_weight_q(P, mu, eps, sign)
                    rhs = qa.nonsym_E_q(P, target, kt).scale(H)
                    act.check(lhs == rhs, inputs, lhs, rhs)
        t, a = trans.result(), act.result()
        outcome[variant] = "passed" if t.passed and a.passed else "failed"
        if outcome[variant] == "passed" and selected is None:
            selected = variant
            results = [t, a]
        elif variant == "hecke":
            results = [t, a]
    summary = CheckResult("a symmetrizer variant satisfies the transmutation and shift-action identities",
                          selected is not None, len(outcome), None if selected else {"inputs": "no variant passed"},
                          {"selected_variant": selected, "variants": outcome})
    return [summary] + results


def suite_q_shift_principle(ctx: Context) -> List[CheckResult]:
    P, k = ctx.pair, ctx.q_k()
    rec = Recorder("P_{lam - rho~_l}(k + l^) = q^(-k.l/2) delta_{eps,k}^-1 P^(eps)_lam(k)")
    for eps in ctx.characters():
        data = qa.shift_data(P, eps)
        for lam in _dominant_window(P.R, ctx.window):
            low = tuple(a - b for a, b in zip(lam, data.rho_tilde))
            if not P.R.is_dominant(low):
                continue
            Pe = qa.sym_P_q(P, lam, eps, k)
            try:
                rhs = exact_divide(Pe, qs.q_delta_eps(P, eps, k)).scale(
                    P.field.q_power(-(data.k_dot_l(k) * Fraction(1, 2))))
            except DivisionRemainder:
                rhs = "not divisible"
            lhs = qs.symmetric_P(P, low, k.shifted(data.l_wedge))
            rec.check(lhs == rhs, {"character": eps.name, "weight": lam}, lhs, rhs)
    return [rec.result()]


def suite_q_sym_shift(ctx: Context) -> List[CheckResult]:
    P, k = ctx.pair, ctx.q_k()
    sym = Recorder("G_+ P_lam(k) = h_+(lam, k) P_{lam - rho~_l}(k + l^)")
    res = Recorder("sign character: non-symmetric G_+ on P_lam equals h_+ P_{lam - rho~_l}(k + l^)")
    for eps in ctx.characters():
        data = qa.shift_data(P, eps)
        kt = k.shifted(data.l_wedge)
        for lam in _dominant_window(P.R, ctx.window):
            Pl = qs.symmetric_P(P, lam, k)
            low = tuple(a - b for a, b in zip(lam, data.rho_tilde))
            target = qs.symmetric_P(P, low, kt) if P.R.is_dominant(low) else GAElem()
            rhs = target.scale(qs.sym_shift_factor_q(P, lam, eps, k))
            lhs = qs.q_sym_shift(P, eps, k, Pl)
            sym.check(lhs == rhs, {"character": eps.name, "weight": lam}, lhs, rhs)
            if eps.name == "sign":
                lhs2 = qs.q_nonsym_shift_apply(P, eps, 1, k, Pl)
                res.check(lhs2 == rhs, {"weight": lam}, lhs2, rhs)
    return [sym.result(), res.result()]


SUITES: Dict[str, Callable[[Context], List[CheckResult]]] = {
    "hecke": suite_hecke,
    "commute": suite_commute,
    "eigen": suite_eigen,
    "shift-principle": suite_shift_principle,
    "transmutation": suite_transmutation,
    "shift-factor": suite_shift_factor,
    "sym-shift": suite_sym_shift,
    "adjoint": suite_adjoint,
    "norms": suite_norms,
    "q-hecke": suite_q_hecke,
    "q-eigen": suite_q_eigen,
    "q-transmutation": suite_q_transmutation,
    "q-shift-principle": suite_q_shift_principle,
    "q-sym-shift": suite_q_sym_shift,
}


def default_window(kind: str, rank: int) -> int:
    env = os.environ.get("SHIFTOPS_WINDOW")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"SHIFTOPS_WINDOW={env!r} is not an integer") from exc
    if kind == "q":
        return 3
    return 6 if rank == 1 else 4


def run_suite(name: str, ctx: Context, timing: bool = False) -> VerificationReport:
    t0 = time.perf_counter()
    if name == "all":
        names = [s for s in (DIFF_SUITES if ctx.kind == "diff" else Q_SUITES)
                 if s not in INTEGER_SUITES or ctx.k_text not in (None, "symbolic")]
    else:
        names = [name]
    results: List[CheckResult] = []
    for n in names:
        if (n in Q_SUITES) != (ctx.kind == "q"):
            raise ConfigError(f"suite {n!r} needs {'--pair' if n in Q_SUITES else '--type'}")
        for r in SUITES[n](ctx):
            r.identity = f"{n}: {r.identity}" if name == "all" else r.identity
            results.append(r)
    wall = round(time.perf_counter() - t0, 3) if timing else None
    return VerificationReport(name, ctx.describe(), results, wall)


# ---------------------------------------------------------------------------
# argument handling


def _read_config(path: Optional[str]) -> Dict[str, str]:
    if not path:
        return {}
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_string("[shiftops]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return dict(parser["shiftops"])


def _add_common(p: argparse.ArgumentParser):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--diff", action="store_true", help="differential (Heckman-Opdam) setting")
    grp.add_argument("--q", action="store_true", help="q-difference (Macdonald-Koornwinder) setting")
    p.add_argument("--type", help="root system label (A1, A2, B2, C2, BC1, BC2)")
    p.add_argument("--pair", help="affine pair label (case1:A1, case1:A2, case3:C1vC1)")
    p.add_argument("--k", help="comma-separated rational multiplicities; default symbolic")
    p.add_argument("--symbolic", action="store_true", help="symbolic multiplicities (default)")
    p.add_argument("--config", help="key = value file with defaults for type, pair, k, window")


def _kind_and_label(args, cfg) -> tuple:
    typ = args.type or cfg.get("type")
    pair = args.pair or cfg.get("pair")
    if args.q or (pair and not args.diff and not typ):
        if not pair:
            raise ConfigError("--q needs --pair")
        return "q", pair
    if not typ:
        raise ConfigError("--type (or --q --pair) is required")
    return "diff", typ


def _k_text(args, cfg) -> Optional[str]:
    if args.symbolic:
        return None
    return args.k if args.k is not None else cfg.get("k")


def _json_out(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_poly(args) -> int:
    cfg = _read_config(args.config)
    kind, label = _kind_and_label(args, cfg)
    if kind == "diff":
        R = build_root_system(label)
        k = ch.parse_multiplicity(R, _k_text(args, cfg))
        mu = R.parse_weight(args.weight)
        if args.which == "E":
            out = ch.nonsym_E(R, mu, k)
        else:
            out = ch.sym_P(R, mu, _character(R, args.char), k)
    else:
        P = qa.build_affine_pair(label)
        k = qa.parse_qmult(P, _k_text(args, cfg))
        mu = P.R.parse_weight(args.weight)
        if args.which == "E":
            out = qa.nonsym_E_q(P, mu, k)
        else:
            eps = _character(P.R, args.char)
            out = (qa.sym_P_q_monic if args.monic else qa.sym_P_q)(P, mu, eps, k)
    _json_out(out.to_json())
    return 0


def _character(R, name):
    try:
        return R.character(name or "triv")
    except UnsupportedType as exc:
        raise UnavailableCharacter(str(exc)) from exc


def cmd_shift(args) -> int:
    cfg = _read_config(args.config)
    kind, label = _kind_and_label(args, cfg)
    sign = 1 if args.direction == "forward" else -1
    if kind == "diff":
        R = build_root_system(label)
        eps = _character(R, args.char)
        k = ch.parse_multiplicity(R, _k_text(args, cfg))
        mu = R.parse_weight(args.weight)
        img = sd.nonsym_shift_apply(R, eps, sign, k, ch.nonsym_E(R, mu, k))
        target = sd.shifted_weight(R, mu, eps, sign)
        Et = ch.nonsym_E(R, target, k.shifted(eps.l, sign))
        closed = sd.shift_factor(R, mu, eps, sign, k)
    else:
        P = qa.build_affine_pair(label)
        R = P.R
        eps = _character(R, args.char)
        k = qa.parse_qmult(P, _k_text(args, cfg))
        mu = R.parse_weight(args.weight)
        img = qs.q_nonsym_shift_apply(P, eps, sign, k, qa.nonsym_E_q(P, mu, k))
        target = qs.shifted_weight_q(P, mu, eps, sign)
        Et = qa.nonsym_E_q(P, target, qs.shifted_mult(P, eps, k, sign))
        closed = qs.q_shift_factor(P, mu, eps, sign, k)
    factor = 0 if img.is_zero() else sd._ratio(img, Et)
    _json_out({"image": img.to_json(), "weight": list(mu), "target": list(target),
               "factor": None if factor is None else str(factor), "closed_form": str(closed),
               "agree": factor is not None and str(factor) == str(closed)})
    return 0


def cmd_verify(args) -> int:
    cfg = _read_config(args.config)
    kind, label = _kind_and_label(args, cfg)
    if args.suite not in ALL_SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}")
    if args.suite != "all" and (args.suite in Q_SUITES) != (kind == "q"):
        raise ConfigError(f"suite {args.suite!r} does not apply to the {kind} setting")
    if kind == "diff":
        R = build_root_system(label)
    else:
        R = qa.build_affine_pair(label).R
    window = args.window if args.window is not None else (
        int(cfg["window"]) if "window" in cfg else default_window(kind, R.rank))
    chars = [args.char] if args.char else None
    dirs = {"forward": [1], "backward": [-1], "both": [1, -1]}[args.direction]
    ctx = Context(kind, label, window, _k_text(args, cfg), chars, dirs)
    ctx.characters()
    if kind == "diff":
        ctx.diff_k()
    else:
        ctx.q_k()
    report = run_suite(args.suite, ctx, timing=args.timing)
    sys.stdout.write(report.dumps() + "\n")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", help="print E_mu or P_lam as JSON")
    p.add_argument("which", choices=("E", "P"))
    p.add_argument("--weight", required=True, help="comma-separated fundamental-weight coordinates")
    p.add_argument("--char", help="linear character for P (default triv)")
    p.add_argument("--monic", action="store_true", help="rescale q-case P^(eps) to be monic")
    _add_common(p)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("shift", help="apply a non-symmetric shift operator to E_mu")
    p.add_argument("--weight", required=True)
    p.add_argument("--char", default="sign")
    p.add_argument("--direction", choices=("forward", "backward"), default="forward")
    _add_common(p)
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    p.add_argument("--suite", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--char")
    p.add_argument("--direction", choices=("forward", "backward", "both"), default="both")
    p.add_argument("--timing", action="store_true", help="record wall time (reports are no longer byte-stable)")
    _add_common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, UnsupportedType, qa.UnsupportedCase, ParseError, ValueError) as exc:
        sys.stderr.write(f"shiftops: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
