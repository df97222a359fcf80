"""One check per acceptance criterion, exact equality throughout.

Each test records a single PASS/FAIL line, printed again in the terminal summary.
"""
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from shiftops import cli
from shiftops import qaffine as qa
from shiftops import qshift as qs
from shiftops import shiftdiff as sd
from shiftops.cherednik import Multiplicity
from shiftops.galg import GAElem
from shiftops.weyl import build_root_system

DIFF_TYPES = ["A1", "A2", "B2", "C2", "BC1", "BC2"]
PAIRS = list(qa.PAIR_LABELS)


def window(label):
    return 6 if build_root_system(label).rank == 1 else 4


def diff_ctx(label, k=None, win=None):
    return cli.Context("diff", label, win or window(label), k, None, [1, -1])


def q_ctx(label, win=3):
    return cli.Context("q", label, win, None, None, [1, -1])


def record(n, passed, detail):
    line = f"criterion {n:2d}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return passed


def summarize(results):
    failed = [f"{case}: {r.identity}" for case, r in results if not r.passed]
    checked = sum(r.checked for _, r in results)
    return not failed, checked, failed


def run_suites(cases):
    out = []
    for case, suite, ctx in cases:
        for r in cli.SUITES[suite](ctx):
            out.append((case, r))
    return out


def test_criterion_01_commutativity_and_triangularity():
    types = ["A1", "A2", "B2", "BC1", "BC2"]
    results = run_suites([(t, "commute", diff_ctx(t)) for t in types])
    for t in types:
        ctx = diff_ctx(t)
        for r in cli.SUITES["eigen"](ctx):
            if "lower terms" in r.identity:
                results.append((t, r))
    ok, checked, failed = summarize(results)
    assert record(1, ok, f"commuting, triangular operators on {', '.join(types)}; {checked} checks {failed or ''}")


def test_criterion_02_graded_hecke_relation():
    types = ["A1", "A2", "B2", "BC1", "BC2"]
    ok, checked, failed = summarize(run_suites([(t, "hecke", diff_ctx(t)) for t in types]))
    assert record(2, ok, f"graded Hecke relation on {', '.join(types)}; {checked} checks {failed or ''}")


def test_criterion_03_eigen_law_and_gram_schmidt():
    cases = [(t, "eigen", diff_ctx(t)) for t in ("A1", "BC1")]
    cases += [(f"{t} k={k}", "eigen", diff_ctx(t, k)) for t, k in
              (("A1", "1"), ("A1", "2"), ("BC1", "1,1"), ("BC1", "2,2"))]
    results = run_suites(cases)
    gs = [r for _, r in results if "Gram-Schmidt" in r.identity]
    ok, checked, failed = summarize(results)
    assert len(gs) == 4
    assert record(3, ok, f"eigen law symbolic and Gram-Schmidt agreement at k in {{1, 2}}; {checked} checks {failed or ''}")


def test_criterion_04_shift_principles():
    cases = [(t, "shift-principle", diff_ctx(t)) for t in DIFF_TYPES]
    cases += [(p, "q-shift-principle", q_ctx(p)) for p in PAIRS]
    ok, checked, failed = summarize(run_suites(cases))
    assert record(4, ok, f"differential and q shift principles by exact division; {checked} checks {failed or ''}")


def test_criterion_05_transmutation_and_shift_factors():
    cases = []
    for t in DIFF_TYPES:
        cases.append((t, "transmutation", diff_ctx(t)))
        cases.append((t, "shift-factor", diff_ctx(t)))
    ok, checked, failed = summarize(run_suites(cases))
    assert record(5, ok, f"transmutation, shift action and c-function/product agreement on {', '.join(DIFF_TYPES)}, "
                         f"all characters and directions; {checked} checks {failed or ''}")


def test_criterion_06_bc1_explicit_operators():
    R = build_root_system("BC1")
    k = Multiplicity.symbolic(R)
    eps = R.character("sign")
    scalars = sd.bc1_golden_scalars(k, bound=6)
    fwd = [r for r in scalars["forward"] if r != "any"]
    bwd = [r for r in scalars["backward"] if r != "any"]
    fwd_ok = len(fwd) == 1 and fwd[0] == 1
    bwd_ok = len(bwd) == 1 and bwd[0] == 1
    k0 = k.k0((2,))
    factors_ok = all(sd.shift_factor(R, (n + 1,), eps, 1, k) == n for n in range(6)) and \
        all(sd.shift_factor(R, (-n,), eps, -1, k) == n + 2 * k0 for n in range(6))
    corrected = [r for r in sd.bc1_golden_scalars(k, bound=6, corrected=True)["backward"] if r != "any"]
    detail = (f"forward scalar {fwd[0] if len(fwd) == 1 else 'not unique'}; "
              f"backward scalar {bwd[0] if len(bwd) == 1 and bwd[0] is not None else 'none (not proportional)'}; "
              f"shift factors n and n + 2k0(2e1) {'reproduced' if factors_ok else 'differ'}; "
              f"backward agrees with scalar {corrected[0] if len(corrected) == 1 else '?'} once d is replaced by "
              f"(x - 1/x) d")
    assert record(6, fwd_ok and bwd_ok and factors_ok, detail)


def test_criterion_07_sign_restriction_and_symmetric_operator():
    ok, checked, failed = summarize(run_suites([(t, "sym-shift", diff_ctx(t)) for t in DIFF_TYPES]))
    assert record(7, ok, f"sign restriction and symmetric shift operator by exact division; {checked} checks {failed or ''}")


def test_criterion_08_adjointness():
    cases = [("A1 k=1", "adjoint", diff_ctx("A1", "1", 4)), ("BC1 k=(1,1)", "adjoint", diff_ctx("BC1", "1,1", 4))]
    ok, checked, failed = summarize(run_suites(cases))
    assert record(8, ok, f"adjointness of forward and backward operators; {checked} pairings {failed or ''}")


def test_criterion_09_norm_recurrence():
    cases = [("A1 k=1", "norms", diff_ctx("A1", "1")), ("BC1 k=(1,1)", "norms", diff_ctx("BC1", "1,1"))]
    results = run_suites(cases)
    ok, checked, failed = summarize(results)
    ratios = {e["ratio"] for _, r in results for e in r.notes.get("ratios", [])}
    ok = ok and {"2", "3/2"} <= ratios
    assert record(9, ok, f"formula ratios equal ct-oracle ratios ({checked} weights, includes 2 and 3/2: "
                         f"{({'2', '3/2'} <= ratios)}) {failed or ''}")


def test_criterion_10_q_structure():
    cases = []
    for p in PAIRS:
        cases.append((p, "q-hecke", q_ctx(p)))
        cases.append((p, "q-eigen", q_ctx(p)))
    results = run_suites(cases)
    ok, checked, failed = summarize(results)
    braid = sum(r.checked for _, r in results if r.identity == "braid relations")
    assert record(10, ok, f"quadratic and braid relations ({braid} braid checks), Y commutativity and eigenvalues "
                          f"on {', '.join(PAIRS)}; {checked} checks {failed or ''}")


def test_criterion_11_q_transmutation():
    cases = []
    for p in PAIRS:
        cases.append((p, "q-transmutation", q_ctx(p)))
        cases.append((p, "q-sym-shift", q_ctx(p)))
    results = run_suites(cases)
    ok, checked, failed = summarize(results)
    variants = {case: r.notes["selected_variant"] for case, r in results if "selected_variant" in r.notes}
    deviations = 0
    for p in PAIRS:
        P = qa.build_affine_pair(p)
        k = qa.QMult.symbolic(P)
        for eps in P.R.linear_characters():
            for sign in (1, -1):
                for mu in P.R.window(3):
                    if qs.q_shift_factor(P, mu, eps, sign, k) != qs.q_shift_factor(P, mu, eps, sign, k, literal=True):
                        deviations += 1
    assert record(11, ok, f"q-transmutation, q-shift action and symmetric eigen-relation; {checked} checks; "
                          f"variant {sorted(set(variants.values()))}; closed form evaluated at vbar(mu) w_lam "
                          f"(unsimplified-at-vbar(mu) form differs at {deviations} singular backward cases) "
                          f"{failed or ''}")


def test_criterion_12_interpolation_polynomials():
    problems = []
    for t in DIFF_TYPES:
        if not sd.check_q_poly(build_root_system(t), sd.build_q_poly(t)):
            problems.append(f"q {t}")
    for p in PAIRS:
        P = qa.build_affine_pair(p)
        qp = qs.build_q_trigpoly(P)
        if not qs.check_q_trigpoly(qp):
            problems.append(f"trig q {p}")
    # printed examples
    bc1 = sd.build_q_poly("BC1").tensor()
    if bc1 != {((1,), (0,)): Fraction(1, 2), ((0,), (1,)): Fraction(1, 2)}:
        problems.append("BC1 example")
    import sympy

    R = build_root_system("A2")
    xs, ys = sd._symbols(2), sympy.symbols("y1:3")
    a1, a2 = (sum(sympy.Rational(str(c)) * x for c, x in zip(R.gram_dot(a), xs)) for a in R.simple)
    u = [sympy.Integer(1), a1, a2, 2 * a1 * (a1 + 2 * a2), 2 * a2 * (2 * a1 + a2), 3 * a1 * a2 * (a1 + a2)]
    sub = dict(zip(xs, ys))
    expected = sympy.expand(sum(u[5 - j] * u[j].subs(sub, simultaneous=True) for j in range(6)) / 18)
    ours = sympy.expand(sum(sd._from_hpoly(a, xs) * sd._from_hpoly(b, ys) for a, b in sd.build_q_poly("A2").pairs))
    if sympy.expand(expected - ours) != 0:
        problems.append("A2 example")
    A1 = qa.build_affine_pair("case1:A1")
    tensor = {}
    for _, qw, uw in qs.build_q_trigpoly(A1).items():
        for lam, c in qw:
            tensor[lam, tuple(uw)] = c
    if tensor != {((1,), (0,)): 1, ((0,), (-1,)): -1}:
        problems.append("A1 Steinberg example")
    A2 = qa.build_affine_pair("case1:A2")
    su = [(0, 0), (-1, 0), (0, -1), (-1, 1), (1, -1), (-1, -1)]
    exp2 = {(tuple(-x for x in su[5 - j]), su[j]): (1 if j < 3 else -1) for j in range(6)}
    got2 = {}
    for _, qw, uw in qs.build_q_trigpoly(A2).items():
        for lam, c in qw:
            got2[lam, tuple(uw)] = c
    if got2 != exp2:
        problems.append("A2 Steinberg example")
    units = {p: qs.build_q_trigpoly(qa.build_affine_pair(p)).det_unit for p in PAIRS}
    assert record(12, not problems,
                  f"interpolation polynomials on {len(DIFF_TYPES)} types and {len(PAIRS)} pairs; printed examples "
                  f"matched (A1 Steinberg example with e^(lam_1) for the printed e^(alpha_1)); det units {units} "
                  f"{problems or ''}")
