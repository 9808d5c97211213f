"""Acceptance criteria, one test each; every test records a PASS/FAIL line shown in the terminal summary."""

import itertools
import multiprocessing
import os
import random
import time
from fractions import Fraction

import pytest

from testideals import (
    FormalCombination,
    Ideal,
    LinkageProblem,
    RingContext,
    bracket_power,
    fedder_ci_check,
    find_test_element,
    frobenius_root,
    is_purely_f_regular,
    is_strongly_f_regular_quotient,
    monomial_test_ideal_oracle,
    restriction_report,
    verify_claim2,
)
from testideals import test_ideal as tau
from testideals import test_ideal_along as tau_along
from testideals.errors import NoTestElementFound, NotStabilized
from testideals.groebner import height, ideal_contains

from conftest import ACCEPTANCE, random_poly


def record(criterion, ok, seconds, detail=""):
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail} ({seconds:.1f} s)")


def test_criterion_1_frobenius_round_trips():
    rng = random.Random(11)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(500):
        p = rng.choice([2, 3, 5])
        R = RingContext(p, ("x", "y", "z")[: rng.randint(1, 3)])
        gens = [random_poly(rng, R, 6, 3) for _ in range(rng.randint(1, 3))]
        J = Ideal(R, [g for g in gens if g] or [R.gens()[0]])
        down = frobenius_root(bracket_power(J, p), p) == J
        up = ideal_contains(bracket_power(frobenius_root(J, p), p), J)
        bad += not (down and up)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    record(1, ok, dt, f"500 ideals, {bad} failures, limit 60 s")
    assert ok


def test_criterion_2_fedder_identity():
    rng = random.Random(12)
    t0 = time.perf_counter()
    bad = count = 0
    while count < 100:
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        R = RingContext(p, ("x", "y", "z")[:n])
        c = rng.randint(1, min(2, n))
        fs = [random_poly(rng, R, 3, 3) for _ in range(c)]
        if any(not f or f.is_constant() for f in fs):
            continue
        I = Ideal(R, fs)
        if I.is_unit() or height(I) != c:
            continue
        count += 1
        bad += not fedder_ci_check(fs, 1)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 120
    record(2, ok, dt, f"100 regular sequences, {bad} failures, limit 120 s")
    assert ok


def test_criterion_3_cusp_adjoint():
    matches, mismatches, slow = [], [], []
    t_all = time.perf_counter()
    for p in (7, 11, 13):
        R = RingContext(p, ("x", "y"))
        x, y = R.gens()
        t0 = time.perf_counter()
        got = tau_along(Ideal(R, [x**3 + y**5]))
        if time.perf_counter() - t0 > 300:
            slow.append(p)
        (matches if got == Ideal(R, [x**2, x * y, y**3]) else mismatches).append(p)
    dt = time.perf_counter() - t_all
    ok = len(matches) >= 2 and not slow
    record(3, ok, dt, f"(x^2, xy, y^3) matched at p in {matches}, mismatches {mismatches}")
    assert ok


def _homogeneous(rng, R, d):
    monos = [m for m in itertools.product(range(d + 1), repeat=R.nvars) if sum(m) == d]
    f = R.zero()
    for m in rng.sample(monos, min(len(monos), rng.randint(2, 4))):
        f = f + R.monomial(m).scale(rng.randint(1, R.p - 1))
    return f


def test_criterion_4_predicate_equivalence():
    rng = random.Random(4)
    t0 = time.perf_counter()
    disagree, inconclusive, agree, resampled = [], 0, 0, 0
    done = 0
    while done < 30:
        p = rng.choice([3, 5])
        n = rng.choice([2, 3])
        c = rng.randint(1, n - 1)
        R = RingContext(p, ("x", "y", "z")[:n])
        fs = [_homogeneous(rng, R, rng.choice([2, 2, 3])) for _ in range(c)]
        I = Ideal(R, fs)
        if any(not f for f in fs) or I.is_unit() or height(I) != c:
            continue
        try:
            te = find_test_element(I)
        except NoTestElementFound:
            resampled += 1  # non-reduced quotient
            continue
        done += 1
        try:
            pure = is_purely_f_regular(I, te=te, e_max=3)
        except NotStabilized:
            pure = None
        strong = is_strongly_f_regular_quotient(I, fs, te=te, e_max=3)
        if pure is None and not strong:
            inconclusive += 1
        elif bool(pure) == strong:
            agree += 1
        else:
            disagree.append((p, [str(f) for f in fs], pure, strong))
    dt = time.perf_counter() - t0
    ok = not disagree and dt < 600
    record(
        4,
        ok,
        dt,
        f"30 complete intersections: {agree} agree, {inconclusive} both inconclusive, "
        f"{len(disagree)} disagree, {resampled} non-reduced draws resampled",
    )
    assert ok, disagree


def test_criterion_5_claim2():
    t0 = time.perf_counter()
    failures = []
    for p in (2, 5, 7):
        R = RingContext(p, ("x", "y", "z"))
        x, y, z = R.gens()
        I = Ideal(R, [x * y, x * z, y * z, x**3 - y**3, y**3 - z**3])
        for seed in (0, 1, 2):
            lp = LinkageProblem.build(I, seed)
            for e in (1, 2):
                if not verify_claim2(lp, e).holds:
                    failures.append((p, seed, e))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 600
    record(5, ok, dt, f"18 runs (p in 2,5,7; 3 seeds; e in 1,2), failures {failures}")
    assert ok


def battery(R):
    x, y, z = R.gens()
    return [
        ("cusp", [x**2 + y**3]),
        ("node", [x * y]),
        ("x^3+y^4", [x**3 + y**4]),
        ("A1", [x * y - z**2]),
        ("E8", [x**2 + y**3 + z**5]),
        ("height-3", [x * y, x * z, y * z, x**3 - y**3, y**3 - z**3]),
        ("ci-lines", [x * y, z]),
        ("ci-cusp", [x**2 + y**3, z]),
        ("ci-twisted", [x * z - y**2, x + y + z]),
        ("ci-quadrics", [x**2 - y * z, y**2 - x * z + z**2]),
    ]


def test_criterion_6_restriction_containment():
    t0 = time.perf_counter()
    runs, failures, unequal = 0, [], []
    for p in (5, 7):
        R = RingContext(p, ("x", "y", "z"))
        x, y, z = R.gens()
        for name, gens in battery(R):
            I = Ideal(R, gens)
            # (x, y) lies in the unique prime of the Artinian ideal; 1 + x does not
            a = Ideal(R, [1 + x]) if name == "height-3" else Ideal(R, [x, y])
            for t in (None, Fraction(1, 2), Fraction(1)):
                at = FormalCombination([(a, t)]) if t else None
                runs += 1
                try:
                    rep = restriction_report(I, at, seed=0, e_max=4)
                except Exception as exc:
                    failures.append((p, name, t, type(exc).__name__))
                    continue
                if not rep.containment_holds:
                    failures.append((p, name, t, "containment"))
                if not rep.equality_holds:
                    unequal.append((p, name, str(t)))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 1800
    record(6, ok, dt, f"{runs} reports over 10 ideals, failures {failures}, equality fails {unequal}")
    assert ok


def test_criterion_7_monomial_oracle():
    rng = random.Random(7)
    t0 = time.perf_counter()
    bad = []
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        R = RingContext(p, ("x", "y", "z")[:n])
        factors = []
        for _ in range(rng.randint(1, 2)):
            gens = [R.monomial([rng.randint(0, 3) for _ in range(n)]) for _ in range(rng.randint(1, 3))]
            factors.append((Ideal(R, gens), rng.choice([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)])))
        at = FormalCombination(factors)
        if tau(at, e_max=6, ring=R) != monomial_test_ideal_oracle(at, ring=R):
            bad.append(str(at))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    record(7, ok, dt, f"50 monomial combinations, mismatches {bad}")
    assert ok


def veronese_cone(p):
    monos = [m for m in itertools.product(range(4), repeat=3) if sum(m) == 3]
    R = RingContext(p, tuple("v" + "".join(map(str, m)) for m in monos))
    V = dict(zip(monos, R.gens()))
    quads = []
    pairs = list(itertools.combinations_with_replacement(monos, 2))
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if all(i + j == k + l for i, j, k, l in zip(a, b, c, d)):
            quads.append(V[a] * V[b] - V[c] * V[d])
    return R, Ideal(R, quads), V


@pytest.mark.slow
def test_criterion_8_veronese_stretch():
    """Optional; the budget comes from ``VERONESE_BUDGET`` seconds (default 600)."""
    budget = float(os.environ.get("VERONESE_BUDGET", "600"))
    t0 = time.perf_counter()
    ctx = multiprocessing.get_context("fork")
    queue = ctx.Queue()
    proc = ctx.Process(target=_veronese_run, args=(2, queue), daemon=True)
    proc.start()
    proc.join(budget)
    if proc.is_alive():
        proc.terminate()
        proc.join()
        ok, detail = False, f"p=2 did not finish within {budget:.0f} s (non-blocking stretch goal)"
    else:
        ok = queue.get()
        detail = "p=2 returned " + ("(v)^5" if ok else "a different ideal")
    record(8, ok, time.perf_counter() - t0, detail)
    if not ok:
        pytest.xfail(detail)


def _veronese_run(p, queue):
    from testideals.tau import TestElement

    R, I, V = veronese_cone(p)
    # the singular locus is the vertex and I is prime, so a coordinate works
    te = TestElement(V[(3, 0, 0)])
    queue.put(tau_along(I, te=te, e_max=4) == Ideal.maximal(R) ** 5)
