import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from testideals import Ideal, LinkageProblem, RingContext, fedder_ci_check, generic_regular_sequence, link_generator, verify_claim2
from testideals.errors import HeightMismatch, NonPrincipalLink
from testideals.frobenius import bracket_power
from testideals.groebner import height, ideal_colon
from testideals.linkage import (
    certify_frobenius_colon,
    frobenius_colon,
    frobenius_colon_generator,
    is_complete_intersection,
    product_of,
)

from conftest import random_poly


def gorenstein_h3(p):
    R = RingContext(p, ("x", "y", "z"))
    x, y, z = R.gens()
    return R, Ideal(R, [x * y, x * z, y * z, x**3 - y**3, y**3 - z**3])


def test_regular_sequence_examples():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    assert generic_regular_sequence(Ideal(R, [x]), 1, seed=3) == [x]
    for seed in range(5):
        fs = generic_regular_sequence(Ideal(R, [x, y]), 2, seed)
        assert len(fs) == 2 and height(Ideal(R, fs)) == 2
    _, I = gorenstein_h3(5)
    with pytest.raises(HeightMismatch):
        generic_regular_sequence(I, 2, 0)


def test_link_generator_examples():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    assert link_generator(Ideal(R, [x]), [x]) == R.one()
    g = x**2 + y**3
    assert link_generator(Ideal(R, [g]), [x * g]) == x


@pytest.mark.parametrize("p", [2, 5, 7])
def test_link_certificate_for_height_three_gorenstein(p):
    R, I = gorenstein_h3(p)
    lp = LinkageProblem.build(I, seed=1)
    assert lp.c == 3 and len(lp.fs) == 3
    assert all(f in I for f in lp.fs)
    J = ideal_colon(Ideal(R, lp.fs), I)
    assert Ideal(R, [lp.f]) + I == J + I


def test_non_gorenstein_link_is_not_principal():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    I = Ideal(R, [x**2, x * y, y**2])
    fs = generic_regular_sequence(I, 2, seed=0)
    with pytest.raises(NonPrincipalLink):
        link_generator(I, fs)


def test_seed_determinism():
    _, I = gorenstein_h3(5)
    a = LinkageProblem.build(I, seed=11)
    b = LinkageProblem.build(I, seed=11)
    assert a.fs == b.fs and a.f == b.f
    assert verify_claim2(a, 1).holds == verify_claim2(b, 1).holds


def test_claim2_trivial_case():
    R = RingContext(3, ("x", "y"))
    x, y = R.gens()
    lp = LinkageProblem(Ideal(R, [x]), 1, [x], R.one())
    for e in (1, 2, 3):
        r = verify_claim2(lp, e)
        assert r.holds and r.equality and r.q == 3**e


@pytest.mark.parametrize("p", [2, 5, 7])
def test_claim2_height_three_gorenstein(p):
    _, I = gorenstein_h3(p)
    lp = LinkageProblem.build(I, seed=0)
    assert verify_claim2(lp, 1).holds


@pytest.mark.parametrize("p", [2, 5, 7])
def test_claim2_negative_control(p):
    R, I = gorenstein_h3(p)
    lp = LinkageProblem.build(I, seed=0).with_link(R.one())
    assert not verify_claim2(lp, 1).holds


@pytest.mark.parametrize("p", [2, 3])
def test_claim2_shortcut_agrees_with_direct_colon(p):
    _, I = gorenstein_h3(p)
    lp = LinkageProblem.build(I, seed=2)
    for e in (1, 2):
        fast = verify_claim2(lp, e)
        slow = verify_claim2(lp, e, colon="direct", shortcut=False)
        assert fast.holds == slow.holds
        assert fast.equality == slow.equality


def test_gorenstein_colon_certificate_matches_direct_colon():
    for p in (2, 3, 5):
        _, I = gorenstein_h3(p)
        for e in (1, 2):
            u = frobenius_colon_generator(I, e)
            assert certify_frobenius_colon(I, e, u)
            assert Ideal(I.ring, [u]) + bracket_power(I, p**e) == frobenius_colon(I, e)


def test_fedder_examples():
    R2 = RingContext(2, ("x", "y"))
    x, y = R2.gens()
    assert fedder_ci_check([x], 1)
    assert fedder_ci_check([x, y], 1)
    R5 = RingContext(5, ("x", "y"))
    x, y = R5.gens()
    assert fedder_ci_check([x**2 + y**3], 1)
    with pytest.raises(HeightMismatch):
        fedder_ci_check([x, x * y], 1)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 2))
def test_fedder_identity_on_random_complete_intersections(seed, p, c):
    rng = random.Random(seed)
    R = RingContext(p, ("x", "y", "z"))
    for _ in range(20):
        fs = [random_poly(rng, R, 3, 3) for _ in range(c)]
        I = Ideal(R, fs)
        if all(fs) and not I.is_unit() and height(I) == c:
            break
    else:
        return
    assert fedder_ci_check(fs, 1)


@pytest.mark.parametrize("fs_text", [["x*y - z^2"], ["x^2 + y^3", "z"], ["x*y", "x^2 + z^2"]])
def test_complete_intersection_with_unit_link(fs_text):
    R = RingContext(3, ("x", "y", "z"))
    fs = [R(t) for t in fs_text]
    I = Ideal(R, fs)
    assert is_complete_intersection(I)
    lp = LinkageProblem(I, len(fs), fs, R.one())
    for e in (1, 2):
        assert verify_claim2(lp, e).holds
        assert verify_claim2(lp, e, colon="direct", shortcut=False).holds


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_claim2_invariant_under_unit_and_ideal_shift(seed):
    rng = random.Random(seed)
    R, I = gorenstein_h3(5)
    lp = LinkageProblem.build(I, seed=0)
    base = verify_claim2(lp, 1).holds
    u = rng.randrange(1, 5)
    i = R.zero()
    for g in I.generators:
        i = i + g * random_poly(rng, R, 1, 2)
    shifted = lp.with_link(lp.f.scale(u) + i)
    assert verify_claim2(shifted, 1).holds == base
    neg = lp.with_link(R.constant(u) + i)
    assert verify_claim2(neg, 1).holds == verify_claim2(lp.with_link(R.one()), 1).holds


def test_product_helper():
    R = RingContext(3, ("x", "y"))
    x, y = R.gens()
    assert product_of([x, y, x + y], R) == x * y * (x + y)
    assert product_of([], R) == R.one()
