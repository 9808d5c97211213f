import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from testideals import (
    FormalCombination,
    Ideal,
    RingContext,
    find_test_element,
    is_purely_f_regular,
    is_strongly_f_regular_quotient,
    monomial_test_ideal_oracle,
    test_ideal as tau,
    test_ideal_along as tau_along,
)
from testideals.errors import (
    DegreeBoundTooSmall,
    HeightMismatch,
    NoTestElementFound,
    NotStabilized,
    ZeroDivisorGamma,
)
from testideals.groebner import ideal_colon, ideal_contains
from testideals.tau import (
    TestElement,
    run_chain,
    strongly_f_regular_witness,
    test_ideal_along_computation as along_computation,
    test_ideal_computation as tau_computation,
)

from conftest import random_poly

T = FormalCombination.trivial()


def combo(*pairs):
    return FormalCombination(pairs)


def test_tau_of_maximal_ideal():
    R = RingContext(5, ("x", "y"))
    m = Ideal.maximal(R)
    assert tau(combo((m, 1))).is_unit()
    assert tau(combo((m, 2))) == m
    assert tau(combo((Ideal.unit(R), 3)), ring=R).is_unit()
    assert tau(T, ring=R).is_unit()


def test_tau_computation_record():
    R = RingContext(3, ("x", "y"))
    m = Ideal.maximal(R)
    comp = tau_computation(combo((m, 1)), 4)
    assert comp.stabilized_at == 1 and comp.stop_reason == "unit"
    comp = tau_computation(combo((m, Fraction(5, 2))), 6)
    for a, b in zip(comp.chain, comp.chain[1:]):
        assert ideal_contains(b, a)
    assert comp.result == monomial_test_ideal_oracle(combo((m, Fraction(5, 2))))


def test_along_smooth_hypersurface():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    assert tau_along(Ideal(R, [x]), te=TestElement(R.one())).is_unit()
    assert is_purely_f_regular(Ideal(R, [x]))


@pytest.mark.parametrize("p", [7, 11, 13])
def test_cusp_adjoint_ideal(p):
    # the adjoint ideal of x^3 + y^5 is (x^2, xy, y^3)
    R = RingContext(p, ("x", "y"))
    x, y = R.gens()
    I = Ideal(R, [x**3 + y**5])
    assert tau_along(I) == Ideal(R, [x**2, x * y, y**3])


def test_along_double_line_is_not_unit():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    I = Ideal(R, [x**2])
    tau = tau_along(I, te=TestElement(R.one()), certify=False, e_max=3)
    assert ideal_contains(Ideal(R, [x]), tau)
    assert not tau.is_unit()
    assert not is_purely_f_regular(I, te=TestElement(R.one()), e_max=3)


def test_along_maximal_ideal():
    R = RingContext(3, ("x", "y"))
    assert is_purely_f_regular(Ideal.maximal(R))


def test_along_rejects_bad_inputs():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    I = Ideal(R, [x * y])
    with pytest.raises(ZeroDivisorGamma):
        tau_along(I, te=TestElement(x))
    with pytest.raises(ZeroDivisorGamma):
        tau_along(I, at=combo((Ideal(R, [x]), 1)), te=TestElement(x + y))
    with pytest.raises(HeightMismatch):
        tau_along(I, c=2)


def test_not_stabilized_carries_chain():
    R = RingContext(2, ("x", "y"))
    x, y = R.gens()
    terms = iter([Ideal(R, [x**5]), Ideal(R, [x**4]), Ideal(R, [x**3])])
    with pytest.raises(NotStabilized) as info:
        run_chain(lambda e: next(terms), R, 3)
    assert info.value.e_max == 3 and len(info.value.chain) == 3


def test_find_test_element_examples():
    R = RingContext(7, ("x", "y"))
    x, y = R.gens()
    te = find_test_element(Ideal(R, [x]))
    assert te.gamma == R.one() and te.N == 1
    assert find_test_element(Ideal(R, [x, y])).gamma == R.one()
    cusp = Ideal(R, [x**2 + y**3])
    gamma = find_test_element(cusp).gamma
    assert not gamma.is_constant()
    assert ideal_colon(cusp, Ideal(R, [gamma])) == cusp
    assert ideal_colon(cusp, Ideal(R, [y])) == cusp
    assert find_test_element(cusp, candidates=[y]).gamma == y
    with pytest.raises(NoTestElementFound):
        find_test_element(Ideal.unit(R))
    with pytest.raises(NoTestElementFound):
        find_test_element(Ideal(R, [x**2, x * y]))  # embedded component at the origin


def test_n_stability_is_recorded():
    R = RingContext(7, ("x", "y"))
    x, y = R.gens()
    comp = along_computation(Ideal(R, [x**2 + y**3]))
    assert comp.certified
    Ns = [N for N, _ in comp.n_history]
    assert Ns == sorted(Ns) and len(Ns) >= 2
    assert comp.n_history[-1][1] == comp.n_history[-2][1] == comp.result
    for a, b in zip(comp.chain, comp.chain[1:]):
        assert ideal_contains(b, a)


def test_predicate_examples():
    R = RingContext(5, ("x", "y"))
    x, y = R.gens()
    assert is_strongly_f_regular_quotient(Ideal(R, [x]), [x])
    assert strongly_f_regular_witness(Ideal(R, [x]), [x]) == 1
    assert is_strongly_f_regular_quotient(Ideal(R, [x, y]), [x, y])
    cusp = Ideal(R, [x**2 + y**3])
    assert strongly_f_regular_witness(cusp, [x**2 + y**3], e_max=3) is None
    with pytest.raises(HeightMismatch):
        is_strongly_f_regular_quotient(cusp, [x**2 + y**3, x])


def test_predicates_agree_on_small_complete_intersections():
    R = RingContext(5, ("x", "y", "z"))
    x, y, z = R.gens()
    for fs in ([x * y - z**2], [x**2 + y**3 + z**5], [x * y, z], [x**2 - y * z, y**2 - x * z]):
        I = Ideal(R, fs)
        try:
            pure = is_purely_f_regular(I, e_max=4)
        except (NotStabilized, NoTestElementFound):
            continue
        assert pure == is_strongly_f_regular_quotient(I, fs, e_max=4)


def test_oracle_examples():
    R = RingContext(3, ("x", "y"))
    m = Ideal.maximal(R)
    assert monomial_test_ideal_oracle(combo((m, 2))) == m
    assert monomial_test_ideal_oracle(combo((m, 1))).is_unit()
    assert monomial_test_ideal_oracle(combo((Ideal.unit(R), 2))).is_unit()
    x, y = R.gens()
    # (x^2, y^3)^1: u + 1 strictly above u1/2 + u2/3 = 1
    assert monomial_test_ideal_oracle(combo((Ideal(R, [x**2, y**3]), 1))) == Ideal(R, [x, y])
    with pytest.raises(DegreeBoundTooSmall):
        monomial_test_ideal_oracle(combo((m, 4)), degree_bound=1)


monomial_ideals = st.lists(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)), min_size=1, max_size=3
)


@given(
    st.sampled_from([2, 3, 5]),
    st.lists(st.tuples(monomial_ideals, st.sampled_from(["1/2", "1", "3/2", "2"])), min_size=1, max_size=2),
)
def test_oracle_agreement(p, spec):
    R = RingContext(p, ("x", "y", "z"))
    factors = []
    for exps, t in spec:
        a = Ideal(R, [R.monomial(e) for e in exps])
        if a.is_unit():
            continue
        factors.append((a, t))
    at = FormalCombination(factors)
    assert tau(at, e_max=6, ring=R) == monomial_test_ideal_oracle(at, ring=R)


@given(st.data(), st.sampled_from(["1/3", "1/2", "2/3", "1", "5/4"]))
def test_skoda_for_principal_ideals(data, t):
    p = data.draw(st.sampled_from([2, 3, 5]))
    R = RingContext(p, ("x", "y"))
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    f = random_poly(rng, R, 3, 3)
    if not f:
        f = R.gens()[0]
    F = Ideal(R, [f])
    t = Fraction(t)
    lhs = tau(combo((F, t + 1)), e_max=6)
    rhs = tau(combo((F, t)), e_max=6) * Ideal(R, [f])
    assert lhs == rhs


@pytest.mark.parametrize("t_small,t_big", [("1/3", "1/2"), ("1/2", "1"), ("1", "3/2")])
def test_monotone_in_exponent(t_small, t_big):
    R = RingContext(5, ("x", "y", "z"))
    x, y, z = R.gens()
    I = Ideal(R, [x * y - z**2])
    a = Ideal(R, [x, z])
    small = tau_along(I, combo((a, t_small)))
    big = tau_along(I, combo((a, t_big)))
    assert ideal_contains(small, big)


def test_monotone_in_exponent_for_ambient_ring():
    R = RingContext(3, ("x", "y"))
    x, y = R.gens()
    a = Ideal(R, [x**2, y**3])
    prev = Ideal.unit(R)
    for t in ["1/4", "1/2", "5/6", "1", "4/3", "2"]:
        cur = tau(combo((a, t)), e_max=6)
        assert ideal_contains(prev, cur)
        prev = cur
