"""Test ideals ``tau(a^t)`` and ``tau_I(S, a^t)`` computed as Frobenius fixed points."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .algebra import Polynomial, RingContext
from .errors import (
    ChainNotAscending,
    DegreeBoundTooSmall,
    HeightMismatch,
    NoTestElementFound,
    NotStabilized,
    ZeroDivisorGamma,
)
from .frobenius import root_of_product
from .groebner import (
    FormalCombination,
    Ideal,
    _fresh_name,
    buchberger,
    height,
    ideal_colon,
    ideal_contains,
    krull_dimension,
)

DEFAULT_E_MAX = 4


@dataclass(frozen=True)
class TestElement:
    """``gamma**N``; ``certified`` is False for fallbacks that skipped the smoothness check."""

    gamma: Polynomial
    N: int = 1
    certified: bool = True

    __test__ = False  # not a pytest class

    def power(self) -> Polynomial:
        return self.gamma ** self.N

    def with_N(self, N: int) -> "TestElement":
        return TestElement(self.gamma, N, self.certified)


@dataclass
class TauComputation:
    """Record of one fixed-point run.

    ``chain[k]`` is the ideal after level ``e = k + 1``.  ``stop_reason`` is
    ``"fixed-point"`` (three equal consecutive ideals), ``"unit"`` (the unit
    ideal cannot grow) or ``"degree-saturation"`` (the chain contains a power
    of the maximal ideal that bounds every later term).
    """

    I: Optional[Ideal]
    at: FormalCombination
    test_element: TestElement
    e_max: int
    chain: List[Ideal] = field(default_factory=list)
    stabilized_at: Optional[int] = None
    result: Optional[Ideal] = None
    stop_reason: Optional[str] = None
    certified: bool = True
    n_history: List[Tuple[int, Optional[Ideal]]] = field(default_factory=list)


# -- helpers -------------------------------------------------------------------

def ideal_order(I: Ideal) -> int:
    """Largest ``k`` with ``I ⊆ m^k`` (``m`` the ideal of the origin)."""
    gens = I.gb() if I._gb is not None else I.generators
    return min(g.order_at_origin() for g in gens)


def contains_max_power(P: Ideal, k: int) -> bool:
    """``m^k ⊆ P``."""
    ring = P.ring
    if k <= 0:
        return P.is_unit()
    if P.is_unit():
        return True
    n = ring.nvars
    from .groebner import normal_form

    for exps in _compositions(k, n):
        if normal_form(ring.monomial(exps), P):
            return False
    return True


def _compositions(k: int, n: int):
    if n == 1:
        yield (k,)
        return
    for a in range(k, -1, -1):
        for rest in _compositions(k - a, n - 1):
            yield (a,) + rest


def saturation_exponent(slope: Fraction, intercept: Fraction, n: int, e: int, p: int) -> int:
    """Smallest ``k`` such that every term at level ``> e`` lies in ``m^k``.

    A term at level ``e'`` is the ``q' = p^{e'}``-th root of an ideal of order
    at least ``slope*q' + intercept``; the root of ``m^D`` is
    ``m^{ceil((D - n(q'-1))/q')}``, and the exponent ``L + delta/q'`` with
    ``L = slope - n`` and ``delta = intercept + n`` is monotone in ``q'``.
    """
    L = Fraction(slope) - n
    delta = Fraction(intercept) + n
    if delta > 0:
        return math.floor(L) + 1
    if delta == 0:
        return math.ceil(L)
    return math.ceil(L + delta / Fraction(p ** (e + 1)))


def run_chain(
    term: Callable[[int], Ideal],
    ring: RingContext,
    e_max: int,
    base: Optional[Ideal] = None,
    cumulative: bool = True,
    saturation: Optional[Tuple[Fraction, Fraction]] = None,
) -> Tuple[List[Ideal], int, Ideal, str]:
    """Iterate ``P_e = base + T_1 + ... + T_e`` (or ``base + T_e``) until it provably stops growing."""
    chain: List[Ideal] = []
    prev: Optional[Ideal] = None
    for e in range(1, e_max + 1):
        T = term(e)
        parts = [T]
        if cumulative and prev is not None:
            parts.append(prev)
        if base is not None:
            parts.append(base)
        P = Ideal(ring, [g for J in parts for g in J.gb()])
        P = Ideal.from_gb(ring, P.gb())
        if prev is not None and not ideal_contains(P, prev):
            raise ChainNotAscending(e - 1, chain + [P])
        chain.append(P)
        if P.is_unit():
            return chain, e, P, "unit"
        if saturation is not None:
            k = saturation_exponent(*saturation, ring.nvars, e, ring.p)
            if contains_max_power(P, k):
                return chain, e, P, "degree-saturation"
        if len(chain) >= 3 and chain[-1] == chain[-2] == chain[-3]:
            return chain, e - 2, P, "fixed-point"
        prev = P
    raise NotStabilized(e_max, chain)


def _ceil_tq(t: Fraction, q: int) -> int:
    return math.ceil(t * q)


def _factor_gens(a: Ideal) -> List[Polynomial]:
    return list(a.minimal_generators())


def _ring_of(at: FormalCombination, I: Optional[Ideal], ring: Optional[RingContext]) -> RingContext:
    if I is not None:
        return I.ring
    if ring is not None:
        return ring
    if at.factors:
        return at.factors[0][0].ring
    raise ValueError("cannot infer the ring: pass ring=...")


# -- tau(a^t) ------------------------------------------------------------------

def test_ideal_computation(
    at: FormalCombination, e_max: int = DEFAULT_E_MAX, ring: Optional[RingContext] = None
) -> TauComputation:
    ring = _ring_of(at, None, ring)
    te = TestElement(ring.one())
    comp = TauComputation(None, at, te, e_max)
    p = ring.p
    powers_of = lambda q: [(_factor_gens(a), _ceil_tq(t, q)) for a, t in at.factors]
    term = lambda e: root_of_product(ring, ring.one(), powers_of(p ** e), e)
    slope = sum((t * ideal_order(a) for a, t in at.factors), Fraction(0))
    chain, e, result, reason = run_chain(term, ring, e_max, cumulative=False, saturation=(slope, Fraction(0)))
    comp.chain, comp.stabilized_at, comp.result, comp.stop_reason = chain, e, result, reason
    return comp


def test_ideal(at: FormalCombination, e_max: int = DEFAULT_E_MAX, ring: Optional[RingContext] = None) -> Ideal:
    """``tau(a^t)``: the stable value of ``(prod a_i^{ceil(t_i q)})^{[1/q]}``."""
    return test_ideal_computation(at, e_max, ring).result


# -- tau_I(S, a^t) -------------------------------------------------------------

def _check_gamma(I: Ideal, gamma: Polynomial, what: str = "gamma"):
    if gamma.is_constant():
        return
    if ideal_colon(I, Ideal(I.ring, [gamma])) != I:
        raise ZeroDivisorGamma(f"{what} = {gamma} is a zerodivisor modulo I")


def avoids_minimal_primes(J: Ideal, g: Polynomial, dim: Optional[int] = None) -> bool:
    """``g`` lies in no minimal prime of the unmixed ideal ``J``: ``V(J + (g))`` has smaller dimension."""
    if J.is_unit() or g.is_constant():
        return bool(g) or J.is_unit()
    Jg = J + Ideal(J.ring, [g])
    if Jg.is_unit():
        return True
    dim = krull_dimension(J) if dim is None else dim
    return krull_dimension(Jg) < dim


def _check_gamma_along(I: Ideal, f: Polynomial, gamma: Polynomial):
    If = I + Ideal(I.ring, [f])
    if not avoids_minimal_primes(If, gamma):
        raise ZeroDivisorGamma(f"gamma = {gamma} vanishes on a component of V(I + (f))")


def _factor_witnesses(a: Ideal, tries: int = 4):
    gens = list(a.gb())
    yield from gens
    if len(gens) > 1:
        ring = a.ring
        yield sum(gens[1:], gens[0])
        rng = random.Random(0)
        for _ in range(tries):
            yield sum((g.scale(rng.randrange(1, ring.p)) for g in gens), ring.zero())


def _check_factors(I: Ideal, at: FormalCombination):
    # a generator, the sum of generators, or a seeded combination must avoid
    # the minimal primes of I
    for a, _ in at.factors:
        if a.is_unit():
            continue
        for g in _factor_witnesses(a):
            if g and ideal_colon(I, Ideal(I.ring, [g])) == I:
                break
        else:
            raise ZeroDivisorGamma(f"no element of {a} tried is a nonzerodivisor modulo I")


def _along_once(I: Ideal, at: FormalCombination, te: TestElement, c: int, e_max: int):
    ring = I.ring
    p = ring.p
    gamma = te.power()
    Igens = _factor_gens(I)

    def term(e):
        q = p ** e
        powers = [(Igens, c * (q - 1))] + [(_factor_gens(a), _ceil_tq(t, q)) for a, t in at.factors]
        return root_of_product(ring, gamma, powers, e)

    ordI = ideal_order(I)
    slope = c * ordI + sum((t * ideal_order(a) for a, t in at.factors), Fraction(0))
    intercept = Fraction(gamma.order_at_origin() - c * ordI)
    return run_chain(term, ring, e_max, saturation=(slope, intercept))


def test_ideal_along_computation(
    I: Ideal,
    at: Optional[FormalCombination] = None,
    te: Optional[TestElement] = None,
    e_max: int = DEFAULT_E_MAX,
    c: Optional[int] = None,
    certify: bool = True,
    max_N: int = 8,
    check: bool = True,
) -> TauComputation:
    """Run the fixed point for ``tau_I(S, a^t)``, doubling ``N`` until two values agree.

    The chain is the running sum of the level-``e`` roots
    ``(gamma^N I^{c(q-1)} prod a_i^{ceil(t_i q)})^{[1/q]}``; individual levels
    need not be nested when ``I`` is proper, their sum always is.
    """
    at = at or FormalCombination.trivial()
    if I.is_unit():
        from .errors import UnitIdeal

        raise UnitIdeal("I must be a proper ideal")
    h = height(I)
    if c is not None and c != h:
        raise HeightMismatch(f"requested height {c}, computed {h}")
    c = h
    if te is None:
        te = find_test_element(I)
    if check:
        _check_gamma(I, te.gamma)
        _check_factors(I, at)
    comp = TauComputation(I, at, te, e_max)
    return adapt_N(comp, lambda t: _along_once(I, at, t, c, e_max), certify, max_N)


def adapt_N(
    comp: TauComputation,
    run_once: Callable[[TestElement], Tuple[List[Ideal], int, Ideal, str]],
    certify: bool = True,
    max_N: int = 8,
) -> TauComputation:
    """Fill ``comp`` from ``run_once``, doubling ``N`` until two consecutive values agree."""
    te = comp.test_element
    chain, e, result, reason = run_once(te)
    comp.chain, comp.stabilized_at, comp.result, comp.stop_reason = chain, e, result, reason
    comp.n_history.append((te.N, result))
    comp.certified = te.certified
    if not certify or te.gamma.is_constant():
        return comp
    N = te.N
    agreed = False
    while 2 * N <= max_N:
        N *= 2
        try:
            chain2, e2, res2, reason2 = run_once(te.with_N(N))
        except NotStabilized:
            comp.n_history.append((N, None))
            break
        comp.n_history.append((N, res2))
        if res2 == comp.result:
            agreed = True
            break
        comp.chain, comp.stabilized_at, comp.result, comp.stop_reason = chain2, e2, res2, reason2
        comp.test_element = te.with_N(N)
    comp.certified = te.certified and agreed
    return comp


def test_ideal_along(
    I: Ideal,
    at: Optional[FormalCombination] = None,
    te: Optional[TestElement] = None,
    e_max: int = DEFAULT_E_MAX,
    c: Optional[int] = None,
    certify: bool = True,
) -> Ideal:
    """``tau_I(S, a^t)``, the smallest ``J`` with ``gamma^N I^{c(q-1)} a^{ceil(tq)} ⊆ J^[q]`` for all ``q``."""
    return test_ideal_along_computation(I, at, te, e_max, c, certify).result


# -- test elements -------------------------------------------------------------

def _det(M: List[List[Polynomial]], ring: RingContext) -> Polynomial:
    n = len(M)
    if n == 1:
        return M[0][0]
    out = ring.zero()
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor, ring)
        out = out + term if j % 2 == 0 else out - term
    return out


def jacobian_minors(gens: Sequence[Polynomial], c: int) -> List[Polynomial]:
    """All nonzero ``c x c`` minors of the Jacobian matrix of ``gens``."""
    if not gens:
        return []
    ring = gens[0].ring
    J = [[g.derivative(v) for v in ring.variables] for g in gens]
    out = []
    for rows in itertools.combinations(range(len(gens)), c):
        for cols in itertools.combinations(range(ring.nvars), c):
            d = _det([[J[r][k] for k in cols] for r in rows], ring)
            if d:
                out.append(d.monic())
    return out


def in_radical(f: Polynomial, K: Ideal) -> bool:
    """``f ∈ rad(K)`` via ``1 ∈ K + (1 - t f)``."""
    ring = K.ring
    if f.is_constant():
        return not f or K.is_unit()
    t = _fresh_name(ring)
    E = RingContext(ring.p, ring.variables + (t,), ring.order)
    tt = E.gen(t)
    gens = [g.to_ring(E) for g in K.gb()] + [E.one() - tt * f.to_ring(E)]
    gb = buchberger(gens, E)
    return len(gb) == 1 and gb[0].is_constant()


def singular_locus_ideal(I: Ideal, c: Optional[int] = None) -> Ideal:
    """``I + Jac_c(I)``; its radical cuts out the singular points of ``V(I)``."""
    c = height(I) if c is None else c
    return Ideal(I.ring, list(I.gb()) + jacobian_minors(list(I.gb()), c))


def test_element_candidates(
    I: Ideal, extra: Sequence[Polynomial] = (), c: Optional[int] = None, along: Optional[Ideal] = None
) -> List[Polynomial]:
    ring = I.ring
    c = height(I) if c is None else c
    base = list(ring.gens()) + jacobian_minors(list(I.gb()), c)
    if along is not None:
        base += jacobian_minors(list(along.gb()), c + 1)
    cands = [ring.one()] + list(extra) + base
    cands += [a + b for a, b in itertools.combinations(base, 2)]
    seen = {}
    for g in cands:
        if g:
            seen.setdefault(g.monic(), None)
    key = ring.key
    return sorted(seen, key=lambda g: (key(g.lm), len(g), str(g)))


def find_test_element(
    I: Ideal,
    candidates: Optional[Sequence[Polynomial]] = None,
    along: Optional[Polynomial] = None,
) -> TestElement:
    """First candidate ``gamma`` (ascending order) with ``(I : gamma) = I`` and ``gamma`` vanishing on ``Sing V(I)``.

    With ``along = f`` the candidate must also vanish on the singular locus of
    ``V(I + (f))`` without vanishing on any of its components, so that it
    serves the divisor ``f`` on ``S/I`` as well.
    """
    if I.is_unit():
        raise NoTestElementFound("the unit ideal has no test elements")
    ring = I.ring
    c = height(I)
    sing = singular_locus_ideal(I, c)
    sing_f = If = None
    if along is not None:
        If = I + Ideal(ring, [along])
        if If.is_unit():
            If = None
        else:
            sing_f = singular_locus_ideal(If, c + 1)
            dim_f = krull_dimension(If)
    for g in test_element_candidates(I, candidates or (), c, If):
        if g in I:
            continue
        if not g.is_constant() and ideal_colon(I, Ideal(ring, [g])) != I:
            continue
        if not in_radical(g, sing):
            continue
        if sing_f is not None and not (in_radical(g, sing_f) and avoids_minimal_primes(If, g, dim_f)):
            continue
        return TestElement(g, 1)
    raise NoTestElementFound(f"no candidate passed for {I}")


# -- predicates ----------------------------------------------------------------

def is_purely_f_regular(
    I: Ideal,
    at: Optional[FormalCombination] = None,
    te: Optional[TestElement] = None,
    e_max: int = DEFAULT_E_MAX,
) -> bool:
    """``tau_I(S, a^t) = S``.  Raises ``NotStabilized`` when undecided at ``e_max``."""
    comp = test_ideal_along_computation(I, at, te, e_max, certify=False)
    return comp.result.is_unit()


def strongly_f_regular_witness(
    I: Ideal, fs: Sequence[Polynomial], te: Optional[TestElement] = None, e_max: int = DEFAULT_E_MAX
) -> Optional[int]:
    """Smallest ``e <= e_max`` with ``gamma^N (I^[q] : I) ⊄ m^[q]``, else ``None``.

    For a complete intersection ``(I^[q] : I) = (u^{q-1}) + I^[q]`` with
    ``u = prod f_i``, and ``h ∉ m^[q]`` exactly when ``h^{[1/q]} ⊄ m``.
    """
    ring = I.ring
    fs = list(fs)
    if height(I) != len(fs) or Ideal(ring, fs) != I:
        raise HeightMismatch("I must be the complete intersection generated by fs")
    te = te or find_test_element(I)
    gamma = te.power()
    u = ring.one()
    for f in fs:
        u = u * f
    at_origin = all(not (0 in g.terms) for g in I.gb())
    if not at_origin:
        return 1  # I^[q] already escapes m^[q]
    for e in range(1, e_max + 1):
        q = ring.p ** e
        K = root_of_product(ring, gamma, [([u], q - 1)], e)
        if any(0 in g.terms for g in K.gb()):
            return e
    return None


def is_strongly_f_regular_quotient(
    I: Ideal, fs: Sequence[Polynomial], te: Optional[TestElement] = None, e_max: int = DEFAULT_E_MAX
) -> bool:
    """Fedder-type search; ``False`` only means no witness up to ``e_max``."""
    return strongly_f_regular_witness(I, fs, te, e_max) is not None


# -- monomial oracle -------------------------------------------------------------

def _interior_margin(w, blocks) -> float:
    """Largest ``eps`` with ``w - eps*1`` in ``sum_i t_i * Newt(a_i)``."""
    import numpy as np
    from scipy.optimize import linprog

    n = len(w)
    nl = sum(len(V) for _, V in blocks)
    # variables: lambdas, slacks (n), eps
    nv = nl + n + 1
    A_eq = np.zeros((n + len(blocks), nv))
    b_eq = np.zeros(n + len(blocks))
    col = 0
    for bi, (t, V) in enumerate(blocks):
        for v in V:
            for k in range(n):
                A_eq[k, col] = float(t) * v[k]
            A_eq[n + bi, col] = 1.0
            col += 1
        b_eq[n + bi] = 1.0
    for k in range(n):
        A_eq[k, nl + k] = 1.0
        A_eq[k, nv - 1] = 1.0
        b_eq[k] = w[k]
    cost = np.zeros(nv)
    cost[-1] = -1.0
    bounds = [(0, None)] * (nl + n) + [(None, None)]
    res = linprog(cost, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        return -math.inf
    return -res.fun


def monomial_test_ideal_oracle(
    at: FormalCombination,
    degree_bound: Optional[int] = None,
    ring: Optional[RingContext] = None,
    tol: float = 1e-9,
) -> Ideal:
    """Monomials ``x^u`` with ``u + 1`` in the interior of ``sum t_i Newt(a_i)``.

    Minimal generators have ``u_k <= floor(M_k)``, ``M_k`` the largest
    ``k``-th coordinate of a vertex, so the search is a finite box; a
    ``degree_bound`` below the box's reach raises ``DegreeBoundTooSmall``
    whenever something beyond the bound is missing.
    """
    ring = _ring_of(at, None, ring)
    n = ring.nvars
    blocks = []
    for a, t in at.factors:
        if not a.is_monomial():
            a = Ideal(ring, a.gb())
            if not a.is_monomial():
                raise ValueError("oracle needs monomial ideals")
        blocks.append((t, [ring.decode(g.lm) for g in a.gb()]))
    if not blocks:
        return Ideal.unit(ring)
    M = [0] * n
    for t, V in blocks:
        for k in range(n):
            M[k] += t * max(v[k] for v in V)
    box = [math.floor(x) for x in M]
    reach = sum(box)
    limit = reach if degree_bound is None else min(degree_bound, reach)
    found: List[Tuple[int, ...]] = []

    def covered(u):
        return any(all(a <= b for a, b in zip(g, u)) for g in found)

    beyond = False
    for u in sorted(itertools.product(*[range(b + 1) for b in box]), key=lambda u: (sum(u), u)):
        if covered(u):
            continue
        if sum(u) > limit:
            if _interior_margin([x + 1 for x in u], blocks) > tol:
                beyond = True
                break
            continue
        if _interior_margin([x + 1 for x in u], blocks) > tol:
            found.append(u)
    if beyond:
        raise DegreeBoundTooSmall(f"generators exist beyond degree {degree_bound}")
    return Ideal(ring, [ring.monomial(u) for u in found])
