"""Containment ``tau_{fR}(R, aR^t) ⊆ tau_I(S, a^t) R`` at a fixed prime, with ``R = S/I``."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Polynomial
from .errors import ContainmentViolation, NoTestElementFound, NonPrincipalLink
from .frobenius import bracket_power, root_of_product
from .groebner import FormalCombination, Ideal, ideal_colon, ideal_contains
from .linkage import (
    LinkageProblem,
    certify_frobenius_colon,
    ci_generators,
    fedder_generator,
    frobenius_colon,
    product_of,
)
from .tau import (
    DEFAULT_E_MAX,
    TauComputation,
    TestElement,
    _ceil_tq,
    _check_factors,
    _check_gamma,
    _check_gamma_along,
    adapt_N,
    find_test_element,
    ideal_order,
    run_chain,
    test_ideal_along_computation,
)


def _colon_plan(I: Ideal, method: str):
    """How to produce ``(I^[q] : I)`` modulo ``I^[q]`` at each level.

    Returns ``("power", u, ord_u)`` meaning ``u^{(q-1)/(p-1)}`` generates, or
    ``("colon", None, None)`` for a direct colon per level.
    """
    ring = I.ring
    p = ring.p
    if method == "colon":
        return "colon", None, None
    gens = ci_generators(I)
    if gens is not None:
        u = product_of(gens, ring) ** (p - 1)
        return "power", u, u.order_at_origin()
    try:
        u = fedder_generator(I)
    except NonPrincipalLink:
        if method == "fedder":
            raise
        return "colon", None, None
    # the power chain is only trusted once it is checked at the second level
    if certify_frobenius_colon(I, 2, u ** (p + 1)) or frobenius_colon(I, 2) == Ideal(ring, [u ** (p + 1)]) + bracket_power(I, p * p):
        return "power", u, u.order_at_origin()
    if method == "fedder":
        raise NonPrincipalLink("(I^[q] : I) is not generated by powers of the Fedder generator")
    return "colon", None, None


def quotient_divisorial_computation(
    I: Ideal,
    f: Polynomial,
    at: Optional[FormalCombination] = None,
    te: Optional[TestElement] = None,
    e_max: int = DEFAULT_E_MAX,
    method: str = "auto",
    check: bool = True,
    certify: bool = True,
    max_N: int = 8,
) -> TauComputation:
    """Chain ``K_e = I + sum_{e' <= e} (gamma^N f^{q-1} (I^[q] : I) prod a_i^{ceil(t_i q)})^{[1/q]}``.

    Factors ``a_i + I`` are replaced by ``a_i``: the difference multiplies
    ``(I^[q] : I)`` into ``I^[q]``, whose root lies in ``I``.  ``N`` doubles
    as in ``test_ideal_along_computation``.
    """
    at = at or FormalCombination.trivial()
    ring = I.ring
    p = ring.p
    if check:
        _check_gamma(I, f, "f")
    if te is None:
        te = find_test_element(I, along=f)
    if check:
        _check_gamma(I, te.gamma)
        _check_gamma_along(I, f, te.gamma)
        _check_factors(I, at)
    kind, u, ord_u = _colon_plan(I, method)
    factor_gens = [(list(a.minimal_generators()), t) for a, t in at.factors]
    colons = {}

    def once(elt: TestElement):
        gamma = elt.power()

        def term(e):
            q = p ** e
            powers = [([f], q - 1)] + [(g, _ceil_tq(t, q)) for g, t in factor_gens]
            if kind == "power":
                powers.append(([u], (q - 1) // (p - 1)))
                return root_of_product(ring, gamma, powers, e)
            if e not in colons:
                colons[e] = list(frobenius_colon(I, e).gb())
            return root_of_product(ring, gamma, powers + [(colons[e], 1)], e)

        saturation = None
        if kind == "power":
            ord_f = f.order_at_origin()
            slope = ord_f + Fraction(ord_u, p - 1) + sum((t * ideal_order(a) for a, t in at.factors), Fraction(0))
            intercept = gamma.order_at_origin() - ord_f - Fraction(ord_u, p - 1)
            saturation = (slope, intercept)
        return run_chain(term, ring, e_max, base=I, saturation=saturation)

    return adapt_N(TauComputation(I, at, te, e_max), once, certify, max_N)


def quotient_divisorial_test_ideal(
    I: Ideal,
    f: Polynomial,
    at: Optional[FormalCombination] = None,
    te: Optional[TestElement] = None,
    e_max: int = DEFAULT_E_MAX,
    method: str = "auto",
) -> Ideal:
    """Lift to ``S`` of ``tau_{fR}(R, aR^t)``, ``R = S/I`` Gorenstein; contains ``I``."""
    return quotient_divisorial_computation(I, f, at, te, e_max, method).result


@dataclass
class RestrictionReport:
    I: Ideal
    at: FormalCombination
    linkage: LinkageProblem
    test_element: TestElement
    e_max: int
    lhs: Ideal
    rhs: Ideal
    containment_holds: bool
    equality_holds: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "p": self.I.ring.p,
            "ideal": [str(g) for g in self.I.gb()],
            "at": [[[str(g) for g in a.gb()], str(t)] for a, t in self.at.factors],
            "fs": [str(f) for f in self.linkage.fs],
            "link_generator": str(self.linkage.f),
            "seed": self.linkage.seed,
            "gamma": str(self.test_element.gamma),
            "N": self.test_element.N,
            "e_max": self.e_max,
            "lhs": [str(g) for g in self.lhs.gb()],
            "rhs": [str(g) for g in self.rhs.gb()],
            "containment_holds": self.containment_holds,
            "equality_holds": self.equality_holds,
            "diagnostics": self.diagnostics,
        }


def restriction_report(
    I: Ideal,
    at: Optional[FormalCombination] = None,
    seed: int = 0,
    e_max: int = DEFAULT_E_MAX,
    te: Optional[TestElement] = None,
    method: str = "auto",
) -> RestrictionReport:
    """Generic link, both sides of the containment, and the verdict.

    When no candidate passes the test-element search (for instance an
    ``S/I`` of dimension zero, where only units avoid every minimal prime)
    the run continues with ``gamma = 1`` marked uncertified; a link
    generator that is a zerodivisor modulo ``I`` is recorded rather than
    rejected.  A failed containment raises ``ContainmentViolation`` with the
    report attached.
    """
    at = at or FormalCombination.trivial()
    ring = I.ring
    diag: dict = {}
    t0 = time.perf_counter()
    lp = LinkageProblem.build(I, seed)
    diag["link_seconds"] = round(time.perf_counter() - t0, 4)
    if te is None:
        try:
            te = find_test_element(I, along=lp.f if lp.f else None)
        except NoTestElementFound:
            te = TestElement(ring.one(), 1, certified=False)
            diag["test_element"] = "fallback gamma = 1 (no candidate passed)"
    link_regular = lp.f.is_constant() or ideal_colon(I, Ideal(ring, [lp.f])) == I if lp.f else False
    diag["link_regular"] = link_regular
    _check_gamma(I, te.gamma)
    _check_factors(I, at)

    t0 = time.perf_counter()
    right = test_ideal_along_computation(I, at, te, e_max)
    diag["rhs_seconds"] = round(time.perf_counter() - t0, 4)
    diag["rhs_stop"] = right.stop_reason
    diag["rhs_stabilized_at"] = right.stabilized_at
    diag["tau_along"] = [str(g) for g in right.result.gb()]
    diag["N_certified"] = right.certified
    if right.test_element.N != te.N:
        te = right.test_element

    t0 = time.perf_counter()
    left = quotient_divisorial_computation(I, lp.f, at, te, e_max, method, check=False)
    diag["lhs_seconds"] = round(time.perf_counter() - t0, 4)
    diag["lhs_stop"] = left.stop_reason
    diag["lhs_stabilized_at"] = left.stabilized_at
    diag["lhs_chain"] = [[str(g) for g in P.gb()] for P in left.chain]
    diag["lhs_N_certified"] = left.certified
    if left.test_element.N > te.N:
        te = left.test_element

    lhs = left.result
    rhs = right.result + I
    rhs = Ideal.from_gb(ring, rhs.gb())
    contained = ideal_contains(rhs, lhs)
    equal = contained and ideal_contains(lhs, rhs)
    report = RestrictionReport(I, at, lp, te, e_max, lhs, rhs, contained, equal, diag)
    if not contained:
        err = ContainmentViolation(f"lhs {lhs} is not contained in rhs {rhs}")
        err.report = report
        raise err
    return report
