"""Linkage data: generic regular sequences, the link generator, Claim-2 style colon checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .algebra import Polynomial, RingContext
from .errors import GenericityFailure, HeightMismatch, NonPrincipalLink
from .frobenius import bracket_power
from .groebner import Ideal, height, ideal_colon, ideal_contains, normal_form

DEFAULT_RETRIES = 50


@dataclass
class LinkageProblem:
    I: Ideal
    c: int
    fs: List[Polynomial]
    f: Polynomial
    seed: int = 0

    @classmethod
    def build(cls, I: Ideal, seed: int = 0, c: Optional[int] = None) -> "LinkageProblem":
        c = height(I) if c is None else c
        fs = generic_regular_sequence(I, c, seed)
        return cls(I, c, fs, link_generator(I, fs, seed), seed)

    def with_link(self, f: Polynomial) -> "LinkageProblem":
        return LinkageProblem(self.I, self.c, self.fs, f, self.seed)


def product_of(fs: Sequence[Polynomial], ring: RingContext) -> Polynomial:
    u = ring.one()
    for f in fs:
        u = u * f
    return u


def generic_regular_sequence(I: Ideal, c: int, seed: int, retries: int = DEFAULT_RETRIES) -> List[Polynomial]:
    """``c`` seeded random ``F_p``-combinations of the generators of ``I`` generating an ideal of height ``c``."""
    h = height(I)
    if h != c:
        raise HeightMismatch(f"I has height {h}, not {c}")
    ring = I.ring
    gens = list(I.gb())
    rng = random.Random(seed)
    p = ring.p
    for _ in range(retries):
        fs = []
        for _ in range(c):
            f = ring.zero()
            for g in gens:
                f = f + g.scale(rng.randrange(p))
            fs.append(f.monic())
        if any(not f for f in fs):
            continue
        J = Ideal(ring, fs)
        if not J.is_unit() and height(J) == c:
            return fs
    raise GenericityFailure(f"no regular sequence of length {c} found in {retries} draws")


def link_generator(I: Ideal, fs: Sequence[Polynomial], seed: int = 0, tries: int = 30) -> Polynomial:
    """``f`` whose residue generates ``(((fs) : I) + I) / I``, certified by ``(f) + I = ((fs) : I) + I``."""
    ring = I.ring
    for f in fs:
        if f not in I:
            raise ValueError(f"{f} is not in I")
    J = ideal_colon(Ideal(ring, fs), I)
    target = J + I
    if target == I:
        return ring.zero()
    cands = []
    for g in J.gb():
        r = normal_form(g, I)
        if r:
            cands.append(r.monic())
    cands = sorted(set(cands), key=lambda g: (ring.key(g.lm), len(g), str(g)))
    for f in cands:
        if Ideal(ring, [f]) + I == target:
            return f
    rng = random.Random(seed)
    p = ring.p
    for _ in range(tries):
        f = ring.zero()
        for g in cands:
            f = f + g.scale(rng.randrange(p))
        if f and Ideal(ring, [f]) + I == target:
            return f.monic()
    raise NonPrincipalLink("((fs) : I) is not principal modulo I")


# -- Frobenius colons ----------------------------------------------------------

def frobenius_colon(I: Ideal, e: int) -> Ideal:
    """``(I^[q] : I)`` by a direct colon computation."""
    q = I.ring.p ** e
    return ideal_colon(bracket_power(I, q), I)


def fedder_generator(I: Ideal) -> Polynomial:
    """``u`` with ``(I^[p] : I) = (u) + I^[p]``; ``NonPrincipalLink`` if none is found among the basis elements."""
    ring = I.ring
    Ip = bracket_power(I, ring.p)
    C = ideal_colon(Ip, I)
    cands = []
    for g in C.gb():
        r = normal_form(g, Ip)
        if r:
            cands.append(r.monic())
    cands = sorted(set(cands), key=lambda g: (ring.key(g.lm), len(g), str(g)))
    for u in cands:
        if Ideal(ring, [u]) + Ip == C:
            return u
    raise NonPrincipalLink("(I^[p] : I) is not principal modulo I^[p]")


def ci_generators(I: Ideal) -> Optional[List[Polynomial]]:
    """A generating set of length ``height(I)`` if one is at hand (given generators or the basis)."""
    if I.is_unit():
        return None
    h = height(I)
    for gens in (I.generators, I.gb()):
        if len(gens) == h:
            return list(gens)
    return None


def is_complete_intersection(I: Ideal) -> bool:
    return ci_generators(I) is not None


def is_origin_primary(I: Ideal) -> bool:
    """``rad(I)`` is the ideal of the origin."""
    from .tau import in_radical

    if I.is_unit() or height(I) != I.ring.nvars:
        return False
    return all(in_radical(x, I) for x in I.ring.gens())


def frobenius_colon_generator(I: Ideal, e: int, u: Optional[Polynomial] = None) -> Polynomial:
    """``u_q`` with ``(I^[q] : I) = (u_q) + I^[q]`` for Gorenstein ``I``: ``u^{(q-1)/(p-1)}``.

    For a complete intersection ``u = (f_1 ... f_c)^{p-1}`` and ``u_q = (f_1 ... f_c)^{q-1}``.
    """
    ring = I.ring
    p = ring.p
    q = p ** e
    if u is None:
        gens = ci_generators(I)
        if gens is not None:
            return product_of(gens, ring) ** (q - 1)
        u = fedder_generator(I)
    return u ** ((q - 1) // (p - 1))


def socle_element(I: Ideal) -> Optional[Polynomial]:
    """Generator of ``(I : m) / I`` when it is one-dimensional (Artinian Gorenstein ``S/I``)."""
    ring = I.ring
    S = ideal_colon(I, Ideal.maximal(ring))
    extra = [r for r in (normal_form(g, I) for g in S.gb()) if r]
    if not extra:
        return None
    sigma = min(extra, key=lambda g: ring.key(g.lm)).monic()
    if Ideal(ring, [sigma]) + I != S:
        return None
    return sigma


def certify_frobenius_colon(I: Ideal, e: int, uq: Polynomial, sigma: Optional[Polynomial] = None) -> bool:
    """Check ``(I^[q] : I) = (uq) + I^[q]`` without computing the colon (``m``-primary Gorenstein ``I``).

    ``(I^[q] : I) / I^[q]`` is cyclic, isomorphic to ``S/I``; an element
    ``v`` of it generates exactly when ``v * sigma`` survives, ``sigma`` the
    socle generator of ``S/I``.
    """
    ring = I.ring
    if not is_origin_primary(I):
        return False
    if sigma is None:
        sigma = socle_element(I)
        if sigma is None:
            return False
    Iq = bracket_power(I, ring.p ** e)
    if not all(normal_form(uq * g, Iq).is_zero() for g in I.gb()):
        return False
    return not normal_form(uq * sigma, Iq).is_zero()


# -- Claim 2 -------------------------------------------------------------------

@dataclass
class Claim2Result:
    holds: bool
    equality: bool
    method: str
    q: int
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def power_modulo(I: Ideal, n: int, B: Ideal) -> Ideal:
    """``I^n + B`` computed by repeated squaring with reduction modulo ``B``."""
    ring = I.ring
    result = Ideal.unit(ring)
    base = I + B
    while n:
        if n & 1:
            result = Ideal(ring, list((result * base).gb()) + list(B.gb()))
            result = Ideal.from_gb(ring, result.gb())
        n >>= 1
        if n:
            base = Ideal(ring, list((base * base).gb()) + list(B.gb()))
            base = Ideal.from_gb(ring, base.gb())
    return result + B


def pow_mod(P: Polynomial, n: int, J: Ideal) -> Polynomial:
    """Normal form of ``P**n`` modulo ``J`` by square-and-multiply."""
    ring = P.ring
    result = normal_form(ring.one(), J)
    base = normal_form(P, J)
    while n:
        if n & 1:
            result = normal_form(result * base, J)
        n >>= 1
        if n:
            base = normal_form(base * base, J)
    return result


def pow_mod_bracket(P: Polynomial, n: int, I: Ideal, e: int) -> Polynomial:
    """Normal form of ``P**n`` modulo ``I^[p^e]``.

    Each base-``p`` digit ``n_d`` contributes ``(P^{n_d})^{[p^d]}``, and
    ``P^{n_d}`` only matters modulo ``I^[p^{e-d}]``.
    """
    ring = P.ring
    p = ring.p
    Iq = bracket_power(I, p ** e)
    result = normal_form(ring.one(), Iq)
    d = 0
    while n:
        digit = n % p
        if digit:
            if d < e:
                factor = pow_mod(P, digit, bracket_power(I, p ** (e - d)))
            else:
                factor = P ** digit
            result = normal_form(result * factor.frobenius(p ** d), Iq)
        n //= p
        d += 1
    return result


def verify_claim2(lp: LinkageProblem, e: int, colon: str = "auto", shortcut: bool = True) -> Claim2Result:
    """``f^{q-1} (I^[q] : I) ⊆ I^{c(q-1)} + I^[q]``, plus the equality flag
    ``f^{q-1} (I^[q] : I) + I^[q] = ((f_1...f_c)^{q-1}) + I^[q]``.

    ``colon`` is ``"direct"`` (honest colon), ``"gorenstein"`` (generator
    ``u_q`` validated by the socle certificate) or ``"auto"`` (certificate when
    it applies, direct otherwise).  With a certified generator the annihilator
    of ``u_q`` modulo ``I^[q]`` is ``I``, so the left side vanishes exactly
    when ``f^{q-1} ∈ I``.  Otherwise the containment is first tried against
    the smaller ideal ``((f_1...f_c)^{q-1}) + I^[q]``, which lies inside the
    right-hand side; only if that fails is ``I^{c(q-1)} + I^[q]`` built.
    """
    I, f, c = lp.I, lp.f, lp.c
    ring = I.ring
    q = ring.p ** e
    Iq = bracket_power(I, q)
    details = {}
    gens = None
    if colon in ("auto", "gorenstein"):
        try:
            uq = frobenius_colon_generator(I, e)
            if is_complete_intersection(I) or certify_frobenius_colon(I, e, uq):
                gens = [uq]
                details["colon"] = "generator"
        except NonPrincipalLink:
            gens = None
        if gens is None and colon == "gorenstein":
            raise NonPrincipalLink("Gorenstein colon certificate failed")
    if gens is None:
        C = ideal_colon(Iq, I)
        gens = list(C.gb())
        details["colon"] = "direct"
    U = pow_mod_bracket(product_of(lp.fs, ring), q - 1, I, e)
    small = Ideal(ring, [U] + list(Iq.gb()))
    if shortcut and details["colon"] == "generator" and pow_mod(f, q - 1, I).is_zero():
        return Claim2Result(True, U.is_zero(), "lhs-in-bracket", q, details)
    fq = pow_mod_bracket(f, q - 1, I, e)
    lhs = Ideal(ring, [normal_form(fq * g, Iq) for g in gens] + list(Iq.gb()))
    if ideal_contains(small, lhs):
        holds, method = True, "regular-sequence-product"
    else:
        big = power_modulo(I, c * (q - 1), Iq)
        holds, method = ideal_contains(big, lhs), "power"
    equality = ideal_contains(small, lhs) and ideal_contains(lhs, small)
    return Claim2Result(holds, equality, method, q, details)


def fedder_ci_check(fs: Sequence[Polynomial], e: int) -> bool:
    """``(I^[q] : I) = ((f_1...f_c)^{q-1}) + I^[q]`` for ``I = (fs)``, by a direct colon."""
    fs = list(fs)
    ring = fs[0].ring
    I = Ideal(ring, fs)
    if I.is_unit() or height(I) != len(fs):
        raise HeightMismatch("fs is not a regular sequence")
    q = ring.p ** e
    Iq = bracket_power(I, q)
    C = ideal_colon(Iq, I)
    return C == Ideal(ring, [product_of(fs, ring) ** (q - 1)]) + Iq
