"""Frobenius bracket powers ``J^[q]`` and Frobenius roots ``J^[1/q]``.

Over ``F_p`` every coefficient is its own ``p``-th root, so the root of a
polynomial is pure exponent bookkeeping: split each exponent as
``e = q*b + alpha`` with ``0 <= alpha < q`` and collect, for each ``alpha``,
the polynomial ``sum c * x^b``.  The root of an ideal is the ideal generated
by all these components over all generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .algebra import MAX_EXPONENT, Polynomial, RingContext
from .errors import DegreeExplosion
from .groebner import LIMITS, Ideal, _dedupe, buchberger


@dataclass(frozen=True)
class FrobeniusLevel:
    p: int
    e: int

    def __post_init__(self):
        if self.e < 0:
            raise ValueError("Frobenius level must be nonnegative")
        if self.p ** self.e > MAX_EXPONENT:
            raise DegreeExplosion(f"q = {self.p}^{self.e} exceeds the exponent budget")

    @property
    def q(self) -> int:
        return self.p ** self.e

    @classmethod
    def from_q(cls, p: int, q: int) -> "FrobeniusLevel":
        e, r = 0, q
        while r % p == 0 and r > 1:
            r //= p
            e += 1
        if r != 1:
            raise ValueError(f"{q} is not a power of {p}")
        return cls(p, e)


QLike = Union[int, FrobeniusLevel]


def _as_q(ring: RingContext, q: QLike) -> int:
    if isinstance(q, FrobeniusLevel):
        if q.p != ring.p:
            raise ValueError("Frobenius level belongs to a different characteristic")
        return q.q
    return FrobeniusLevel.from_q(ring.p, q).q


def bracket_power(J: Ideal, q: QLike) -> Ideal:
    """Ideal generated by the ``q``-th powers of the generators of ``J``."""
    q = _as_q(J.ring, q)
    # x_i -> x_i^q preserves the order and divisibility of monomials, so the
    # image of a reduced basis is again a reduced basis
    return Ideal.from_gb(J.ring, [g.frobenius(q) for g in J.gb()])


def root_components(f: Polynomial, q: int) -> List[Polynomial]:
    """The polynomials ``g_alpha`` with ``f = sum_alpha g_alpha^q x^alpha``."""
    ring = f.ring
    if q == 1:
        return [f] if f else []
    comps: Dict[Tuple[int, ...], Dict[int, int]] = {}
    dec, enc = ring.decode, ring.encode
    for t, c in f.terms.items():
        e = dec(t)
        alpha = tuple(x % q for x in e)
        comps.setdefault(alpha, {})[enc([x // q for x in e])] = c
    return [Polynomial(ring, d) for d in comps.values()]


def _root_of_generators(ring: RingContext, gens: Iterable[Polynomial], q: int) -> Ideal:
    out = []
    for g in gens:
        out.extend(root_components(g, q))
    return Ideal(ring, buchberger(_dedupe(ring, out), ring)) if out else Ideal.zero(ring)


def frobenius_root(J: Ideal, q: QLike) -> Ideal:
    """Smallest ideal ``K`` with ``J ⊆ K^[q]``; the result carries its reduced basis."""
    q = _as_q(J.ring, q)
    src = J.gb() if J._gb is not None else J.generators
    return _root_of_generators(J.ring, src, q)


# -- roots of products ---------------------------------------------------------

def _shrink(ring: RingContext, polys: List[Polynomial]) -> List[Polynomial]:
    polys = _dedupe(ring, polys)
    if len(polys) > 8 and not all(f.is_monomial() for f in polys):
        polys = buchberger(polys, ring)
    return polys


def _truncated_power(ring: RingContext, gens: Sequence[Polynomial], w: int, p: int) -> List[Polynomial]:
    """Generators of the ideal spanned by ``g^r`` with ``|r| = w`` and every ``r_j < p``.

    Built one generator at a time: ``T_j(v) = sum_r g_j^r T_{j-1}(v - r)``,
    each partial ideal shrunk to a basis before it is reused.
    """
    k = len(gens)
    if w == 0:
        return [ring.one()]
    if w > k * (p - 1):
        return []
    pows = []
    for g in gens:
        row = [ring.one()]
        for _ in range(min(w, p - 1)):
            row.append(row[-1] * g)
        pows.append(row)
    # layer[v] generates T_j(v) for the first j generators
    layer = {v: [pows[0][v]] for v in range(min(w, p - 1) + 1)}
    for j in range(1, k):
        cap = (j + 1) * (p - 1)
        remaining = (k - 1 - j) * (p - 1)
        targets = [w] if j == k - 1 else range(max(0, w - remaining), min(w, cap) + 1)
        new = {}
        for v in targets:
            out = []
            for r in range(0, min(v, p - 1) + 1):
                base = layer.get(v - r)
                if base:
                    out.extend(b * pows[j][r] for b in base)
            if len(out) > LIMITS.max_generators:
                raise DegreeExplosion("truncated power has too many generators")
            if out:
                new[v] = _shrink(ring, out)
        layer = new
    return layer.get(w, [])


def root_of_product(
    ring: RingContext,
    gamma: Polynomial,
    powers: Sequence[Tuple[Sequence[Polynomial], int]],
    e: int,
) -> Ideal:
    """``(gamma * prod_i A_i^{n_i})^{[1/p^e]}`` without expanding the powers.

    ``powers`` lists ``(generators of A_i, n_i)``.  Every generator tuple
    ``g^beta`` with ``|beta| = n`` is split as ``beta = q*b + r`` with
    ``0 <= r < q``, so the root is ``sum_r A^{(n-|r|)/q} * (gamma g^r)^{[1/q]}``.
    The inner roots are taken one base-``p`` digit of ``r`` at a time,
    ``(K g^{r_d p^d} ...)`` becoming ``(K * T_w)^{[1/p]}`` where ``T_w`` is the
    truncated power of weight ``w = |r_d|``; partial sums of ``|r|`` must agree
    with ``n`` modulo ``p^d``, which leaves few states per level.
    """
    p = ring.p
    q = p ** e
    powers = [([f for f in g if f], n) for g, n in powers if n > 0]
    for gens, _ in powers:
        if not gens:
            return Ideal.zero(ring)
    if not gamma:
        return Ideal.zero(ring)
    if any(len(g) == 1 and g[0].is_constant() for g, _ in powers):
        powers = [(g, n) for g, n in powers if not (len(g) == 1 and g[0].is_constant())]
    m = len(powers)
    states: Dict[Tuple[int, ...], List[Polynomial]] = {(0,) * m: [gamma]}
    tcache: Dict[Tuple[int, int], List[Polynomial]] = {}

    def T(i: int, w: int) -> List[Polynomial]:
        if (i, w) not in tcache:
            tcache[(i, w)] = _truncated_power(ring, powers[i][0], w, p)
        return tcache[(i, w)]

    pd = 1
    for d in range(e):
        new: Dict[Tuple[int, ...], List[Polynomial]] = {}
        options = []
        for i, (gens, n) in enumerate(powers):
            options.append(len(gens) * (p - 1))
        for s, K in states.items():
            choices = []
            for i, (gens, n) in enumerate(powers):
                w0 = ((n - s[i]) // pd) % p
                ws = [w for w in range(w0, options[i] + 1, p) if s[i] + w * pd <= n]
                choices.append(ws)
            for combo in itertools.product(*choices):
                factors = [T(i, w) for i, w in enumerate(combo)]
                if any(not f for f in factors):
                    continue
                prods = list(K)
                for f in factors:
                    if len(prods) * len(f) > LIMITS.max_generators:
                        raise DegreeExplosion("root-of-product generating set too large")
                    prods = [a * b for a in prods for b in f]
                comps = []
                for g in prods:
                    comps.extend(root_components(g, p))
                s2 = tuple(s[i] + combo[i] * pd for i in range(m))
                new.setdefault(s2, []).extend(comps)
        states = {}
        for s2, gens in new.items():
            gb = buchberger(_dedupe(ring, gens), ring)
            if gb:
                states[s2] = gb
        pd *= p
    total: List[Polynomial] = []
    for s, K in states.items():
        gens = list(K)
        for i, (A, n) in enumerate(powers):
            b = (n - s[i]) // q
            if b:
                Ab = Ideal(ring, A) ** b
                gens = [x * y for x in gens for y in Ab.generators]
        total.extend(gens)
    if not total:
        return Ideal.zero(ring)
    return Ideal(ring, buchberger(_dedupe(ring, total), ring))
