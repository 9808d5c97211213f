"""Buchberger's algorithm and the ideal operations built on it."""

from __future__ import annotations

import contextlib
import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import MonomialOrder, Polynomial, RingContext
from .errors import DegreeExplosion, RingMismatch, UnitIdeal


@dataclass
class Limits:
    """Resource ceilings; ``None`` disables a check."""

    degree_limit: Optional[int] = None
    max_generators: int = 200_000
    max_pairs: int = 2_000_000


LIMITS = Limits()


@contextlib.contextmanager
def limits(**kwargs):
    """Temporarily override fields of :data:`LIMITS`."""
    old = {k: getattr(LIMITS, k) for k in kwargs}
    for k, v in kwargs.items():
        setattr(LIMITS, k, v)
    try:
        yield LIMITS
    finally:
        for k, v in old.items():
            setattr(LIMITS, k, v)


# -- reduction kernel --------------------------------------------------------

class _Reducer:
    """A monic polynomial prepared for repeated use as a reducer."""

    __slots__ = ("lm", "klm", "tail", "poly", "sugar")

    def __init__(self, g: Polynomial, sugar: int):
        key = g.ring.key
        self.poly = g
        self.lm = g.lm
        self.klm = key(self.lm)
        self.tail = [(t, key(t), c) for t, c in g.terms.items() if t != self.lm]
        self.sugar = sugar


def _reduce(ring: RingContext, terms: Dict[int, int], reducers: Sequence[_Reducer], full: bool = True) -> Dict[int, int]:
    """Normal form of ``terms`` (consumed) with respect to monic ``reducers``."""
    if not terms or not reducers:
        return terms
    p = ring.p
    guard = ring.guard
    key = ring.key
    limit = LIMITS.degree_limit
    coef: Dict[int, int] = {}
    mono: Dict[int, int] = {}
    for t, c in terms.items():
        k = key(t)
        coef[k] = c
        mono[k] = t
    heap = [-k for k in coef]
    heapq.heapify(heap)
    rem: Dict[int, int] = {}
    red = [(r.lm, r.klm, r.tail) for r in reducers]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        k = -pop(heap)
        c = coef.pop(k, 0)
        if not c:
            continue
        T = mono.pop(k)
        for L, kL, tail in red:
            if not ((T - L) & guard):
                shift = T - L
                dk = k - kL
                for t, kt, d in tail:
                    ku = kt + dk
                    old = coef.get(ku)
                    if old is None:
                        u = t + shift
                        if u & guard:
                            raise DegreeExplosion("exponent overflow during reduction")
                        coef[ku] = (-c * d) % p
                        mono[ku] = u
                        push(heap, -ku)
                    else:
                        nv = (old - c * d) % p
                        coef[ku] = nv  # zero entries are skipped when popped
                break
        else:
            rem[T] = c
            if not full:
                for k2, c2 in coef.items():
                    if c2:
                        rem[mono[k2]] = c2
                return rem
    if limit is not None and rem:
        if max(ring.mono_degree(t) for t in rem) > limit:
            raise DegreeExplosion(f"degree limit {limit} exceeded")
    return rem


def _interreduce(ring: RingContext, polys: List[Polynomial]) -> List[Polynomial]:
    """Reduced basis from a minimal monic Gröbner basis."""
    # every term met while reducing the tail of g lies below lm(g), so g
    # itself never fires and one shared reducer list suffices
    reducers = [_Reducer(h, 0) for h in polys]
    out = []
    for g in polys:
        tail = {t: c for t, c in g.terms.items() if t != g.lm}
        tail = _reduce(ring, tail, reducers)
        tail[g.lm] = 1
        out.append(Polynomial(ring, tail))
    return out


def _mono_degree_fn(ring: RingContext):
    if ring.order.kind == "grevlex":
        s = 32 * ring.nvars
        return lambda t: t >> s
    return ring.mono_degree


def buchberger(polys: Iterable[Polynomial], ring: RingContext) -> List[Polynomial]:
    """Reduced Gröbner basis of ``polys`` under ``ring.order``, sorted by descending leading monomial.

    Normal-strategy pair selection (smallest lcm first, sugar as tie-break)
    with the Gebauer–Möller installation criteria.
    """
    gens = []
    for f in polys:
        if f.ring != ring:
            raise RingMismatch(f"{f.ring} vs {ring}")
        if f:
            if f.is_constant():
                return [ring.one()]
            gens.append(f.monic())
    if not gens:
        return []
    key = ring.key
    mdeg = _mono_degree_fn(ring)
    lcm = ring.mono_lcm

    basis: List[_Reducer] = []
    active: List[bool] = []
    pairs: List[Tuple[int, int, int, int, int]] = []  # (key(lcm), sugar, lcm, i, j)

    def update(h: Polynomial, sugar: int):
        nonlocal pairs
        hr = _Reducer(h, sugar)
        hl = hr.lm
        idx = len(basis)
        groups: Dict[int, List[Tuple[int, bool]]] = {}
        for i, r in enumerate(basis):
            if active[i]:
                la = lcm(hl, r.lm)
                groups.setdefault(la, []).append((i, la == hl + r.lm))
        guard = ring.guard
        # a pair whose lcm is a proper multiple of another new lcm is
        # redundant; of pairs sharing an lcm one survives, none if any is coprime
        kept: List[int] = []
        new = []
        for la in sorted(groups, key=key):
            if any(not ((la - lb) & guard) for lb in kept):
                continue
            kept.append(la)
            members = groups[la]
            if not any(cop for _, cop in members):
                new.append((members[0][0], la))
        # old pairs made redundant by h
        filtered = []
        for entry in pairs:
            _, _, L, i, j = entry
            if not ((L - hl) & guard):
                li = lcm(basis[i].lm, hl)
                lj = lcm(basis[j].lm, hl)
                if li != L and lj != L:
                    continue
            filtered.append(entry)
        pairs = filtered
        for i, la in new:
            r = basis[i]
            s = max(r.sugar + mdeg(la) - mdeg(r.lm), sugar + mdeg(la) - mdeg(hl))
            pairs.append((key(la), s, la, i, idx))
        heapq.heapify(pairs)
        if len(pairs) > LIMITS.max_pairs:
            raise DegreeExplosion("too many critical pairs")
        for i, r in enumerate(basis):
            if active[i] and not ((r.lm - hl) & guard):
                active[i] = False
        basis.append(hr)
        active.append(True)

    gens.sort(key=lambda g: key(g.lm))
    for g in gens:
        rs = [r for r, a in zip(basis, active) if a]
        rem = _reduce(ring, dict(g.terms), rs)
        if not rem:
            continue
        h = Polynomial(ring, rem).monic()
        if h.is_constant():
            return [ring.one()]
        update(h, g.total_degree())

    while pairs:
        _, s, L, i, j = heapq.heappop(pairs)
        gi, gj = basis[i], basis[j]
        terms: Dict[int, int] = {}
        p = ring.p
        si, sj = L - gi.lm, L - gj.lm
        for t, _, c in gi.tail:
            terms[t + si] = c
        for t, _, c in gj.tail:
            u = t + sj
            v = (terms.get(u, 0) - c) % p
            if v:
                terms[u] = v
            else:
                terms.pop(u, None)
        rs = [r for r, a in zip(basis, active) if a]
        rem = _reduce(ring, terms, rs)
        if not rem:
            continue
        h = Polynomial(ring, rem).monic()
        if h.is_constant():
            return [ring.one()]
        update(h, s)

    minimal = [r.poly for r, a in zip(basis, active) if a]
    reduced = _interreduce(ring, minimal)
    reduced.sort(key=lambda g: key(g.lm), reverse=True)
    return reduced


# -- ideals --------------------------------------------------------------------

class Ideal:
    """Ideal of a :class:`RingContext` given by generators, with a cached reduced basis."""

    __slots__ = ("ring", "generators", "_gb", "_hash")

    def __init__(self, ring: RingContext, generators: Iterable = ()):
        gens = []
        for g in generators:
            if isinstance(g, (str, int)):
                g = ring(g)
            if g.ring != ring:
                raise RingMismatch(f"{g.ring} vs {ring}")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._gb: Optional[Tuple[Polynomial, ...]] = None
        self._hash = None

    @classmethod
    def from_gb(cls, ring: RingContext, gb: Sequence[Polynomial]) -> "Ideal":
        """Wrap a basis already known to be reduced under ``ring.order``."""
        I = cls(ring, gb)
        I._gb = tuple(gb)
        return I

    @classmethod
    def maximal(cls, ring: RingContext) -> "Ideal":
        return cls.from_gb(ring, sorted(ring.gens(), key=lambda g: ring.key(g.lm), reverse=True))

    @classmethod
    def unit(cls, ring: RingContext) -> "Ideal":
        return cls.from_gb(ring, [ring.one()])

    @classmethod
    def zero(cls, ring: RingContext) -> "Ideal":
        return cls.from_gb(ring, [])

    def gb(self) -> Tuple[Polynomial, ...]:
        if self._gb is None:
            self._gb = tuple(buchberger(self.generators, self.ring))
        return self._gb

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        gb = self.gb()
        return len(gb) == 1 and gb[0].is_constant()

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def __contains__(self, f) -> bool:
        if isinstance(f, (str, int)):
            f = self.ring(f)
        return not normal_form(f, self)

    def __le__(self, other: "Ideal") -> bool:
        return ideal_contains(other, self)

    def __ge__(self, other: "Ideal") -> bool:
        return ideal_contains(self, other)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb() == other.gb()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.gb()))
        return self._hash

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.generators])
        return ideal_product(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Ideal":
        return ideal_power(self, n)

    def to_ring(self, ring: RingContext) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.generators])

    def minimal_generators(self) -> Tuple[Polynomial, ...]:
        """Basis elements not in the ideal of the remaining ones, largest dropped first."""
        gens = list(self.gb())
        if len(gens) <= 1 or all(g.is_monomial() for g in gens):
            return tuple(gens)
        for g in list(gens):
            rest = [h for h in gens if h is not g]
            if rest and g in Ideal(self.ring, rest):
                gens = rest
        return tuple(gens)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gb()) + ")"

    def __repr__(self):
        return f"Ideal{self}"


def _check_same(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


def reduced_groebner_basis(I: Ideal, order: Optional[MonomialOrder] = None) -> List[Polynomial]:
    """Reduced basis of ``I``; under another ``order`` the result lives in the re-ordered ring."""
    if order is None or order == I.ring.order:
        return list(I.gb())
    R = I.ring.with_order(order)
    return buchberger([g.to_ring(R) for g in I.generators], R)


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    gb = I.gb()
    if not gb:
        return f
    rs = [_Reducer(g, 0) for g in gb]
    return Polynomial(f.ring, _reduce(f.ring, dict(f.terms), rs))


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """``J ⊆ I``."""
    _check_same(I, J)
    if J.is_zero():
        return True
    gb = I.gb()
    if not gb:
        return False
    if gb[0].is_constant():
        return True
    rs = [_Reducer(g, 0) for g in gb]
    src = J._gb if J._gb is not None and len(J._gb) <= len(J.generators) else J.generators
    return all(not _reduce(I.ring, dict(g.terms), rs) for g in src)


def ideal_sum(*ideals: Ideal) -> Ideal:
    ring = ideals[0].ring
    gens = []
    for J in ideals:
        _check_same(ideals[0], J)
        gens.extend(J.gb() if J._gb is not None else J.generators)
    return Ideal(ring, gens)


def _minimalize_monomials(ring: RingContext, monos: Iterable[int]) -> List[int]:
    guard = ring.guard
    ms = sorted(set(monos), key=ring.mono_degree)
    kept: List[int] = []
    for m in ms:
        if not any(not ((m - k) & guard) for k in kept):
            kept.append(m)
    return kept


def _dedupe(ring: RingContext, polys: Iterable[Polynomial]) -> List[Polynomial]:
    polys = [f.monic() for f in polys if f]
    if all(f.is_monomial() for f in polys):
        return [Polynomial(ring, {t: 1}) for t in _minimalize_monomials(ring, [f.lm for f in polys])]
    seen = {}
    for f in polys:
        seen.setdefault(f, None)
    return list(seen)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _check_same(I, J)
    A = I.gb() if I._gb is not None else I.generators
    B = J.gb() if J._gb is not None else J.generators
    if len(A) * len(B) > LIMITS.max_generators:
        raise DegreeExplosion("product generating set exceeds the generator limit")
    return Ideal(I.ring, _dedupe(I.ring, [a * b for a in A for b in B]))


def ideal_power(I: Ideal, n: int) -> Ideal:
    """``I**n`` from products of generators; reduced to a Gröbner basis when it grows large."""
    if n < 0:
        raise ValueError("negative ideal power")
    ring = I.ring
    if n == 0:
        return Ideal.unit(ring)
    if I.is_zero():
        return Ideal.zero(ring)
    gens = list(I.generators)
    if len(gens) == 1:
        return Ideal(ring, [gens[0] ** n])
    # small-generator form: minimal generators of I
    base = list(I.gb()) if len(I.gb()) <= len(gens) else gens
    cur = [ring.one()]
    for _ in range(n):
        if len(cur) * len(base) > LIMITS.max_generators:
            raise DegreeExplosion("power generating set exceeds the generator limit")
        cur = _dedupe(ring, [a * b for a in cur for b in base])
        if len(cur) > 64 and not all(f.is_monomial() for f in cur):
            gb = buchberger(cur, ring)
            if len(gb) < len(cur):
                cur = gb
    return Ideal(ring, cur)


def _fresh_name(ring: RingContext, stem: str = "_t") -> str:
    name = stem
    i = 0
    while name in ring.variables:
        i += 1
        name = f"{stem}{i}"
    return name


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating ``t`` from ``t·I + (1 − t)·J``."""
    _check_same(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ring)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    t = _fresh_name(ring)
    E = RingContext(ring.p, (t,) + ring.variables, MonomialOrder.elimination(1))
    tt = E.gen(t)
    gens = [tt * g.to_ring(E) for g in I.gb()] + [(1 - tt) * g.to_ring(E) for g in J.gb()]
    gb = buchberger(gens, E)
    out = [g.to_ring(ring) for g in gb if 0 not in g.variables_used()]
    return Ideal(ring, out)


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    """``f / g`` when ``g`` divides ``f``; raises ``ValueError`` otherwise."""
    ring = f.ring
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    gm = g.monic()
    inv = pow(g.leading_coefficient(), -1, ring.p)
    r = _Reducer(gm, 0)
    quotient: Dict[int, int] = {}
    cur = f
    guard = ring.guard
    p = ring.p
    while cur:
        T = cur.lm
        if (T - r.lm) & guard:
            raise ValueError("division is not exact")
        c = cur.terms[T]
        s = T - r.lm
        quotient[s] = (quotient.get(s, 0) + c) % p
        cur = cur - Polynomial(ring, {s: c}) * gm
    return Polynomial(ring, {t: (c * inv) % p for t, c in quotient.items() if c})


def ideal_colon(I: Ideal, J: Ideal) -> Ideal:
    """``(I : J)`` as the intersection of ``(I ∩ (j)) / j`` over generators ``j``."""
    _check_same(I, J)
    ring = I.ring
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    if I.is_unit():
        return Ideal.unit(ring)
    result: Optional[Ideal] = None
    for j in J.gb():
        if j.is_constant():
            part = I
        else:
            inter = ideal_intersection(I, Ideal(ring, [j]))
            part = Ideal(ring, [divide_exact(h, j) for h in inter.gb()])
        result = part if result is None else ideal_intersection(result, part)
        if result.is_unit() is False and ideal_contains(I, result):
            break  # cannot shrink below I
    return result


def krull_dimension(I: Ideal) -> int:
    """Dimension of ``R/I``: the largest set of variables independent modulo the leading ideal."""
    ring = I.ring
    gb = I.gb()
    if gb and gb[0].is_constant():
        raise UnitIdeal("the unit ideal has no dimension")
    n = ring.nvars
    supports = []
    for g in gb:
        e = ring.decode(g.lm)
        supports.append(frozenset(i for i in range(n) if e[i]))
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def height(I: Ideal) -> int:
    return I.ring.nvars - krull_dimension(I)


# -- formal products -----------------------------------------------------------

def _as_fraction(t) -> Fraction:
    if isinstance(t, float):
        raise TypeError("exponents must be exact rationals, not floats")
    return Fraction(t)


class FormalCombination:
    """``a_1^{t_1} ⋯ a_m^{t_m}`` with exact positive rational exponents; empty means the unit ideal."""

    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[Tuple[Ideal, object]] = ()):
        out = []
        for a, t in factors:
            t = _as_fraction(t)
            if t <= 0:
                raise ValueError("exponents must be positive")
            if a.is_zero():
                raise ValueError("factor ideals must be nonzero")
            out.append((a, t))
        self.factors: Tuple[Tuple[Ideal, Fraction], ...] = tuple(out)

    @classmethod
    def trivial(cls) -> "FormalCombination":
        return cls(())

    def is_trivial(self) -> bool:
        return not self.factors

    def scaled(self, s) -> "FormalCombination":
        s = _as_fraction(s)
        return FormalCombination((a, t * s) for a, t in self.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __str__(self):
        if not self.factors:
            return "(1)"
        return " * ".join(f"{a}^({t})" for a, t in self.factors)

    def __repr__(self):
        return f"FormalCombination({self})"
