"""Sparse multivariate polynomials over a prime field.

Monomials are stored as packed Python integers.  Every variable (and, for
graded orders, every block degree) owns a fixed-width bit field, so that

* multiplying monomials is integer addition,
* divisibility is a single masked subtraction, and
* the monomial order is an integer comparison of a key that is itself
  additive (``key(a * b) == key(a) + key(b)``).

The layout depends on the monomial order, which is why the order is part of
the :class:`RingContext`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import DegreeExplosion, LengthMismatch, NonPrimeChar, ParseError, RingMismatch

FIELD_BITS = 32
_FMASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1

Exponents = Tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``grevlex`` or ``elim`` (block order eliminating the first ``k`` variables).

    Blocks of an elimination order are each compared by grevlex.
    """

    kind: str = "grevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind != "elim" and self.k:
            raise ValueError("only elimination orders take a block size")
        if self.k < 0:
            raise ValueError("block size must be nonnegative")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def elimination(cls, k: int):
        return cls("elim", k)

    def __str__(self):
        return f"elim({self.k})" if self.kind == "elim" else self.kind


def _grevlex_cmp(a: Sequence[int], b: Sequence[int]) -> int:
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return 1 if x < y else -1
    return 0


def monomial_cmp(m1: Sequence[int], m2: Sequence[int], order: MonomialOrder) -> int:
    """Compare exponent vectors; returns -1, 0 or 1.

    Implemented directly on tuples, independently of the packed keys used by
    the arithmetic, so the two can be checked against each other.
    """
    if len(m1) != len(m2):
        raise LengthMismatch(f"monomials of length {len(m1)} and {len(m2)}")
    if order.kind == "lex":
        for x, y in zip(m1, m2):
            if x != y:
                return 1 if x > y else -1
        return 0
    if order.kind == "grevlex":
        return _grevlex_cmp(m1, m2)
    k = order.k
    c = _grevlex_cmp(m1[:k], m2[:k])
    if c:
        return c
    return _grevlex_cmp(m1[k:], m2[k:])


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class RingContext:
    """``F_p[variables]`` with a fixed monomial order."""

    characteristic: int
    variables: Tuple[str, ...]
    order: MonomialOrder = field(default_factory=MonomialOrder.grevlex)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not is_prime(self.characteristic):
            raise NonPrimeChar(f"characteristic {self.characteristic} is not prime")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        for v in self.variables:
            if not v or not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if self.order.kind == "elim" and self.order.k > len(self.variables):
            raise ValueError("elimination block larger than the variable list")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def nvars(self) -> int:
        return len(self.variables)

    # -- packing -----------------------------------------------------------

    @cached_property
    def _layout(self):
        n = self.nvars
        W = FIELD_BITS
        kind, k = self.order.kind, self.order.k
        shifts = [0] * n
        deg_fields = []  # (shift, variable indices)
        if kind == "lex":
            for i in range(n):
                shifts[i] = W * (n - 1 - i)
        elif kind == "grevlex":
            for i in range(n):
                shifts[i] = W * i
            deg_fields.append((W * n, tuple(range(n))))
        else:
            for j in range(k, n):
                shifts[j] = W * (j - k)
            deg_fields.append((W * (n - k), tuple(range(k, n))))
            base = W * (n - k + 1)
            for i in range(k):
                shifts[i] = base + W * i
            deg_fields.append((W * (n + 1), tuple(range(k))))
        guard = 0
        degmask = 0
        for s in shifts:
            guard |= 1 << (s + W - 1)
        for s, _ in deg_fields:
            guard |= 1 << (s + W - 1)
            degmask |= _FMASK << s
        var_deg = [0] * n
        for s, idx in deg_fields:
            for i in idx:
                var_deg[i] |= 1 << s
        units = [(1 << shifts[i]) | var_deg[i] for i in range(n)]
        return tuple(shifts), guard, degmask, tuple(units)

    @property
    def guard(self) -> int:
        return self._layout[1]

    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise LengthMismatch(f"expected {self.nvars} exponents, got {len(exps)}")
        units = self._layout[3]
        t = 0
        for e, u in zip(exps, units):
            if e < 0:
                raise ValueError("negative exponent")
            if e > MAX_EXPONENT:
                raise DegreeExplosion(f"exponent {e} exceeds {MAX_EXPONENT}")
            t += e * u
        if t & self.guard:
            raise DegreeExplosion("degree field overflow")
        return t

    def decode(self, t: int) -> Exponents:
        return tuple((t >> s) & _FMASK for s in self._layout[0])

    @cached_property
    def key(self):
        """Order key of a packed monomial; larger key means larger monomial."""
        if self.order.kind == "lex":
            return lambda t: t
        degmask = self._layout[2]
        return lambda t: 2 * (t & degmask) - t

    def divides(self, a: int, b: int) -> bool:
        return not ((b - a) & self.guard)

    def mono_degree(self, t: int) -> int:
        return sum(self.decode(t))

    @cached_property
    def _lcm_fn(self):
        # fieldwise max on the variable fields, then degree fields re-summed
        W = FIELD_BITS
        shifts, _, degmask, _ = self._layout
        vguard = vmask = 0
        for s in shifts:
            vguard |= 1 << (s + W - 1)
            vmask |= (_FMASK >> 1) << s
        low = (1 << (W - 1)) - 1
        sums = []
        for s, idx in self._deg_groups:
            base, c = idx
            ones = sum(1 << (W * i) for i in range(c))
            gmask = (1 << (W * c)) - 1
            sums.append((s, base, ones, gmask, W * (c - 1)))

        def lcm(a: int, b: int) -> int:
            a &= vmask
            b &= vmask
            m = ((((a | vguard) - b) & vguard) >> (W - 1)) * low
            t = (a & m) | (b & ~m & vmask)
            for s, base, ones, gmask, top in sums:
                t |= ((((t >> base) & gmask) * ones >> top) & _FMASK) << s
            return t

        return lcm

    @cached_property
    def _deg_groups(self):
        """Degree fields as ``(shift, (base shift, field count))`` over contiguous variable fields."""
        W = FIELD_BITS
        n, k = self.nvars, self.order.k
        if self.order.kind == "lex":
            return ()
        if self.order.kind == "grevlex":
            return ((W * n, (0, n)),)
        out = []
        if n - k:
            out.append((W * (n - k), (0, n - k)))
        if k:
            out.append((W * (n + 1), (W * (n - k + 1), k)))
        return tuple(out)

    def mono_lcm(self, a: int, b: int) -> int:
        return self._lcm_fn(a, b)

    def coprime(self, a: int, b: int) -> bool:
        return all(x == 0 or y == 0 for x, y in zip(self.decode(a), self.decode(b)))

    # -- constructors ------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {0: c} if c else {})

    def gen(self, name: str) -> "Polynomial":
        try:
            i = self.variables.index(name)
        except ValueError:
            raise KeyError(f"no variable named {name!r}") from None
        return Polynomial(self, {self._layout[3][i]: 1})

    def gens(self):
        return [self.gen(v) for v in self.variables]

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        c = coeff % self.p
        return Polynomial(self, {self.encode(exps): c} if c else {})

    def from_dict(self, terms: Mapping[Exponents, int]) -> "Polynomial":
        out: Dict[int, int] = {}
        for exps, c in terms.items():
            t = self.encode(exps)
            out[t] = (out.get(t, 0) + c) % self.p
        return Polynomial(self, {t: c for t, c in out.items() if c})

    def __call__(self, text) -> "Polynomial":
        if isinstance(text, Polynomial):
            return text.to_ring(self)
        if isinstance(text, int):
            return self.constant(text)
        return parse_polynomial(self, text)

    def with_order(self, order: MonomialOrder) -> "RingContext":
        return RingContext(self.characteristic, self.variables, order)

    def __str__(self):
        return f"F_{self.p}[{', '.join(self.variables)}] ({self.order})"


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps packed monomials to coefficients in ``[1, p)``."""

    __slots__ = ("ring", "terms", "_lm", "_hash")

    def __init__(self, ring: RingContext, terms: Dict[int, int]):
        self.ring = ring
        self.terms = terms
        self._lm = None
        self._hash = None

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def lm(self) -> int:
        """Packed leading monomial."""
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    def leading_monomial(self) -> Exponents:
        return self.ring.decode(self.lm)

    def leading_coefficient(self) -> int:
        return self.terms[self.lm]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.mono_degree(t) for t in self.terms)

    def order_at_origin(self) -> int:
        """Lowest total degree of a term (the order of vanishing at the origin)."""
        if not self.terms:
            raise ValueError("zero polynomial has infinite order")
        return min(self.ring.mono_degree(t) for t in self.terms)

    def sorted_terms(self):
        """``[(exponents, coeff), ...]`` in descending monomial order."""
        key = self.ring.key
        dec = self.ring.decode
        return [(dec(t), self.terms[t]) for t in sorted(self.terms, key=key, reverse=True)]

    def as_dict(self) -> Dict[Exponents, int]:
        dec = self.ring.decode
        return {dec(t): c for t, c in self.terms.items()}

    def variables_used(self):
        used = set()
        for t in self.terms:
            for i, e in enumerate(self.ring.decode(t)):
                if e:
                    used.add(i)
        return used

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {t: p - c for t, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return poly_pow(self, n)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {t: (v * c) % p for t, v in self.terms.items()})

    def shift(self, mono: int) -> "Polynomial":
        """Multiply by the packed monomial ``mono``."""
        terms = {t + mono: c for t, c in self.terms.items()}
        g = self.ring.guard
        if any(t & g for t in terms):
            raise DegreeExplosion("exponent overflow in monomial shift")
        return Polynomial(self.ring, terms)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self.scale(pow(lc, -1, self.ring.p))

    def frobenius(self, q: int) -> "Polynomial":
        """``self**q`` for ``q`` a power of the characteristic (coefficients are fixed by Frobenius)."""
        # a carry out of one field could jump the guard bit, so bound the degree first
        if self.terms and self.total_degree() * q > MAX_EXPONENT:
            raise DegreeExplosion(f"exponent overflow computing a {q}-th power")
        return Polynomial(self.ring, {t * q: c for t, c in self.terms.items()})

    def derivative(self, var: str) -> "Polynomial":
        i = self.ring.variables.index(var)
        ring = self.ring
        p = ring.p
        out = {}
        for t, c in self.terms.items():
            e = ring.decode(t)
            if e[i] % p == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[ring.encode(ne)] = (c * e[i]) % p
        return Polynomial(ring, out)

    def to_ring(self, ring: RingContext) -> "Polynomial":
        """Re-encode into ``ring``, matching variables by name (missing ones must not occur)."""
        if ring == self.ring:
            return self
        if ring.p != self.ring.p:
            raise RingMismatch("characteristics differ")
        index = []
        for i, v in enumerate(self.ring.variables):
            index.append(ring.variables.index(v) if v in ring.variables else None)
        out = {}
        n = ring.nvars
        for t, c in self.terms.items():
            e = [0] * n
            for i, ei in enumerate(self.ring.decode(t)):
                if ei:
                    j = index[i]
                    if j is None:
                        raise RingMismatch(f"variable {self.ring.variables[i]} absent from target ring")
                    e[j] = ei
            out[ring.encode(e)] = c
        return Polynomial(ring, out)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def _same_ring(a: Polynomial, b: Polynomial):
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    _same_ring(a, b)
    p = a.ring.p
    if len(a.terms) < len(b.terms):
        a, b = b, a
    out = dict(a.terms)
    for t, c in b.terms.items():
        v = (out.get(t, 0) + c) % p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return Polynomial(a.ring, out)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _same_ring(a, b)
    ring = a.ring
    if not a.terms or not b.terms:
        return ring.zero()
    if len(a.terms) < len(b.terms):
        a, b = b, a
    if len(b.terms) == 1:
        (tb, cb), = b.terms.items()
        out = a.shift(tb) if tb else a
        return out.scale(cb) if cb != 1 else out
    p = ring.p
    acc: Dict[int, int] = {}
    get = acc.get
    for tb, cb in b.terms.items():
        for ta, ca in a.terms.items():
            t = ta + tb
            acc[t] = get(t, 0) + ca * cb
    g = ring.guard
    out = {}
    for t, c in acc.items():
        c %= p
        if c:
            if t & g:
                raise DegreeExplosion("exponent overflow in product")
            out[t] = c
    return Polynomial(ring, out)


def poly_pow(f: Polynomial, n: int) -> Polynomial:
    """``f**n`` using the base-``p`` digits of ``n`` and the Frobenius."""
    if n < 0:
        raise ValueError("negative power")
    ring = f.ring
    p = ring.p
    result = ring.one()
    q = 1
    small = [ring.one()]
    while n:
        d = n % p
        if d:
            while len(small) <= d:
                small.append(small[-1] * f)
            result = result * (small[d].frobenius(q) if q > 1 else small[d])
        n //= p
        q *= p
    return result


def product(polys: Iterable[Polynomial], ring: RingContext) -> Polynomial:
    out = ring.one()
    for f in polys:
        out = out * f
    return out


# -- text syntax ----------------------------------------------------------------

def _signed(c: int, p: int) -> int:
    return c if c <= p // 2 else c - p


def format_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, v in zip(exps, names):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Deterministic text form: descending terms, coefficients in ``(-p/2, p/2]``."""
    if not f.terms:
        return "0"
    p = f.ring.p
    names = f.ring.variables
    out = []
    for exps, c in f.sorted_terms():
        c = _signed(c, p)
        mono = format_monomial(exps, names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", token=text[pos:pos + 8].strip())
        num, name, op = m.groups()
        if op == "**":
            raise ParseError("use '^' for powers", token=op)
        toks.append(("num", int(num)) if num is not None else ("name", name) if name else ("op", op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, ring: RingContext, text: str):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ParseError("empty polynomial")
        f = self.expr()
        if self.i != len(self.toks):
            raise ParseError("trailing input", token=str(self.peek()[1]))
        return f

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            base = self.ring.constant(val)
        elif kind == "name":
            if val not in self.ring.variables:
                raise ParseError("unknown variable", token=val)
            base = self.ring.gen(val)
        elif (kind, val) == ("op", "("):
            base = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing ')'")
        else:
            raise ParseError("unexpected end of input" if val is None else "unexpected token", token=None if val is None else str(val))
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", token=str(val))
            base = base ** val
        return base


def parse_polynomial(ring: RingContext, text: str) -> Polynomial:
    """Parse ``2*x*y - z^2``-style text; powers use an explicit caret."""
    return _Parser(ring, text).parse()
