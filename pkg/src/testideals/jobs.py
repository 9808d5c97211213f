"""Job documents: parsing, dispatch and canonical/JSON output.

A job is a small line-based document::

    # comments start with '#'
    ring p=7 vars=x,y order=grevlex
    ideal I = x^3+y^5
    ideal m = x, y
    poly g = y
    factor m t=1/2
    emax = 4
    gamma = g
    cmd tau-along I

Parameter lines are ``key = value``; later lines override earlier ones.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from . import errors
from .algebra import MonomialOrder, Polynomial, RingContext, format_polynomial, is_prime
from .errors import ParseError
from .frobenius import bracket_power, frobenius_root
from .groebner import FormalCombination, Ideal, ideal_colon, ideal_intersection, krull_dimension, limits

COMMANDS = {
    # name: (number of ideal arguments, needs seed)
    "gb": (1, False),
    "colon": (2, False),
    "intersect": (2, False),
    "dim": (1, False),
    "bracket": (1, False),
    "root": (1, False),
    "tau": (0, False),
    "tau-along": (1, False),
    "fedder": (1, False),
    "sfr": (1, False),
    "link": (1, True),
    "claim2": (1, True),
    "restrict": (1, True),
}

PARAMS = {"e", "emax", "seed", "gamma", "N", "degree-limit", "format", "t"}

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class JobSpec:
    ring: RingContext
    command: str
    args: List[str]
    ideals: Dict[str, Ideal] = field(default_factory=dict)
    polys: Dict[str, Polynomial] = field(default_factory=dict)
    factors: List[Tuple[str, Fraction]] = field(default_factory=list)
    e: int = 1
    e_max: int = 4
    seed: Optional[int] = None
    gamma: Optional[Polynomial] = None
    N: Optional[int] = None
    degree_limit: Optional[int] = None
    format: str = "canonical"

    def ideal(self, name: str) -> Ideal:
        return self.ideals[name]

    def formal_combination(self) -> FormalCombination:
        return FormalCombination((self.ideals[a], t) for a, t in self.factors)


def parse_rational(text: str, line: Optional[int] = None) -> Fraction:
    """``3/2`` or ``2`` as an exact rational."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:/\s*(\d+))?\s*", text)
    if not m:
        raise ParseError("expected a rational num/den", line, text.strip())
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError("zero denominator", line, text.strip())
    return Fraction(num, den)


def _int(text: str, line: int, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(f"{what} must be an integer", line, text.strip()) from None


def _split_kv(tokens: List[str], line: int) -> Dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError("expected key=value", line, tok)
        k, v = tok.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _ring_from(kv: Dict[str, str], line: int, overrides: Dict[str, Any]) -> RingContext:
    if "p" not in kv and overrides.get("p") is None:
        raise ParseError("ring needs p=<prime>", line, "ring")
    p = overrides.get("p") or _int(kv["p"], line, "p")
    if not is_prime(p):
        raise errors.NonPrimeChar(f"characteristic {p} is not prime")
    names = overrides.get("vars") or kv.get("vars")
    if not names:
        raise ParseError("ring needs vars=<names>", line, "ring")
    names = [v.strip() for v in names.split(",") if v.strip()]
    for v in names:
        if not _NAME.match(v):
            raise ParseError("invalid variable name", line, v)
    order = overrides.get("order") or kv.get("order", "grevlex")
    if order not in ("grevlex", "lex"):
        raise ParseError("order must be grevlex or lex", line, order)
    return RingContext(p, tuple(names), MonomialOrder(order))


def _poly(ring: RingContext, text: str, line: int) -> Polynomial:
    try:
        return ring(text)
    except ParseError as exc:
        raise ParseError(exc.message, line, exc.token if exc.token is not None else text.strip()) from None
    except KeyError as exc:
        raise ParseError("unknown variable", line, str(exc.args[0] if exc.args else text)) from None


def parse_job(text: str, overrides: Optional[Dict[str, Any]] = None) -> JobSpec:
    """Validated ``JobSpec`` from a job document; ``ParseError`` names the line and token.

    ``overrides`` (``p``, ``vars``, ``order``, ``emax``, ``e``, ``seed``,
    ``gamma``, ``N``, ``degree-limit``, ``format``, ``cmd``, ``args``)
    take precedence over the document.
    """
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append((no, s))

    # first pass: ring, parameters, command
    ring_line = None
    params: Dict[str, Tuple[str, int]] = {}
    cmd = None
    for no, s in lines:
        head = s.split(None, 1)[0]
        if head == "ring":
            if ring_line is not None:
                raise ParseError("duplicate ring line", no, "ring")
            ring_line = (no, _split_kv(s.split()[1:], no))
        elif head == "cmd":
            parts = s.split()
            if len(parts) < 2:
                raise ParseError("cmd needs a command name", no, s)
            cmd = (no, parts[1], parts[2:])
        elif head in ("ideal", "poly", "factor"):
            continue
        elif "=" in s:
            k, v = s.split("=", 1)
            k = k.strip()
            if k not in PARAMS:
                raise ParseError("unknown parameter", no, k)
            params[k] = (v.strip(), no)
        else:
            raise ParseError("unrecognized line", no, head)
    if ring_line is None:
        if "p" in overrides and "vars" in overrides:
            ring_line = (0, {})
        else:
            raise ParseError("missing ring line", None, None)
    ring = _ring_from(ring_line[1], ring_line[0], overrides)

    if "cmd" in overrides:
        cmd = (0, overrides["cmd"], list(overrides.get("args", [])))
    if cmd is None:
        raise ParseError("missing cmd line", None, None)
    cmd_line, command, args = cmd
    if command not in COMMANDS:
        raise ParseError("unknown command", cmd_line, command)

    # second pass: named objects
    ideals: Dict[str, Ideal] = {}
    polys: Dict[str, Polynomial] = {}
    factors: List[Tuple[str, Optional[Fraction], int]] = []
    for no, s in lines:
        head, _, rest = s.partition(" ")
        if head in ("ideal", "poly"):
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not eq or not _NAME.match(name):
                raise ParseError(f"expected '{head} NAME = ...'", no, rest.strip() or head)
            if name in ideals or name in polys:
                raise ParseError("name defined twice", no, name)
            if head == "poly":
                polys[name] = _poly(ring, body.strip(), no)
            else:
                gens = [g.strip() for g in body.split(",")]
                if any(not g for g in gens):
                    raise ParseError("empty generator", no, body.strip())
                ideals[name] = Ideal(ring, [_poly(ring, g, no) for g in gens])
        elif head == "factor":
            parts = rest.split()
            if not parts:
                raise ParseError("factor needs an ideal name", no, "factor")
            t = None
            for kv in parts[1:]:
                k, eq, v = kv.partition("=")
                if k != "t" or not eq:
                    raise ParseError("expected t=num/den", no, kv)
                t = parse_rational(v, no)
            factors.append((parts[0], t, no))

    for name in args:
        if name not in ideals:
            raise ParseError("undefined ideal", cmd_line, name)
    want = COMMANDS[command][0]
    if len(args) != want:
        raise ParseError(f"{command} takes {want} ideal argument(s)", cmd_line, " ".join(args) or command)

    default_t = Fraction(1)
    if "t" in params:
        default_t = parse_rational(*params["t"])
    resolved = []
    for name, t, no in factors:
        if name not in ideals:
            raise ParseError("undefined ideal", no, name)
        t = default_t if t is None else t
        if t <= 0:
            raise ParseError("exponent must be positive", no, str(t))
        resolved.append((name, t))

    def param(key, conv):
        if key in overrides:
            return overrides[key]
        if key in params:
            v, no = params[key]
            return conv(v, no)
        return None

    job = JobSpec(ring, command, list(args), ideals, polys, resolved)
    e = param("e", lambda v, no: _int(v, no, "e"))
    emax = param("emax", lambda v, no: _int(v, no, "emax"))
    if e is not None:
        if e < 0:
            raise ParseError("e must be nonnegative", params.get("e", ("", None))[1], str(e))
        job.e = e
    if emax is not None:
        if emax < 1:
            raise ParseError("emax must be positive", params.get("emax", ("", None))[1], str(emax))
        job.e_max = emax
    job.seed = param("seed", lambda v, no: _int(v, no, "seed"))
    N = param("N", lambda v, no: _int(v, no, "N"))
    if N is not None and N < 1:
        raise ParseError("N must be positive", params.get("N", ("", None))[1], str(N))
    job.N = N
    job.degree_limit = param("degree-limit", lambda v, no: _int(v, no, "degree-limit"))
    gamma = param("gamma", lambda v, no: (v, no))
    if gamma is not None:
        gtext, gno = gamma if isinstance(gamma, tuple) else (gamma, None)
        job.gamma = polys[gtext] if gtext in polys else _poly(ring, gtext, gno)
    fmt = param("format", lambda v, no: v)
    if fmt is not None:
        if fmt not in ("canonical", "json"):
            raise ParseError("format must be canonical or json", params.get("format", ("", None))[1], fmt)
        job.format = fmt
    if COMMANDS[command][1] and job.seed is None:
        raise ParseError(f"{command} is randomized and needs an explicit seed", cmd_line, command)
    return job


# -- results -------------------------------------------------------------------

@dataclass
class JobResult:
    command: str
    value: Any
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def _sorted_gens(I: Ideal) -> List[Polynomial]:
    # leading monomials (taken in the ring order) compared lexicographically,
    # so the listing does not move when only the order changes
    return sorted(I.gb(), key=lambda g: g.leading_monomial(), reverse=True)


def ideal_lines(I: Ideal) -> List[str]:
    """Reduced basis, monic, sorted by leading exponent vector, largest first; the zero ideal prints as ``0``."""
    gens = _sorted_gens(I)
    return [format_polynomial(g) for g in gens] if gens else ["0"]


def _to_json(value):
    if isinstance(value, Ideal):
        return ideal_lines(value)
    if isinstance(value, Polynomial):
        return format_polynomial(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_json(v) for v in value]
    return value


def _canonical_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, Polynomial):
        return format_polynomial(v)
    return str(v)


def emit_result(result, format: str = "canonical") -> str:
    """Text for a ``JobResult``, a bare ``Ideal``, or an exception."""
    if isinstance(result, BaseException):
        return emit_error(result, format)
    if isinstance(result, Ideal):
        result = JobResult("ideal", result)
    value = result.value
    if format == "json":
        doc: Dict[str, Any] = {"command": result.command}
        if isinstance(value, dict):
            doc.update(_to_json(value))
        else:
            doc["result"] = _to_json(value)
        doc["diagnostics"] = _to_json(result.diagnostics)
        return json.dumps(doc, separators=(",", ":")) + "\n"
    if isinstance(value, Ideal):
        return "\n".join(ideal_lines(value)) + "\n"
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            if isinstance(v, Ideal):
                out.append(f"{k}:")
                out.extend("  " + s for s in ideal_lines(v))
            elif isinstance(v, (list, tuple)):
                out.append(f"{k}:")
                out.extend("  " + _canonical_scalar(x) for x in v)
            else:
                out.append(f"{k}: {_canonical_scalar(v)}")
        return "\n".join(out) + "\n"
    return _canonical_scalar(value) + "\n"


def error_payload(exc: BaseException) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"error": type(exc).__name__}
    if isinstance(exc, errors.NotStabilized):
        doc["e_max"] = exc.e_max
        return doc
    if isinstance(exc, ParseError):
        doc["line"] = exc.line
        doc["token"] = exc.token
    doc["message"] = str(exc)
    report = getattr(exc, "report", None)
    if report is not None:
        doc["report"] = report.to_dict()
    return doc


def emit_error(exc: BaseException, format: str = "canonical") -> str:
    if format == "json":
        return json.dumps(error_payload(exc), separators=(",", ":")) + "\n"
    return f"error: {type(exc).__name__}: {exc}\n"


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_NOT_STABILIZED = 3
EXIT_CONTAINMENT = 4
EXIT_LIMITS = 5


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, errors.NotStabilized):
        return EXIT_NOT_STABILIZED
    if isinstance(exc, errors.ContainmentViolation):
        return EXIT_CONTAINMENT
    if isinstance(exc, (errors.DegreeExplosion, errors.DegreeBoundTooSmall, MemoryError, RecursionError)):
        return EXIT_LIMITS
    if isinstance(
        exc,
        (
            ParseError,
            errors.NonPrimeChar,
            errors.RingMismatch,
            errors.LengthMismatch,
            errors.HeightMismatch,
            errors.ZeroDivisorGamma,
            errors.UnitIdeal,
            ValueError,
            KeyError,
        ),
    ):
        return EXIT_INVALID
    return EXIT_FAILURE


# -- dispatch ------------------------------------------------------------------

def _test_element(job: JobSpec, I: Optional[Ideal]):
    from .tau import TestElement, find_test_element

    if job.gamma is not None:
        return TestElement(job.gamma, job.N or 1, certified=False)
    if I is None:
        return None
    te = find_test_element(I)
    return te.with_N(job.N) if job.N else te


def run_job(job: JobSpec) -> JobResult:
    from . import linkage, restriction, tau

    start = time.perf_counter()
    cmd = job.command
    I = job.ideal(job.args[0]) if job.args else None
    diag: Dict[str, Any] = {}
    with limits(degree_limit=job.degree_limit):
        if cmd == "gb":
            value = Ideal.from_gb(job.ring, I.gb())
        elif cmd == "colon":
            value = ideal_colon(I, job.ideal(job.args[1]))
        elif cmd == "intersect":
            value = ideal_intersection(I, job.ideal(job.args[1]))
        elif cmd == "dim":
            value = krull_dimension(I)
            diag["height"] = job.ring.nvars - value if not I.is_unit() else None
        elif cmd == "bracket":
            value = bracket_power(I, job.ring.p ** job.e)
        elif cmd == "root":
            value = frobenius_root(I, job.ring.p ** job.e)
        elif cmd == "tau":
            comp = tau.test_ideal_computation(job.formal_combination(), job.e_max, job.ring)
            value = comp.result
            diag.update(stabilized_at=comp.stabilized_at, stop=comp.stop_reason)
        elif cmd == "tau-along":
            te = _test_element(job, I)
            comp = tau.test_ideal_along_computation(I, job.formal_combination(), te, job.e_max)
            value = comp.result
            diag.update(
                stabilized_at=comp.stabilized_at,
                stop=comp.stop_reason,
                gamma=comp.test_element.gamma,
                N=comp.test_element.N,
                certified=comp.certified,
            )
        elif cmd == "fedder":
            value = linkage.frobenius_colon(I, job.e)
            gens = linkage.ci_generators(I)
            if gens is not None:
                diag["ci_identity"] = linkage.fedder_ci_check(gens, job.e)
            try:
                u = linkage.fedder_generator(I)
                diag["generator"] = u
            except errors.NonPrincipalLink:
                diag["generator"] = None
        elif cmd == "sfr":
            te = _test_element(job, I)
            value = {"purely_f_regular": tau.is_purely_f_regular(I, job.formal_combination(), te, job.e_max)}
            gens = linkage.ci_generators(I)
            if gens is not None:
                w = tau.strongly_f_regular_witness(I, gens, te, job.e_max)
                value["strongly_f_regular"] = w is not None
                diag["witness_e"] = w
            else:
                value["strongly_f_regular"] = None
            diag["e_max"] = job.e_max
        elif cmd == "link":
            lp = linkage.LinkageProblem.build(I, job.seed)
            value = {"c": lp.c, "fs": list(lp.fs), "f": lp.f}
        elif cmd == "claim2":
            lp = linkage.LinkageProblem.build(I, job.seed)
            res = linkage.verify_claim2(lp, job.e)
            value = {"holds": res.holds, "equality": res.equality, "q": res.q, "f": lp.f}
            diag.update(method=res.method, **res.details)
        elif cmd == "restrict":
            te = _test_element(job, None)
            rep = restriction.restriction_report(I, job.formal_combination(), job.seed, job.e_max, te)
            d = rep.to_dict()
            value = {k: d[k] for k in ("lhs", "rhs", "containment_holds", "equality_holds")}
            value.update({k: d[k] for k in ("link_generator", "gamma", "N")})
            diag.update(rep.diagnostics)
        else:  # pragma: no cover - parse_job rejects unknown commands
            raise ParseError("unknown command", None, cmd)
    diag["seconds"] = round(time.perf_counter() - start, 4)
    return JobResult(cmd, value, diag)
