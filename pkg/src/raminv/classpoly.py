"""Class polynomials built from numerically evaluated conjugates.

For every reduced form f of discriminant -n the conjugate of h(tau0) is
h^(A_f) evaluated at tau_f. The monic product of (x - conjugate) is expanded
at high precision and its coefficients are rounded to integers (or to
u + v*sqrt(D') for the g2^6 invariant).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath

from .etaeval import evaluate_expr
from .quadforms import Discriminant, enumerate_reduced, tau_of_form
from .reciprocity import FunctionExpr, conjugate_descriptor, g_power, h_expr

KINDS = ("pn", "qn", "g2pow12", "g2pow6")
KIND_ALIASES = {"g2-12": "g2pow12", "g2-6": "g2pow6"}

RESIDUAL_LIMIT = 0.01
MAX_DOUBLINGS = 2


class PrecisionError(RuntimeError):
    """Coefficient rounding did not converge after escalating precision."""


@dataclass
class ClassPolynomial:
    """Monic polynomial, coefficients listed from the leading one down.

    Coefficients are ints, except for kind g2pow6 where each is a pair
    (u, v) standing for u + v*sqrt(D').
    """

    n: int
    kind: str
    coeffs: list
    prec_used: int
    max_residual: float
    core: int | None = None
    forms: list[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        if self.kind == "g2pow6":
            cs = [{"u": str(u), "v": str(v)} for u, v in self.coeffs]
        else:
            cs = [str(c) for c in self.coeffs]
        out = {
            "n": self.n,
            "kind": self.kind,
            "degree": self.degree,
            "coeffs": cs,
            "prec_used": self.prec_used,
            "max_residual": self.max_residual,
        }
        if self.core is not None:
            out["core"] = self.core
        return out

    @classmethod
    def from_json(cls, d: dict) -> ClassPolynomial:
        if d["kind"] == "g2pow6":
            cs = [(int(c["u"]), int(c["v"])) for c in d["coeffs"]]
        else:
            cs = [int(c) for c in d["coeffs"]]
        return cls(d["n"], d["kind"], cs, d["prec_used"], d["max_residual"], d.get("core"))

    def __str__(self):
        return format_poly(self.coeffs, sqrt_label="sqrt(D')" if self.kind == "g2pow6" else None)


def format_poly(coeffs, sqrt_label=None) -> str:
    """'x^2 - 302*x + 1' from [1, -302, 1]; pairs (u, v) print as u + v*sqrt_label."""
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        k = deg - i
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if isinstance(c, tuple):
            u, v = c
            if not u and not v:
                continue
            bits = []
            if u:
                bits.append(str(u))
            if v:
                bits.append(f"{v}*{sqrt_label}")
            cs = " + ".join(bits).replace("+ -", "- ")
            if len(bits) > 1:
                cs = f"({cs})"
            term = cs if not mono else (mono if cs == "1" else f"{cs}*{mono}")
            parts.append(term)
            continue
        if not c:
            continue
        if not mono:
            term = str(c)
        elif c == 1:
            term = mono
        elif c == -1:
            term = "-" + mono
        else:
            term = f"{c}*{mono}"
        parts.append(term)
    if not parts:
        return "0"
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# precision


def choose_precision(n: int, kind: str = "pn") -> int:
    """Starting precision in bits.

    The largest conjugate has size about exp(pi sqrt(n)/a) for the form
    [a, b, c], so the coefficients need roughly (pi sqrt(n)/ln 2) sum 1/a
    bits; 16 bits per factor and 64 more cover cancellation and rounding.
    """
    forms = enumerate_reduced(-n)
    h = len(forms)
    bits = math.pi * math.sqrt(n) / math.log(2) * sum(1 / f.a for f in forms)
    return max(192, math.ceil(bits) + 16 * h + 64)


# ---------------------------------------------------------------------------
# conjugates


def _invariant(kind: str) -> FunctionExpr:
    if kind in ("pn", "qn"):
        return h_expr()
    if kind == "g2pow12":
        return g_power(2, 12)
    if kind == "g2pow6":
        return g_power(2, 6)
    raise ValueError(f"unknown kind {kind!r}")


def _check_class(n: int, kind: str) -> None:
    if kind in ("pn", "qn") and n % 24 != 19:
        raise ValueError(f"{kind} needs n = 19 mod 24, got {n}")
    if kind in ("g2pow12", "g2pow6") and n % 24 != 3:
        raise ValueError(f"{kind} needs n = 3 mod 24, got {n}")


def _conjugate(args):
    f, h, prec = args
    expr, form = conjugate_descriptor(f, h)
    return evaluate_expr(expr, tau_of_form(form, prec), prec)


def conjugates(n: int, kind: str, prec: int, jobs: int = 1) -> list:
    """Values h^(A_f)(tau_f), one per reduced form, in enumerate_reduced order."""
    h = _invariant(kind)
    tasks = [(f, h, prec) for f in enumerate_reduced(-n)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_conjugate, tasks))
    return [_conjugate(t) for t in tasks]


def expand_roots(roots, prec: int) -> list:
    """Coefficients (leading first) of prod (x - r)."""
    with mpmath.workprec(prec):
        c = [mpmath.mpc(1)]
        for r in roots:
            nxt = c + [mpmath.mpc(0)]
            for i in range(1, len(nxt)):
                nxt[i] -= r * c[i - 1]
            c = nxt
    return c


def _round_integer(z, prec: int) -> tuple[int, float]:
    with mpmath.workprec(prec):
        k = int(mpmath.nint(mpmath.re(z)))
        res = max(abs(mpmath.re(z) - k), abs(mpmath.im(z)))
    return k, float(res)


def _round_quadratic(z, core: int, prec: int) -> tuple[tuple[int, int], float]:
    # core < 0, so sqrt(core) = i*sqrt(|core|)
    with mpmath.workprec(prec):
        s = mpmath.sqrt(-core)
        u = int(mpmath.nint(mpmath.re(z)))
        vf = mpmath.im(z) / s
        v = int(mpmath.nint(vf))
        res = max(abs(mpmath.re(z) - u), abs(vf - v))
    return (u, v), float(res)


def _roots_for(n: int, kind: str, prec: int, jobs: int) -> list:
    vals = conjugates(n, kind, prec, jobs)
    if kind == "pn":
        with mpmath.workprec(prec):
            return [r for v in vals for r in (v, 1 / v)]
    if kind == "qn":
        with mpmath.workprec(prec):
            return [v + 1 / v for v in vals]
    return vals


def _build_once(n: int, kind: str, prec: int, jobs: int) -> ClassPolynomial:
    roots = _roots_for(n, kind, prec, jobs)
    cs = expand_roots(roots, prec)
    out, worst = [], 0.0
    core = None
    if kind == "g2pow6":
        core = Discriminant(n).core
        for z in cs:
            c, r = _round_quadratic(z, core, prec)
            out.append(c)
            worst = max(worst, r)
    else:
        for z in cs:
            c, r = _round_integer(z, prec)
            out.append(c)
            worst = max(worst, r)
    forms = [str(f) for f in enumerate_reduced(-n)]
    return ClassPolynomial(n, kind, out, prec, worst, core, forms)


def build(n: int, kind: str, prec: int | None = None, jobs: int = 1) -> ClassPolynomial:
    """Build the class polynomial of the given kind, doubling the precision
    (at most twice) while the rounding residual is at least RESIDUAL_LIMIT."""
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    _check_class(n, kind)
    prec = prec or choose_precision(n, kind)
    for _ in range(MAX_DOUBLINGS + 1):
        poly = _build_once(n, kind, prec, jobs)
        if poly.max_residual < RESIDUAL_LIMIT:
            return poly
        prec *= 2
    raise PrecisionError(
        f"n={n} kind={kind}: residual {poly.max_residual:.3g} at {poly.prec_used} bits"
    )


def build_pn(n: int, prec: int | None = None, jobs: int = 1) -> ClassPolynomial:
    return build(n, "pn", prec, jobs)


def build_qn(n: int, prec: int | None = None, jobs: int = 1) -> ClassPolynomial:
    return build(n, "qn", prec, jobs)


def build_g2pow12(n: int, prec: int | None = None, jobs: int = 1) -> ClassPolynomial:
    return build(n, "g2pow12", prec, jobs)


def build_g2pow6(n: int, prec: int | None = None, jobs: int = 1) -> ClassPolynomial:
    return build(n, "g2pow6", prec, jobs)


# ---------------------------------------------------------------------------
# exact checks


def verify_palindrome(p) -> bool:
    cs = p.coeffs if isinstance(p, ClassPolynomial) else list(p)
    return cs == cs[::-1] and cs[-1] == 1


def pn_from_qn(q: list[int]) -> list[int]:
    """x^h q(x + 1/x) as an integer polynomial of degree 2h (leading coefficient first)."""
    h = len(q) - 1
    # (x^2 + 1)^k x^(h-k) contributes q_k; accumulate in ascending powers
    out = [0] * (2 * h + 1)
    for i, c in enumerate(q):
        k = h - i
        for j in range(k + 1):
            out[h - k + 2 * j] += c * math.comb(k, j)
    return out[::-1]


def qn_from_pn(p: list[int]) -> list[int]:
    """Inverse of pn_from_qn for palindromic p; raises if p is not of that shape."""
    if p != p[::-1]:
        raise ValueError("polynomial is not palindromic")
    h = (len(p) - 1) // 2
    rest = list(p)
    q = []
    for k in range(h, -1, -1):
        c = rest[h - k]
        q.append(c)
        contrib = pn_from_qn([c] + [0] * k)
        # contrib has degree 2k; shift into degree 2h
        pad = h - k
        for i, v in enumerate(contrib):
            rest[pad + i] -= v
    if any(rest):
        raise ValueError("polynomial is not of the form x^h q(x + 1/x)")
    return q


# ---------------------------------------------------------------------------
# cache


class ClassPolyCache:
    """Append-only JSON-lines file; the last record for (n, kind) wins."""

    def __init__(self, path):
        self.path = os.fspath(path)

    def _records(self):
        if not os.path.exists(self.path):
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def get(self, n: int, kind: str) -> ClassPolynomial | None:
        found = None
        for rec in self._records():
            if rec.get("n") == n and rec.get("kind") == kind:
                found = rec
        return ClassPolynomial.from_json(found) if found else None

    def put(self, poly: ClassPolynomial) -> None:
        with open(self.path, "a") as fh:
            fh.write(json.dumps(poly.to_json()) + "\n")

    def get_or_build(self, n: int, kind: str, prec: int | None = None, jobs: int = 1) -> ClassPolynomial:
        kind = KIND_ALIASES.get(kind, kind)
        poly = self.get(n, kind)
        if poly is None:
            poly = build(n, kind, prec, jobs)
            self.put(poly)
        return poly
