"""The back half of the CM method over a prime field F_p.

A root r of q_n modulo p is a value of A_n = H_n + 1/H_n. With
C^2 = 27(A_n - 2) and j = (C - 6)^3 every root gives up to two
j-candidates; the curve y^2 = x^3 + 3k x + 2k, k = j/(1728 - j), or its
quadratic twist then has order m for the right candidate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import gmpy2

# ---------------------------------------------------------------------------
# field helpers


def is_probable_prime(p: int, rounds: int = 40) -> bool:
    return p > 1 and bool(gmpy2.is_prime(p, rounds))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_p(a: int, p: int) -> int | None:
    """Tonelli-Shanks. Of the two roots the even one is returned; None for a non-residue."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        m, c, t, x = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, x = t * c % p, x * b % p
    return x if x % 2 == 0 else p - x


def nonresidue(p: int) -> int:
    c = 2
    while legendre(c, p) != -1:
        c += 1
    return c


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists with the constant term first


def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = [c % p for c in f]
    _trim(f)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        shift = len(f) - len(g)
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _trim(f)
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _pmulmod(f, g, mod, p):
    return _pmod(_pmul(f, g, p), mod, p)


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(f, g, p):
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, _pmod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _psub(f, g, p):
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def _pdiv_exact(f, g, p):
    f = [c % p for c in f]
    inv = pow(g[-1], -1, p)
    q = [0] * (len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        shift = len(f) - len(g)
        q[shift] = c
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _trim(f)
    return _trim(q)


def _split(f, p, rng):
    """Roots of a monic squarefree f that splits into distinct linear factors."""
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [(-f[0]) * pow(f[1], -1, p) % p]
    while True:
        delta = rng.randrange(p)
        h = _ppowmod([delta, 1], (p - 1) // 2, f, p)
        g = _pgcd(f, _psub(h, [1], p), p)
        if 1 < len(g) < len(f):
            return _split(g, p, rng) + _split(_pdiv_exact(f, g, p), p, rng)


def poly_roots_mod_p(poly, p: int, seed: int = 0) -> list[int]:
    """Distinct roots in [0, p) of an integer polynomial given leading coefficient first."""
    f = _trim([c % p for c in reversed(list(poly))])
    if not f:
        raise ValueError("polynomial vanishes identically mod p")
    if len(f) == 1:
        return []
    if p == 2:
        return [x for x in (0, 1) if sum(c * x**i for i, c in enumerate(f)) % 2 == 0]
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    # product of the distinct linear factors: gcd(x^p - x, f)
    xp = _ppowmod([0, 1], p, f, p)
    g = _pgcd(f, _psub(xp, [0, 1], p), p)
    roots = []
    if g and g[0] == 0:
        # x = 0 is a root; divide it out to keep the splitting step simple
        roots.append(0)
        g = g[1:]
    roots += _split(g, p, random.Random(seed))
    return sorted(roots)


def eval_poly_mod(poly, x: int, p: int) -> int:
    acc = 0
    for c in poly:
        acc = (acc * x + c) % p
    return acc


# ---------------------------------------------------------------------------
# j-invariants and curves


def j_candidates_from_root(r: int, p: int) -> list[tuple[int, int]]:
    """Pairs (C, j) with C^2 = 27(r - 2) and j = (C - 6)^3; empty for a non-residue."""
    C = sqrt_mod_p(27 * (r - 2), p)
    if C is None:
        return []
    cs = [C] if C == 0 else [C, (-C) % p]
    return [(c, pow(c - 6, 3, p)) for c in cs]


@dataclass(frozen=True)
class CurveParams:
    a: int
    b: int
    p: int
    m: int | None = None

    def __post_init__(self):
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise ValueError("singular curve")

    def j_invariant(self) -> int:
        return j_invariant(self.a, self.b, self.p)

    def twist(self, c: int | None = None) -> CurveParams:
        c = c if c is not None else nonresidue(self.p)
        return CurveParams(self.a * c * c % self.p, self.b * pow(c, 3, self.p) % self.p, self.p)


def j_invariant(a: int, b: int, p: int) -> int:
    num = 1728 * 4 * pow(a, 3, p)
    den = (4 * pow(a, 3, p) + 27 * b * b) % p
    return num * pow(den, -1, p) % p


def curve_from_j(j: int, p: int, twist: bool = False) -> CurveParams:
    """y^2 = x^3 + 3k x + 2k with k = j/(1728 - j), optionally twisted by the
    least quadratic non-residue."""
    j %= p
    if j == 0:
        E = CurveParams(0, 1, p)
    elif j == 1728 % p:
        E = CurveParams(1, 0, p)
    else:
        k = j * pow(1728 - j, -1, p) % p
        E = CurveParams(3 * k % p, 2 * k % p, p)
    return E.twist() if twist else E


# points are (x, y) tuples or None for the point at infinity


def point_add(P, Q, E: CurveParams):
    p = E.p
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + E.a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def scalar_mul(k: int, P, E: CurveParams):
    if k < 0:
        k = -k
        P = None if P is None else (P[0], (-P[1]) % E.p)
    R = None
    while k:
        if k & 1:
            R = point_add(R, P, E)
        P = point_add(P, P, E)
        k >>= 1
    return R


def random_point(E: CurveParams, rng: random.Random):
    p = E.p
    while True:
        x = rng.randrange(p)
        y = sqrt_mod_p(x**3 + E.a * x + E.b, p)
        if y is not None:
            if rng.random() < 0.5:
                y = (-y) % p
            return x, y


def hasse_interval(p: int) -> tuple[int, int]:
    # |t| <= 2 sqrt(p)  <=>  t^2 <= 4p
    t = math.isqrt(4 * p)
    return p + 1 - t, p + 1 + t


@dataclass
class OrderVerdict:
    accepted: bool
    certain: bool
    trials: int


def order_check(E: CurveParams, m: int, trials: int = 20, seed: int = 1) -> OrderVerdict:
    """Accept when m*P = O for `trials` random points.

    If m is prime and m > 4 sqrt(p), one point P != O with m*P = O has order
    m, and m is the only multiple of m in the Hasse interval, so #E = m.
    """
    lo, hi = hasse_interval(E.p)
    if not lo <= m <= hi:
        raise ValueError(f"m = {m} lies outside the Hasse interval")
    rng = random.Random(seed)
    m_prime = is_probable_prime(m)
    for i in range(trials):
        P = random_point(E, rng)
        if scalar_mul(m, P, E) is not None:
            return OrderVerdict(False, True, i + 1)
        if m_prime and m * m > 16 * E.p:
            return OrderVerdict(True, True, i + 1)
    return OrderVerdict(True, False, trials)


# ---------------------------------------------------------------------------
# CM parameters and the full pipeline


@dataclass(frozen=True)
class CMParams:
    n: int
    p: int
    t: int
    m: int
    s: int


def cm_params_check(n: int, p: int, m: int) -> CMParams:
    """Check 4p - t^2 = n s^2 with t = p + 1 - m."""
    if not is_probable_prime(p):
        raise ValueError(f"p = {p} is not prime")
    t = p + 1 - m
    rest = 4 * p - t * t
    if rest <= 0 or rest % n:
        raise ValueError(f"4p - t^2 = {rest} is not a positive multiple of n = {n}")
    s2 = rest // n
    s = math.isqrt(s2)
    if s * s != s2:
        raise ValueError(f"(4p - t^2)/n = {s2} is not a square")
    return CMParams(n, p, t, m, s)


@dataclass
class CurveResult:
    n: int
    curve: CurveParams
    j: int
    root: int
    C: int
    twisted: bool
    transcript: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": str(self.curve.p),
            "m": str(self.curve.m),
            "n": self.n,
            "a": str(self.curve.a),
            "b": str(self.curve.b),
            "j": str(self.j),
            "root": str(self.root),
            "C": str(self.C),
            "twisted": self.twisted,
            "transcript": self.transcript,
        }


class CMFailure(RuntimeError):
    pass


def generate_curve(n: int, p: int, m: int, prec: int | None = None, qn=None, trials: int = 20) -> CurveResult:
    """Curve over F_p with exactly m points and CM by the order of discriminant -n."""
    params = cm_params_check(n, p, m)
    if n % 24 != 19:
        raise ValueError("generate_curve uses q_n, defined for n = 19 mod 24")
    if qn is None:
        from .classpoly import build_qn

        qn = build_qn(n, prec).coeffs
    log = [f"t = {params.t}, s = {params.s}", f"q_n of degree {len(qn) - 1}"]
    roots = poly_roots_mod_p(qn, p)
    log.append(f"{len(roots)} roots of q_n mod p")
    if not roots:
        raise CMFailure(f"q_{n} has no root mod p")
    for r in roots:
        cands = j_candidates_from_root(r, p)
        if not cands:
            log.append(f"root {r}: 27(r-2) is a non-residue")
            continue
        for C, j in cands:
            for twisted in (False, True):
                E = curve_from_j(j, p, twisted)
                v = order_check(E, m, trials)
                log.append(f"root {r}, C {C}, j {j}, twist {twisted}: {'accept' if v.accepted else 'reject'}")
                if v.accepted:
                    return CurveResult(n, CurveParams(E.a, E.b, p, m), j, r, C, twisted, log)
    raise CMFailure("no candidate curve has order m\n" + "\n".join(log))
