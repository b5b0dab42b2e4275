"""Exact arithmetic in Z[zeta_72].

Elements are stored as coefficient vectors of length 24 modulo the
cyclotomic polynomial Phi_72(x) = x^24 - x^12 + 1, so equality of two
elements is equality of their vectors.
"""

from __future__ import annotations

import functools
import math
import re

import mpmath

N = 72
DEG = 24  # phi(72)


def _reduce(v: list[int]) -> tuple[int, ...]:
    """Reduce a coefficient list of any length modulo x^24 - x^12 + 1."""
    v = list(v)
    # x^k = x^(k-12) - x^(k-24) for k >= 24
    for k in range(len(v) - 1, DEG - 1, -1):
        c = v[k]
        if c:
            v[k] = 0
            v[k - 12] += c
            v[k - 24] -= c
    v = v[:DEG] + [0] * (DEG - len(v))
    return tuple(v)


class CycInt:
    """An element of Z[zeta_72] in the power basis zeta^0 .. zeta^23."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > DEG:
            self.coeffs = _reduce(coeffs)
        else:
            self.coeffs = tuple(coeffs) + (0,) * (DEG - len(coeffs))
        self._hash = None

    @classmethod
    def from_int(cls, n: int) -> CycInt:
        return cls((n,))

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other)
        return CycInt(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(-a for a in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other)
        return CycInt(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(other * a for a in self.coeffs)
        if not isinstance(other, CycInt):
            return NotImplemented
        a = self.coeffs
        b = other.coeffs
        prod = [0] * (2 * DEG - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return CycInt(_reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in Z[zeta_72]")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def content(self) -> int:
        return math.gcd(*self.coeffs)

    def exact_div(self, k: int) -> CycInt:
        if any(c % k for c in self.coeffs):
            raise ValueError(f"{self} is not divisible by {k}")
        return CycInt(c // k for c in self.coeffs)

    def root_of_unity_exponent(self):
        """Return k with self == zeta^k, or None."""
        for k in range(N):
            if zeta_power(k) == self:
                return k
        return None

    def __repr__(self):
        return f"CycInt({format_cyc(self)!r})"

    def __str__(self):
        return format_cyc(self)


ZERO = CycInt()
ONE = CycInt((1,))


@functools.lru_cache(maxsize=None)
def zeta_power(k: int) -> CycInt:
    """Canonical representative of zeta_72^k."""
    k %= N
    v = [0] * (k + 1)
    v[k] = 1
    return CycInt(_reduce(v))


def sqrt3() -> CycInt:
    """sqrt(3) = zeta^6 - zeta^30, the positive square root under the standard embedding."""
    return zeta_power(6) - zeta_power(30)


def cyc_add(a: CycInt, b: CycInt) -> CycInt:
    return a + b


def cyc_mul(a: CycInt, b: CycInt) -> CycInt:
    return a * b


@functools.lru_cache(maxsize=None)
def _sigma_matrix(d: int) -> tuple[tuple[int, ...], ...]:
    # row k holds the image of zeta^k under zeta -> zeta^d
    return tuple(zeta_power(d * k).coeffs for k in range(DEG))


def galois_sigma(d: int, x: CycInt) -> CycInt:
    """Apply the automorphism zeta_72 -> zeta_72^d."""
    if math.gcd(d, N) != 1:
        raise ValueError(f"d={d} is not coprime to {N}")
    mat = _sigma_matrix(d % N)
    out = [0] * DEG
    for k, c in enumerate(x.coeffs):
        if c:
            row = mat[k]
            for j in range(DEG):
                if row[j]:
                    out[j] += c * row[j]
    return CycInt(out)


def embed_complex(x: CycInt, prec: int = 128) -> mpmath.mpc:
    """Complex value of x under zeta_72 -> exp(2 pi i / 72)."""
    if prec < 64:
        raise ValueError("prec must be at least 64 bits")
    with mpmath.workprec(prec + 8):
        z = mpmath.expjpi(mpmath.mpf(2) / N)
        acc = mpmath.mpc(0)
        zk = mpmath.mpc(1)
        for c in x.coeffs:
            if c:
                acc += c * zk
            zk *= z
        return acc


def format_cyc(x: CycInt, var: str = "z") -> str:
    """Render as e.g. '-z^18+z^6' (highest power first)."""
    parts = []
    for k in range(DEG - 1, -1, -1):
        c = x.coeffs[k]
        if not c:
            continue
        if k == 0:
            mono = str(abs(c))
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if abs(c) != 1:
                mono = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append(sign + mono)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(?:(z|zeta)(?:\^\{?(-?\d+)\}?)?)?")


def parse_cyc(text: str) -> CycInt:
    """Parse sums like '-z^18 + z^6', 'z^12-1', '-1'. zeta^k with k < 0 is allowed."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty expression")
    acc = ZERO
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {s[pos:]!r}")
        sign, digits, var, exp = m.groups()
        if not digits and not var:
            raise ValueError(f"cannot parse {text!r} at {s[pos:]!r}")
        coeff = int(digits) if digits else 1
        if sign == "-":
            coeff = -coeff
        if var:
            k = int(exp) if exp is not None else 1
            acc = acc + zeta_power(k) * coeff
        else:
            acc = acc + coeff
        pos = m.end()
    return acc
