"""Reduced primitive binary quadratic forms of negative discriminant."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath


def squarefree_part(m: int) -> int:
    """Squarefree part of m, keeping the sign: -27 -> -3, -99 -> -11."""
    sign = -1 if m < 0 else 1
    m = abs(m)
    out = 1
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e % 2:
            out *= p
        p += 1
    return sign * out * m


@dataclass(frozen=True)
class Discriminant:
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be positive (D = -n < 0)")

    @property
    def D(self) -> int:
        return -self.n

    @property
    def residue_class(self) -> int:
        return self.n % 24

    @property
    def core(self) -> int:
        """The squarefree part D' of D."""
        return squarefree_part(self.D)


def _disc(D) -> int:
    return D.D if isinstance(D, Discriminant) else int(D)


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return a > 0

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


def principal_form(D) -> QuadForm:
    D = _disc(D)
    if D % 4 != 1:
        raise ValueError(f"principal form [1,1,(1-D)/4] needs D = 1 mod 4, got {D}")
    return QuadForm(1, 1, (1 - D) // 4)


def inverse_form(f: QuadForm) -> QuadForm:
    """The opposite class [a,-b,c], renormalised when -b is not allowed."""
    g = QuadForm(f.a, -f.b, f.c)
    if g.is_reduced():
        return g
    return reduce_form(g)


def reduce_form(f: QuadForm) -> QuadForm:
    a, b, c = f.a, f.b, f.c
    if f.discriminant >= 0 or a <= 0:
        raise ValueError("only positive definite forms are supported")
    while True:
        # normalise b into (-a, a]
        k = (a - b) // (2 * a)
        b, c = b + 2 * k * a, a * k * k + b * k + c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return QuadForm(a, b, c)


def enumerate_reduced(D) -> list[QuadForm]:
    """All reduced primitive forms of discriminant D < 0, sorted by (a, b)."""
    D = _disc(D)
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {D}")
    forms = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(a, b, c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
    forms.sort(key=lambda f: (f.a, f.b))
    return forms


def class_number(D) -> int:
    return len(enumerate_reduced(D))


def tau_of_form(f: QuadForm, prec: int = 128) -> mpmath.mpc:
    """Root (-b + sqrt(D)) / (2a) of a z^2 + b z + c in the upper half plane."""
    D = f.discriminant
    with mpmath.workprec(prec + 8):
        tau = mpmath.mpc(-f.b, mpmath.sqrt(-D)) / (2 * f.a)
    return tau
