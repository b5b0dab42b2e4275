import math
from fractions import Fraction

import mpmath
import pytest

from raminv.cyclotomic import (
    CycInt,
    cyc_add,
    cyc_mul,
    embed_complex,
    format_cyc,
    galois_sigma,
    parse_cyc,
    sqrt3,
    zeta_power,
)


def test_zeta_power_basics():
    assert zeta_power(0) == CycInt.from_int(1)
    assert zeta_power(36) == CycInt.from_int(-1)
    z24 = zeta_power(24)
    assert z24.coeffs[0] == -1 and z24.coeffs[12] == 1
    assert sum(abs(c) for c in z24.coeffs) == 2


def test_exponents_wrap_mod_72():
    assert zeta_power(72) == zeta_power(0)
    assert zeta_power(-6) == zeta_power(66)
    assert cyc_mul(zeta_power(6), zeta_power(66)) == CycInt.from_int(1)


def test_sqrt3_squares_to_3():
    assert sqrt3() * sqrt3() == CycInt.from_int(3)
    assert cyc_mul(sqrt3(), sqrt3()) == 3


def test_add_cancels():
    assert cyc_add(zeta_power(12), -zeta_power(12)).is_zero()


def test_embedding():
    with mpmath.workprec(160):
        assert embed_complex(CycInt.from_int(1), 128) == 1
        assert abs(embed_complex(zeta_power(18), 128) - 1j) < mpmath.ldexp(1, -120)
        # integer square root iteration as the reference for sqrt 3
        ref = Fraction(math.isqrt(3 * 4**130), 2**130)
        got = embed_complex(sqrt3(), 128)
        assert abs(got.real - mpmath.mpf(ref.numerator) / ref.denominator) < mpmath.ldexp(1, -120)
        assert abs(got.imag) < mpmath.ldexp(1, -120)


@pytest.mark.parametrize("k", range(0, 72, 5))
def test_embedding_of_every_power(k):
    with mpmath.workprec(128):
        want = mpmath.expjpi(mpmath.mpf(k) / 36)
        assert abs(embed_complex(zeta_power(k), 128) - want) < mpmath.ldexp(1, -110)


def test_galois_identity_and_homomorphism():
    x = parse_cyc("3*z^5 - z^17 + 2")
    y = parse_cyc("z^40 + 7")
    assert galois_sigma(1, sqrt3()) == sqrt3()
    for d in (5, 7, 11, 13, 25, 35, 71):
        assert galois_sigma(d, x * y) == galois_sigma(d, x) * galois_sigma(d, y)
        assert galois_sigma(d, zeta_power(1)) == zeta_power(d)


def test_galois_on_sqrt3_is_a_sign():
    for d in range(1, 72):
        if math.gcd(d, 72) != 1:
            continue
        s = galois_sigma(d, sqrt3())
        assert s == sqrt3() or s == -sqrt3()


@pytest.mark.parametrize("text", ["-z^18+z^6", "z^12-1", "1", "-1", "0", "3*z^5-2*z"])
def test_format_parse_round_trip(text):
    x = parse_cyc(text)
    assert parse_cyc(format_cyc(x)) == x
