import random

import mpmath
import pytest

from raminv.quadforms import (
    Discriminant,
    QuadForm,
    class_number,
    enumerate_reduced,
    inverse_form,
    principal_form,
    reduce_form,
    squarefree_part,
    tau_of_form,
)


@pytest.mark.parametrize("D, c", [(-19, 5), (-91, 23), (-259, 65)])
def test_principal_form(D, c):
    assert principal_form(D) == QuadForm(1, 1, c)


@pytest.mark.parametrize("D, h", [(-19, 1), (-259, 4), (-451, 6), (-3, 1), (-339, 6), (-115, 2)])
def test_class_numbers(D, h):
    assert class_number(D) == h


def test_forms_of_259():
    forms = enumerate_reduced(-259)
    assert all(f.is_reduced() and f.is_primitive() and f.discriminant == -259 for f in forms)
    assert QuadForm(5, 1, 13) in forms


def test_non_squarefree_discriminants_accepted():
    for n in (27, 75, 147, 243, 363):
        assert class_number(-n) >= 1
    assert squarefree_part(75) == 3
    assert Discriminant(75).core == -3


def test_tau_of_form():
    with mpmath.workprec(256):
        t = tau_of_form(QuadForm(1, 1, 5), 256)
        assert abs(t - mpmath.mpc(-0.5, mpmath.sqrt(19) / 2)) < mpmath.ldexp(1, -240)
        t = tau_of_form(QuadForm(5, 1, 13), 256)
        assert abs(t - mpmath.mpc(-1, mpmath.sqrt(259)) / 10) < mpmath.ldexp(1, -240)
        assert abs(5 * t * t + t + 13) < mpmath.ldexp(1, -230)


def test_reduce_random_forms_lands_in_enumeration():
    rng = random.Random(3)
    for _ in range(300):
        a = rng.randint(1, 60)
        b = rng.randint(-200, 200)
        D = -rng.choice([19, 91, 259, 451, 339, 3, 27, 123])
        if (b * b - D) % (4 * a):
            continue
        f = QuadForm(a, b, (b * b - D) // (4 * a))
        if not f.is_primitive():
            continue
        g = reduce_form(f)
        assert g in enumerate_reduced(D)


def test_inverse_form():
    for f in enumerate_reduced(-451):
        g = inverse_form(f)
        assert g.discriminant == -451 and g.is_reduced()
        assert inverse_form(g) == f


def test_rejects_bad_discriminants():
    with pytest.raises(ValueError):
        enumerate_reduced(-18)
    with pytest.raises(ValueError):
        enumerate_reduced(5)
