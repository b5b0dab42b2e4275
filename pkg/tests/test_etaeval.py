import random

import mpmath
import pytest

from raminv.cyclotomic import sqrt3
from raminv.etaeval import (
    a_value,
    dedekind_eta,
    eta_product,
    evaluate_expr,
    g_values,
    h_value,
    j_from_g,
    j_value,
    r2_r4,
    t_value,
    tau0,
)
from raminv.reciprocity import FunctionExpr, h_expr

TOL = mpmath.ldexp(1, -200)


def _taus(k, seed):
    rng = random.Random(seed)
    return [mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 2.0)) for _ in range(k)]


def test_eta_transformations():
    with mpmath.workprec(256):
        for tau in _taus(10, 11):
            e = dedekind_eta(tau, 256)
            assert abs(dedekind_eta(tau + 1, 256) - mpmath.expjpi(mpmath.mpf(1) / 12) * e) < TOL
            assert abs(dedekind_eta(-1 / tau, 256) - mpmath.sqrt(-1j * tau) * e) < TOL


def test_eta_against_product():
    with mpmath.workprec(200):
        for tau in _taus(5, 12):
            assert abs(dedekind_eta(tau, 200) - eta_product(tau, 200, terms=400)) < mpmath.ldexp(1, -180)


def test_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^(3/4))
    with mpmath.workprec(200):
        want = mpmath.gamma(mpmath.mpf(1) / 4) / (2 * mpmath.pi ** (mpmath.mpf(3) / 4))
        assert abs(dedekind_eta(mpmath.mpc(0, 1), 200) - want) < mpmath.ldexp(1, -190)


def test_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        dedekind_eta(mpmath.mpc(0, -1))


def test_r4_is_zeta24_g0_g1():
    with mpmath.workprec(256):
        for tau in _taus(5, 13):
            g = g_values(tau, 256)
            r2, r4 = r2_r4(tau, 256)
            assert abs(r4 - mpmath.expjpi(mpmath.mpf(1) / 12) * g[0] * g[1]) < TOL * abs(r4)
            assert abs((r2 * r4) ** 12 + 1) < TOL


def test_t_and_h_for_19():
    with mpmath.workprec(256):
        assert abs(h_value(19, 256) - 27 / t_value(19, 256) ** 12) < TOL
        # H_19 and 1/H_19 are the roots of x^2 - 302 x + 1
        assert abs(a_value(19, 256) - 302) < mpmath.ldexp(1, -190)


def test_j_for_19():
    with mpmath.workprec(256):
        j = j_value(19, 256)
        assert abs(j + 884736) < mpmath.ldexp(1, -170)
        assert abs(j_from_g(tau0(19, 256), 256) - j) < mpmath.ldexp(1, -170)
        assert abs(1728 * mpmath.kleinj(tau0(19, 256)) - j) < mpmath.ldexp(1, -170)


def test_evaluate_expr():
    tau = tau0(19, 128)
    with mpmath.workprec(128):
        assert abs(evaluate_expr(FunctionExpr.constant(1), tau, 128) - 1) < mpmath.ldexp(1, -120)
        e = FunctionExpr.monomial((0, 0, -1, -1), sqrt3()) * FunctionExpr.monomial((0, 0, 1, 1), 1)
        assert abs(evaluate_expr(e, tau, 128) - mpmath.sqrt(3)) < mpmath.ldexp(1, -120)
        assert abs(evaluate_expr(h_expr(), tau, 128) - h_value(19, 128)) < mpmath.ldexp(1, -110) * abs(h_value(19, 128))
