"""High-precision evaluation of Dedekind eta and the functions built from it.

All values are mpmath numbers. Every function takes the working precision
in bits and evaluates internally with a few guard bits, so results can be
used from any ambient mpmath context.
"""

from __future__ import annotations

import mpmath

from .cyclotomic import embed_complex

ETA_GUARD = 8
EXPR_GUARD = 4


def _check_upper(tau) -> None:
    if mpmath.im(tau) <= 0:
        raise ValueError("tau must lie in the upper half plane")


def _eta_series(tau, prec: int):
    # eta(tau) = q^(1/24) * sum_k (-1)^k q^(k(3k-1)/2), k over all integers
    q = mpmath.expjpi(2 * tau)
    eps = mpmath.ldexp(1, -prec - 4)
    total = mpmath.mpc(1)
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        t1 = q**e1
        if abs(t1) < eps:
            break
        term = t1 + q**e2
        total += -term if k % 2 else term
        k += 1
    return mpmath.expjpi(tau / 12) * total


def reduce_tau(tau):
    """Move tau into the standard fundamental domain.

    Returns (tau', shift24, factor) with eta(tau) = zeta_24^shift24 * factor * eta(tau').
    """
    shift = 0
    factor = mpmath.mpc(1)
    for _ in range(10_000):
        k = int(mpmath.nint(mpmath.re(tau)))
        if k:
            # eta(tau) = zeta24^k eta(tau - k)
            tau = tau - k
            shift += k
        if abs(tau) < 1 - mpmath.mpf(2) ** (-20):
            # eta(tau) = eta(-1/tau) / sqrt(-i tau)
            factor /= mpmath.sqrt(-1j * tau)
            tau = -1 / tau
        else:
            return tau, shift % 24, factor
    raise RuntimeError("fundamental domain reduction did not terminate")


def dedekind_eta(tau, prec: int = 128):
    """eta(tau) to about 2^-(prec-8) relative accuracy."""
    _check_upper(tau)
    with mpmath.workprec(prec + ETA_GUARD):
        tau = mpmath.mpc(tau)
        t, shift, factor = reduce_tau(tau)
        val = _eta_series(t, prec + ETA_GUARD)
        val *= factor * mpmath.expjpi(mpmath.mpf(shift) / 12)
        return val


def eta_product(tau, prec: int = 128, terms: int = 200):
    """eta via the raw product q^(1/24) prod (1 - q^n); an independent check for tests."""
    with mpmath.workprec(prec + ETA_GUARD):
        tau = mpmath.mpc(tau)
        q = mpmath.expjpi(2 * tau)
        p = mpmath.mpc(1)
        qn = mpmath.mpc(1)
        for _ in range(terms):
            qn *= q
            p *= 1 - qn
        return mpmath.expjpi(tau / 12) * p


def g_values(tau, prec: int = 128):
    """(g0, g1, g2, g3) at tau."""
    _check_upper(tau)
    with mpmath.workprec(prec + ETA_GUARD):
        tau = mpmath.mpc(tau)
        e = dedekind_eta(tau, prec + 4)
        g0 = dedekind_eta(tau / 3, prec + 4) / e
        g1 = mpmath.expjpi(mpmath.mpf(-1) / 12) * dedekind_eta((tau + 1) / 3, prec + 4) / e
        g2 = dedekind_eta((tau + 2) / 3, prec + 4) / e
        g3 = mpmath.sqrt(3) * dedekind_eta(3 * tau, prec + 4) / e
    return g0, g1, g2, g3


def r2_r4(tau, prec: int = 128):
    """R2 = eta(3 tau) eta(tau/3 + 2/3) / eta(tau)^2 and R4 = eta(tau/3) eta(tau/3 + 1/3) / eta(tau)^2."""
    _check_upper(tau)
    with mpmath.workprec(prec + ETA_GUARD):
        tau = mpmath.mpc(tau)
        e2 = dedekind_eta(tau, prec + 4) ** 2
        r2 = dedekind_eta(3 * tau, prec + 4) * dedekind_eta(tau / 3 + mpmath.mpf(2) / 3, prec + 4) / e2
        r4 = dedekind_eta(tau / 3, prec + 4) * dedekind_eta(tau / 3 + mpmath.mpf(1) / 3, prec + 4) / e2
    return r2, r4


def tau0(n: int, prec: int = 128):
    """The evaluation point (-1 + i sqrt(n)) / 2."""
    with mpmath.workprec(prec + 8):
        return mpmath.mpc(-0.5, mpmath.sqrt(n) / 2)


def t_value(n: int, prec: int = 128):
    """Ramanujan's t_n = (g2 g3)(-1/2 + i sqrt(n)/2)."""
    if n <= 0:
        raise ValueError("n must be positive")
    g = g_values(tau0(n, prec), prec)
    with mpmath.workprec(prec + 4):
        return g[2] * g[3]


def h_value(n: int, prec: int = 128):
    with mpmath.workprec(prec + 4):
        return 27 / t_value(n, prec) ** 12


def a_value(n: int, prec: int = 128):
    with mpmath.workprec(prec + 4):
        h = h_value(n, prec)
        return h + 1 / h


def j_value(n: int, prec: int = 128):
    """j at tau0 through (t^6 - 27 t^-6 - 6)^3."""
    with mpmath.workprec(prec + 4):
        t6 = t_value(n, prec) ** 6
        return (t6 - 27 / t6 - 6) ** 3


def j_from_g(tau, prec: int = 128):
    """j(tau) recovered from Y = g0^12 through the quartic Y^4+36Y^3+270Y^2+(756-j)Y+729 = 0."""
    g = g_values(tau, prec)
    with mpmath.workprec(prec + 4):
        y = g[0] ** 12
        return (y**4 + 36 * y**3 + 270 * y**2 + 756 * y + 729) / y


def quartic_residual(y, j):
    return y**4 + 36 * y**3 + 270 * y**2 + (756 - j) * y + 729


def sextic_G(y, j):
    """The degree-6 relation between Y = t^12 and j."""
    return (
        y**6
        - 270 * y**5
        + (-36 * j + 26487) * y**4
        + (-(j**2) + 1512 * j - 1122660) * y**3
        + (-26244 * j + 19309023) * y**2
        - 143489070 * y
        + 387420489
    )


def embed_coeff(num, den: int, prec: int):
    return embed_complex(num, max(prec, 64)) / den


def evaluate_expr(h, tau, prec: int = 128, gvals=None):
    """Numerical value of a FunctionExpr at tau."""
    if gvals is None:
        gvals = g_values(tau, prec + EXPR_GUARD * max(1, len(h.terms)))
    with mpmath.workprec(prec + EXPR_GUARD * max(1, len(h.terms))):
        total = mpmath.mpc(0)
        for exps, (num, den) in h.terms.items():
            term = embed_coeff(num, den, prec + 8)
            for gi, e in zip(gvals, exps):
                if e:
                    term *= gi**e
            total += term
        return total
