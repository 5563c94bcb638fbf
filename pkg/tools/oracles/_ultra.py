"""Shared mpmath helpers for the offline oracle scripts.

Everything here is deliberately independent of the shipped package: the
dimension-shifted Bessel functions are evaluated through mpmath's classical
J/I routines and the product rule on the z^(-s) prefactor, not through any
ascending-series code of our own.
"""

from mpmath import mp, mpf, binomial, rf, besselj, besseli


def dim_shift(d):
    return (mpf(d) - 2) / 2


def ultra(kind, d, l, z, m=0):
    """m-th derivative of j_l (kind='j') or i_l (kind='i') for dimension d.

    j_l(z) = z^(-s) J_(s+l)(z) with s=(d-2)/2; derivatives by the product
    rule, using (z^(-s))^(i) = (-1)^i (s)_i z^(-s-i).
    """
    s = dim_shift(d)
    nu = s + l
    z = mpf(z)
    bessel = besselj if kind == "j" else besseli
    if z == 0:
        raise ValueError("use series limits for z=0")
    total = mpf(0)
    for i in range(m + 1):
        pref = binomial(m, i) * (-1) ** i * rf(s, i) * z ** (-s - i)
        total += pref * bessel(nu, z, derivative=m - i)
    return total


def ultra_j(d, l, z, m=0):
    return ultra("j", d, l, z, m)


def ultra_i(d, l, z, m=0):
    return ultra("i", d, l, z, m)


def bisect(f, lo, hi, iters=160):
    lo, hi = mpf(lo), mpf(hi)
    flo = f(lo)
    fhi = f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    assert flo * fhi < 0, "oracle bracket without sign change"
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def p11(d):
    """First positive zero of j_1', bracketed by sqrt(d) < p < sqrt(d+2)."""
    f = lambda z: ultra_j(d, 1, z, 1)
    return bisect(f, mp.sqrt(d), mp.sqrt(d + 2))


def W(d, l, tau, a):
    """Free-plate determinant W_l(a) with b = sqrt(a^2 + tau) (unit ball)."""
    a = mpf(a)
    b = mp.sqrt(a * a + mpf(tau))
    k = mpf(l * (l + d - 2))
    j0 = ultra_j(d, l, a, 0)
    j1 = ultra_j(d, l, a, 1)
    j2 = ultra_j(d, l, a, 2)
    i0 = ultra_i(d, l, b, 0)
    i1 = ultra_i(d, l, b, 1)
    i2 = ultra_i(d, l, b, 2)
    t1 = a * a * j2 * (-a * a * b * i1 + k * (b * i1 - i0))
    t2 = b * b * i2 * (a * b * b * j1 + k * (a * j1 - j0))
    return t1 - t2


def scan_w_roots(d, l, tau, a_max, step=None):
    """All sign-change roots of W_l on (0, a_max], refined by bisection."""
    if step is None:
        step = mpf("0.01")
    roots = []
    a_prev = step
    f_prev = W(d, l, tau, a_prev)
    a = a_prev + step
    while a <= mpf(a_max) + step / 2:
        f = W(d, l, tau, a)
        if f == 0:
            roots.append(a)
        elif (f > 0) != (f_prev > 0):
            roots.append(bisect(lambda x: W(d, l, tau, x), a_prev, a))
        a_prev, f_prev = a, f
        a += step
    return roots
