"""Independent reference computations used only by the tests.

Nothing here calls the factor programs, the closed-form exponentials or the
finite-difference machinery of the package.
"""
import math

import numpy as np
from scipy.linalg import expm
from scipy.integrate import quad


def eps(k):
    return math.sqrt(2.0 / (k * (k - 1)))


def gell_mann_direct(n):
    """Generators written out entry by entry from the index rules."""
    out = {}
    for N in range(1, n):
        for a in range(1, N + 1):
            s = np.zeros((n, n), complex)
            s[a - 1, N] = s[N, a - 1] = 1
            t = np.zeros((n, n), complex)
            t[a - 1, N] = -1j
            t[N, a - 1] = 1j
            out[N * N + 2 * a - 2] = s
            out[N * N + 2 * a - 1] = t
        d = np.zeros(n)
        d[:N] = 1
        d[N] = -N
        out[(N + 1) ** 2 - 1] = np.diag(eps(N + 1) * d).astype(complex)
    return [out[i] for i in range(1, n * n)]


def element_by_expm(n, angles):
    """Group element from the ordered product of scipy matrix exponentials."""
    lam = gell_mann_direct(n)
    L = lambda i: lam[i - 1]
    angles = list(angles)
    if n == 2:
        phi, theta, psi = angles
        return expm(1j * phi * L(3)) @ expm(1j * theta * L(2)) @ expm(1j * psi * L(3))
    m = n - 1
    g = expm(1j * angles[0] * L(3)) @ expm(1j * angles[1] * L(2))
    for a in range(2, m + 1):
        th, ph = angles[2 * a - 2], angles[2 * a - 1]
        g = g @ expm(1j * th / eps(a) * L(a * a - 1)) @ expm(1j * ph * L(a * a + 1))
    sub = angles[2 * m : 2 * m + m * m - 1]
    emb = np.eye(n, dtype=complex)
    emb[:m, :m] = element_by_expm(m, sub)
    omega = angles[-1]
    return g @ emb @ expm(1j * omega / eps(n) * L(n * n - 1))


def su2_closed_form(phi, theta, psi):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([
        [np.exp(1j * (phi + psi)) * c, np.exp(1j * (phi - psi)) * s],
        [-np.exp(-1j * (phi - psi)) * s, np.exp(-1j * (phi + psi)) * c],
    ])


def exp_series(m, x, terms=60):
    """exp(i x m) by summing the power series term by term."""
    out = np.eye(len(m), dtype=complex)
    term = np.eye(len(m), dtype=complex)
    for k in range(1, terms):
        term = term @ (1j * x * m) / k
        out = out + term
    return out


def base_integral_quadrature(N):
    """Integral of the coset density over its range box, factor by factor."""
    theta_vol = math.pi * (2 * math.pi) ** (N - 1)
    top = quad(lambda p: math.cos(p) * math.sin(p) ** (2 * N - 1), 0, math.pi / 2)[0]
    inner = 1.0
    for a in range(1, N):
        inner *= quad(lambda p: math.sin(p) * math.cos(p) ** (2 * a - 1), 0, math.pi / 2)[0]
    return 2 * theta_vol * top * inner


def fs_from_kahler(xi, omega, psi, r_func, h=1e-6):
    """Fubini-Study metric in (xi, omega, psi) from the Kahler form in z coordinates,

    g = Re[ dz.dz* / (1+|z|^2) - (z*.dz)(z.dz*) / (1+|z|^2)^2 ],
    with z_i = tan(xi) R_i(omega) exp(i psi_i) and a finite-difference Jacobian.
    """
    x0 = np.concatenate([[xi], omega, psi])
    N = len(psi)

    def z_of(x):
        return math.tan(x[0]) * r_func(x[1:N]) * np.exp(1j * x[N:])

    z = z_of(x0)
    dz = np.empty((len(x0), N), complex)
    for k in range(len(x0)):
        e = np.zeros(len(x0))
        e[k] = h
        dz[k] = (z_of(x0 + e) - z_of(x0 - e)) / (2 * h)
    q = 1 + np.sum(np.abs(z) ** 2)
    a = dz @ dz.conj().T / q
    v = dz @ z.conj()
    b = np.outer(v, v.conj()) / q ** 2
    return (a - b).real


def r_vector_direct(omega):
    """Positive-orthant sphere point written out from its product formula."""
    N = len(omega) + 1
    phi = {mu + 1: omega[mu] for mu in range(N - 1)}
    r = []
    for k in range(1, N + 1):
        p = 1.0
        for i in range(1, k):
            p *= math.cos(phi[N - i])
        if k < N:
            p *= math.sin(phi[N - k])
        r.append(p)
    return np.array(r)
