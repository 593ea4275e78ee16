#!/usr/bin/env python3
"""Reference values for the unit tests, computed independently of the C++ code.

Scalar closed forms use mpmath at 30 digits. The two-photon overlap T is
computed by direct triple summation over (k, k', p) with the symmetric
bound-state kernel, without the sum-momentum factorization used by the
library. Output: tests/oracles/frozen_values.hpp.
"""
import math
import pathlib

import mpmath as mp
import numpy as np

mp.mp.dps = 30
LN2 = mp.log(2)


def sigma_prime(sigma):
    return mp.mpf(sigma) / (2 * mp.sqrt(LN2))


def xi_gauss(k, sigma):
    sp = sigma_prime(sigma)
    return (mp.pi * sp**2) ** (-0.25) * mp.exp(-k**2 / (2 * sp**2))


def xi_lorentz(k, sigma):
    return mp.sqrt(sigma / (2 * mp.pi)) / (k + 0.5j * sigma)


def t_of(k, delta=0, gamma=1, loss=0):
    return (k - delta - 1j * (gamma - loss)) / (k - delta + 1j * (gamma + loss))


def s_of(k, delta=0, gamma=1, loss=0):
    return mp.sqrt(2 * gamma) / (k - delta + 1j * (gamma + loss))


def O1_gauss(sigma, L):
    f = lambda k: xi_gauss(k, sigma) ** 2 * t_of(k) * mp.exp(-1j * k * L)
    return -mp.quad(f, [-mp.inf, -3, 0, 3, mp.inf])


def g_gauss(K, sigma):
    f = lambda p: xi_gauss(p, sigma) * xi_gauss(K - p, sigma) * s_of(p)
    return mp.quad(f, [-mp.inf, -3, 0, 3, mp.inf])


def T_bruteforce_gauss(sigma, L, n=321):
    """T = <target|beta> with b(k,k') from the symmetric kernel B, summed on a
    uniform grid (trapezoid, exponentially convergent for these integrands)."""
    sp = float(sigma_prime(sigma))
    W = max(12.0 * sp, 12.0)
    k = np.linspace(-W, W, n)
    h = k[1] - k[0]
    norm = (math.pi * sp * sp) ** -0.25
    xi = lambda x: norm * np.exp(-x * x / (2 * sp * sp))
    s = lambda x: math.sqrt(2.0) / (x + 1j)
    t = lambda x: (x - 1j) / (x + 1j)
    pref = 1j * math.sqrt(2.0) / math.pi
    p = k
    total = 0.0 + 0.0j
    for i, ki in enumerate(k):
        K = ki + k  # vector over k'
        pp = K[:, None] - p[None, :]
        kern = (s(p)[None, :] + s(pp)) * xi(p)[None, :] * xi(pp)
        b = pref * s(ki) * s(k) * kern.sum(axis=1) * h
        beta = t(ki) * t(k) * xi(ki) * xi(k) + 0.5 * b
        target_conj = -xi(ki) * xi(k) * np.exp(-1j * (ki + k) * L)
        total += (target_conj * beta).sum() * h * h
    return complex(total)


def worst_case(O1, T, n=2001):
    a = np.linspace(0, 1, n)
    A, Z = np.meshgrid(a, a, indexing="ij")
    F = np.abs(A * Z + O1 * (A * (1 - Z) + (1 - A) * Z) + T * (1 - A) * (1 - Z))
    return float(F.min())


def lorentz_A(sigma, L):
    f = lambda k: xi_lorentz(k, sigma) * mp.conj(xi_lorentz(k, sigma)) * t_of(k) * mp.exp(-1j * k * L)
    if L == 0:
        return mp.quad(f, [-mp.inf, 0, mp.inf])
    return mp.quadosc(f, [-mp.inf, 0], omega=abs(L)) + mp.quadosc(f, [0, mp.inf], omega=abs(L))


def lorentz_g(K, sigma):
    f = lambda p: xi_lorentz(p, sigma) * xi_lorentz(K - p, sigma) * s_of(p)
    return mp.quad(f, [-mp.inf, -5, 0, 5, mp.inf])


def lorentz_h(K, sigma):
    u = lambda k: mp.conj(xi_lorentz(k, sigma)) * s_of(k)
    return mp.quad(lambda k: u(k) * u(K - k), [-mp.inf, -5, 0, 5, mp.inf])


def lorentz_C(sigma, L):
    # g and H in closed form, each checked above against direct quadrature.
    q = mp.mpf(sigma) / 2
    a2 = sigma / (2 * mp.pi)
    b = mp.sqrt(2)
    e = -1j
    g = lambda K: -2j * mp.pi * a2 * b / ((K + 2j * q) * (K + 1j * q - e))
    H = lambda K: 4j * mp.pi * a2 * b * b / ((1j * q - e) * (K - 2j * q) * (K - 2 * e))
    f = lambda K: g(K) * H(K) * mp.exp(-1j * K * L)
    pref = 2j * mp.sqrt(2) / mp.pi
    return pref * (mp.quadosc(f, [-mp.inf, 0], omega=L) + mp.quadosc(f, [0, mp.inf], omega=L))


def sech_transform(sigma, L):
    k0 = mp.mpf(sigma) / (2 * mp.acosh(mp.sqrt(2)))
    inten = lambda k: mp.sech(k / k0) ** 2 / (2 * k0)
    return mp.quad(lambda k: inten(k) * mp.cos(k * L), [-mp.inf, 0, mp.inf])


def main():
    values = {}
    values["kXi0GaussSigma1"] = xi_gauss(0, 1)
    values["kGaussFourierSigma1L2"] = mp.exp(-sigma_prime(1) ** 2)
    values["kB0000"] = -8 / mp.pi
    g0 = g_gauss(0, 1.72)
    values["kG0Sigma172Re"], values["kG0Sigma172Im"] = g0.real, g0.imag
    o1 = O1_gauss(1.72, 0.80)
    values["kO1Sigma172L080Re"], values["kO1Sigma172L080Im"] = o1.real, o1.imag
    o1s = O1_gauss(0.1, 2.0)
    values["kO1Sigma01L2Re"], values["kO1Sigma01L2Im"] = o1s.real, o1s.imag
    T = T_bruteforce_gauss(1.72, 0.80)
    values["kTSigma172L080Re"], values["kTSigma172L080Im"] = T.real, T.imag
    values["kFSigma172L080"] = worst_case(complex(o1), T)
    values["kSechTransformSigma172L080"] = sech_transform(1.72, 0.80)
    A = lorentz_A(1.68, 0.44)
    values["kLorentzA168L044Re"], values["kLorentzA168L044Im"] = A.real, A.imag
    for K, tag in [(0.0, "0"), (0.7, "07"), (-2.3, "m23")]:
        g, H = lorentz_g(K, 1.68), lorentz_h(K, 1.68)
        values[f"kLorentzG{tag}Re"], values[f"kLorentzG{tag}Im"] = g.real, g.imag
        values[f"kLorentzH{tag}Re"], values[f"kLorentzH{tag}Im"] = H.real, H.imag
    C = lorentz_C(1.68, 0.44)
    values["kLorentzC168L044Re"], values["kLorentzC168L044Im"] = C.real, C.imag

    lines = [
        "#pragma once",
        "",
        "// Generated by tests/oracles/make_frozen_values.py. Do not edit.",
        "",
        "namespace cphase::frozen {",
        "",
    ]
    for name, v in values.items():
        v = mp.mpf(v)
        if abs(v) < 1e-25:  # quadrature noise on exactly vanishing parts
            v = mp.mpf(0)
        lines.append(f"inline constexpr double {name} = {mp.nstr(mp.mpf(v), 17, min_fixed=0, max_fixed=0)};")
    lines += ["", "} // namespace cphase::frozen", ""]
    out = pathlib.Path(__file__).with_name("frozen_values.hpp")
    out.write_text("\n".join(lines))
    print("\n".join(lines))


if __name__ == "__main__":
    main()
