# SPDX-License-Identifier: Apache-2.0
"""Independent reference for the porous-absorber chain.

Evaluates the empirical power-law medium model and the layer/cavity
transfer, printing golden values that are frozen into test_materials.cpp.
Run: python3 porous_reference.py
"""
import numpy as np

RHO, C = 1.2, 343.0
RHOC = RHO * C


def medium(f, sigma):
    x = (1e3 * f / sigma) ** -0.632
    xk = (1e3 * f / sigma) ** -0.618
    Zc = RHOC * (1 + 5.50 * x - 1j * 8.43 * x)
    k = (2 * np.pi * f / C) * (1 + 7.81 * xk - 1j * 11.41 * xk)
    return Zc, k


def surface_impedance(sigma, d, d0, f):
    Zc, k = medium(f, sigma)
    if d0 > 0:
        k0 = 2 * np.pi * f / C
        Zb = -1j * RHOC / np.tan(k0 * d0)
        return Zc * (Zb + 1j * Zc * np.tan(k * d)) / (Zc + 1j * Zb * np.tan(k * d))
    return -1j * Zc / np.tan(k * d)


def absorption(Zs):
    return 1 - abs((Zs - RHOC) / (Zs + RHOC)) ** 2


if __name__ == "__main__":
    print("medium f=1000 sigma=10000:")
    Zc, k = medium(1000.0, 10000.0)
    print(f"  Zc = {Zc.real:.12e} {Zc.imag:+.12e}j")
    print(f"  k  = {k.real:.12e} {k.imag:+.12e}j")

    print("layered (10e3, 0.02, 0.02) at 1 kHz:")
    Zs = surface_impedance(10e3, 0.02, 0.02, 1000.0)
    print(f"  Zs = {Zs.real:.12e} {Zs.imag:+.12e}j  alpha = {absorption(Zs):.12f}")

    print("thin panel (5e3, 0.03, 0) absorption sweep:")
    for f in [125.0, 250.0, 500.0, 1000.0, 2000.0, 2800.0]:
        print(f"  f={f:6.0f}  alpha={absorption(surface_impedance(5e3, .03, 0, f)):.12f}")
