#!/usr/bin/env python3
"""Independent oracles used to pin expected values in the test suite.

Run this before touching the library: every constant printed here is frozen
into tests/ as a literal. Nothing below imports the package; the routines are
deliberately separate implementations (analytic integrands, dense grids,
bisection, Bessel cross-products) so the tests stay independent of the code
paths they check.
"""

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq
from scipy.special import j0, y0


def energy_quadrature_oracle(c=0.5, g=0.2, n=2**16):
    """E for zeta^2 = 1 + c*cos(2 pi s) by midpoint quadrature of the
    analytic integrand (derivative taken in closed form, not by differences).
    """
    s = (np.arange(n) + 0.5) / n
    zeta_sq = 1.0 + c * np.cos(2 * np.pi * s)
    # zeta' = -pi c sin(2 pi s) / sqrt(1 + c cos(2 pi s))
    deriv_sq = (np.pi * c * np.sin(2 * np.pi * s)) ** 2 / zeta_sq
    kinetic = float(np.mean(deriv_sq))
    inv_sq = float(np.mean(1.0 / zeta_sq))
    return kinetic + 4 * np.pi**2 * g / inv_sq


def energy_closed_form(c=0.5, g=0.2):
    """Same quantity via the closed forms
    int sin^2 t/(1+c cos t) dt = (2 pi/c^2)(1 - sqrt(1-c^2)) and
    int dt/(1+c cos t) = 2 pi / sqrt(1-c^2).
    """
    root = math.sqrt(1 - c * c)
    kinetic = math.pi**2 * (1 - root)
    return kinetic + 4 * math.pi**2 * g * root


def radial_lambda1_dense(d, sign, nr=2**14, kappa0=1.0):
    """Lowest eigenvalue of -( (1 + sign*k0*r) u' )' = lam (1 + sign*k0*r) u,
    Dirichlet at 0 and d, conservative three-point scheme on a dense grid.
    """
    dr = d / nr
    r_half = (np.arange(nr) + 0.0) * dr + dr / 2  # nr half nodes r_{j+1/2}
    r_node = np.arange(1, nr) * dr                # nr-1 interior nodes
    w_half = 1.0 + sign * kappa0 * r_half
    w_node = 1.0 + sign * kappa0 * r_node
    diag = (w_half[:-1] + w_half[1:]) / dr**2 / w_node
    off = -w_half[1:-1] / dr**2 / np.sqrt(w_node[:-1] * w_node[1:])
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))[0]
    return float(vals[0])


def radial_lambda1_bessel(d, sign, kappa0=1.0):
    """Same eigenvalue from the exact solution: u = A J0(x rho) + B Y0(x rho)
    on rho = 1 + sign*r in [1, 1+sign*d]; lambda = x^2 at the first zero of
    the cross-product J0(x a) Y0(x b) - Y0(x a) J0(x b).
    """
    a, b = 1.0, 1.0 + sign * d
    lo, hi = min(a, b), max(a, b)

    def cross(x):
        return j0(x * lo) * y0(x * hi) - y0(x * lo) * j0(x * hi)

    # first root is near pi / (hi - lo)
    guess = math.pi / (hi - lo)
    x = brentq(cross, 0.5 * guess, 1.5 * guess, xtol=1e-14, rtol=1e-15)
    return x * x


def shell_thickness_bisection(a0, m0, v, tol=1e-12):
    """Root of  a0*d - m0*d^2/2 + (4 pi/3) d^3 = v  by plain bisection,
    bracketed by the first zero of A(r) = a0 - m0 r + 4 pi r^2.
    """
    disc = m0 * m0 - 16 * math.pi * a0
    r_star = (m0 - math.sqrt(disc)) / (8 * math.pi) if disc >= 0 else math.inf

    def cum(d):
        return a0 * d - m0 * d * d / 2 + (4 * math.pi / 3) * d**3

    lo, hi = 0.0, min(r_star, 10.0)
    assert cum(hi) > v > 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if cum(mid) < v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    e_quad = energy_quadrature_oracle()
    e_closed = energy_closed_form()
    print(f"E oracle (zeta^2 = 1 + 0.5 cos 2 pi s, g = 0.2):")
    print(f"  midpoint 2^16 quadrature : {e_quad:.15f}")
    print(f"  closed form              : {e_closed:.15f}")
    print(f"  |difference|             : {abs(e_quad - e_closed):.3e}")
    print()

    for d, sign, label in [(0.5, +1, "d=0.5 inner"), (0.3, -1, "d=0.3 outer")]:
        dense = radial_lambda1_dense(d, sign)
        bess = radial_lambda1_bessel(d, sign)
        print(f"radial annulus lambda1, {label}:")
        print(f"  dense grid Nr=2^14       : {dense:.12f}")
        print(f"  Bessel cross-product     : {bess:.12f}")
        print(f"  |difference|             : {abs(dense - bess):.3e}")
        print()

    d_shell = shell_thickness_bisection(4 * math.pi, 10 * math.pi, 1.0)
    print(f"shell thickness (A0=4pi, M0=10pi, V=1), bisection 1e-12:")
    print(f"  d = {d_shell:.15f}")


if __name__ == "__main__":
    main()
