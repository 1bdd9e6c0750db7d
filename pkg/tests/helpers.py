"""Shared sample generators for the test suite."""

import math

import numpy as np

from curvespec import curves, functional


def random_fourier_profile(rng, n_modes=6, length=1.0, n=512, amplitude=0.6):
    ks = np.arange(1, n_modes + 1, dtype=float)
    raw = np.concatenate([rng.normal(0, amplitude / ks), rng.normal(0, amplitude / ks)])
    pairs = list(zip(raw[:n_modes], raw[n_modes:]))
    return curves.make_fourier_profile(pairs, length, n)


def random_admissible_density(rng, n=128):
    """Normalized density with E(zeta) <= pi^2 for a coupling chosen after the
    shape: E <= kinetic + 4 pi^2 g because int zeta^-2 >= 1, so any
    g <= (pi^2 - kinetic) / (4 pi^2) is admissible."""
    while True:
        zeta = functional.random_density(n, rng, amplitude=float(rng.uniform(0.02, 0.35)))
        kinetic = functional.evaluate_E(zeta, 0.0)
        if kinetic < 0.95 * math.pi**2:
            break
    g = float(rng.uniform(0.01, 1.0)) * (math.pi**2 - kinetic) / (4 * math.pi**2)
    g = max(g, 1e-6)
    return zeta, g
