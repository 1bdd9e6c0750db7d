"""Radial reduction for shells over convex surfaces.

A convex surface enters only through three numbers: area A0, total mean
curvature M0, and the shell volume V. The parallel-surface area follows the
Steiner formula A(r) = A0 - M0 r + 4 pi r^2, the thickness is fixed by the
volume, and the reduced eigenvalue problem is -(A u')' = lambda A u with
Dirichlet ends. For the sphere (M0 = 8 pi at A0 = 4 pi) the substitution
w = (1 - r) u turns the weighted problem into -w'' = lambda w, so
lambda1 = pi^2 / d^2 exactly; that is the oracle the solver is checked
against. Values computed here are reduced (radial test-function) quantities,
to be compared among themselves, not certified 3D shell eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import sturm
from .errors import GeometryError, ParameterError

FOUR_PI = 4 * math.pi


@dataclass(frozen=True)
class ShellProfile:
    """(area, total mean curvature, volume) of a convex shell."""

    area: float = FOUR_PI
    total_mean_curvature: float = 8 * math.pi
    volume: float = 1.0

    def __post_init__(self):
        if not (self.area > 0 and self.volume > 0):
            raise ParameterError("area and volume must be positive")
        min_m0 = 2 * math.sqrt(FOUR_PI * self.area)  # sphere of the same area
        if self.total_mean_curvature < min_m0 * (1 - 1e-12):
            raise GeometryError(
                f"total mean curvature {self.total_mean_curvature:.6f} is below the "
                f"sphere value {min_m0:.6f} for area {self.area:.6f}; no convex "
                "surface realizes it")
        # thickness must exist: the volume has to fit under A(r) before A vanishes
        thickness_from_volume(self)

    @property
    def scale(self) -> float:
        """Length factor mapping this shell to the unit-sphere normalization
        (area 4 pi)."""
        return math.sqrt(self.area / FOUR_PI)

    def normalized(self) -> "ShellProfile":
        s = self.scale
        return ShellProfile(area=FOUR_PI, total_mean_curvature=self.total_mean_curvature / s,
                            volume=self.volume / s**3)


def steiner_area(profile: ShellProfile, r: float) -> float:
    """Parallel-surface area A(r) = A0 - M0 r + 4 pi r^2 (inward offset of a
    convex outer edge)."""
    if r < 0:
        raise ParameterError(f"offset must be nonnegative, got {r}")
    return profile.area - profile.total_mean_curvature * r + FOUR_PI * r * r


def _first_area_zero(profile: ShellProfile) -> float:
    a0, m0 = profile.area, profile.total_mean_curvature
    disc = m0 * m0 - 4 * FOUR_PI * a0
    if disc < 0:
        return math.inf
    return (m0 - math.sqrt(disc)) / (2 * FOUR_PI)


def _cumulative_area(profile: ShellProfile, r: float) -> float:
    a0, m0 = profile.area, profile.total_mean_curvature
    return a0 * r - m0 * r * r / 2 + FOUR_PI * r**3 / 3


def thickness_from_volume(profile: ShellProfile) -> float:
    """The unique d with int_0^d A(r) dr = V, by a bracketed root solve on the
    cubic antiderivative. Raises GeometryError when the volume exceeds what
    fits before A(r) first vanishes."""
    r_star = min(_first_area_zero(profile), 1e6)
    v_max = _cumulative_area(profile, r_star)
    if profile.volume >= v_max:
        raise GeometryError(
            f"volume {profile.volume:.6f} does not fit: A(r) vanishes at "
            f"r = {r_star:.6f} after only {v_max:.6f}")
    return brentq(lambda r: _cumulative_area(profile, r) - profile.volume,
                  0.0, r_star, xtol=1e-14, rtol=8.9e-16)


def reduced_ground_state(profile: ShellProfile, nr: int = 4096) -> float:
    """Lowest eigenvalue of -(A u')' = lambda A u on (0, d), Dirichlet ends,
    with d from the volume. Computed in the unit-area normalization and
    scaled back (lambda ~ length^-2)."""
    if nr < 64:
        raise ParameterError(f"need nr >= 64, got {nr}")
    norm = profile.normalized()
    d = thickness_from_volume(norm)
    lam = sturm.lowest_eigenvalue(lambda r: _area_vec(norm, r), d, nr)
    return lam / profile.scale**2


def _area_vec(profile: ShellProfile, r):
    r = np.asarray(r, dtype=float)
    return profile.area - profile.total_mean_curvature * r + FOUR_PI * r * r


def variable_change(profile: ShellProfile, nr: int = 4096) -> dict:
    """Tabulate the comparison map r' with A0(r') dr' = A(r) dr against the
    sphere of the same area and volume, via the closed-form cumulative areas.

    Returns r_grid, rprime_grid, and ratio_grid = A(r)/A0(r'(r)). For any
    nonspherical shell r' <= r and ratio <= 1, strictly for r > 0.
    """
    norm = profile.normalized()
    d = thickness_from_volume(norm)
    r_grid = np.linspace(0.0, d, nr + 1)
    cum = np.array([_cumulative_area(norm, r) for r in r_grid])
    # sphere cumulative area (4 pi / 3)(1 - (1 - r')^3) inverts in closed form
    arg = 1.0 - 3.0 * cum / FOUR_PI
    rprime = 1.0 - np.cbrt(arg)
    ratio = _area_vec(norm, r_grid) / _area_vec(ShellProfile(), rprime)
    s = profile.scale
    return {"r_grid": r_grid * s, "rprime_grid": rprime * s, "ratio_grid": ratio}


def sphere_profile(area: float = FOUR_PI, volume: float = 1.0) -> ShellProfile:
    """The comparison sphere of a given area and shell volume."""
    return ShellProfile(area=area, total_mean_curvature=2 * math.sqrt(FOUR_PI * area),
                        volume=volume)


def sweep_total_mean_curvature(m0_values, area: float = FOUR_PI,
                               volume: float = 0.8, nr: int = 2048):
    """Reduced lambda1 across total mean curvatures at fixed area and volume.

    Yields dicts with the sweep value, the thickness, the reduced eigenvalue,
    the sphere comparison value, and the largest interior comparison ratio.
    """
    sphere = sphere_profile(area, volume)
    lam_sphere = reduced_ground_state(sphere, nr)
    for m0 in m0_values:
        shell = ShellProfile(area=area, total_mean_curvature=m0, volume=volume)
        change = variable_change(shell, nr=min(nr, 1024))
        yield {
            "M0": m0,
            "d": thickness_from_volume(shell),
            "lambda1": reduced_ground_state(shell, nr),
            "lambda1_sphere": lam_sphere,
            "ratio_max": float(change["ratio_grid"][1:].max()),
        }
