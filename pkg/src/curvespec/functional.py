"""The reduced functional E(zeta) = int zeta'^2 ds + 4 pi^2 g / int zeta^-2 ds.

Minimizing E over positive, L2-normalized periodic densities gives the same
value as minimizing the fundamental eigenvalue of the curvature operator over
the relaxed curve class; `recover_kappa` maps a density back to the curvature
that realizes the equality case.

The derivative term of E is discretized with the forward-difference Dirichlet
form (the quadratic form of the periodic three-point Laplacian). A centered
first difference would annihilate the sawtooth mode and leave the discrete
functional unbounded below; centered differences are still used in the
stationarity residuals, which diagnose rather than drive the descent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import curves, grid
from .errors import NumericalError, ParameterError

FOUR_PI_SQ = 4 * math.pi**2

_ARMIJO_C = 1e-4
_SHRINK = 0.5


@dataclass(frozen=True)
class DensityProfile:
    """Strictly positive grid function on the unit-length periodic midpoint grid.

    Normalization (int zeta^2 ds = 1) is the admissible-class convention and
    is enforced by the operations that rely on it, not at construction: the
    explicit Euler-equation solutions are generically *not* 1-periodic, hence
    not normalized over [0, 1), and still need to be representable.
    """

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 16:
            raise ParameterError(f"need a 1-d density with N >= 16, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)) or samples.min() <= 0:
            raise ParameterError("density samples must be finite and strictly positive")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def norm_sq(self) -> float:
        return grid.integrate(self.samples**2, 1.0)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) <= 1e-12

    @classmethod
    def normalized(cls, samples) -> "DensityProfile":
        samples = np.asarray(samples, dtype=float)
        return cls(samples / math.sqrt(grid.integrate(samples**2, 1.0)))


@dataclass(frozen=True)
class EulerData:
    """Multipliers of the Euler equation -zeta'' + M / zeta^3 = C zeta and the
    first-integral constant; at a converged minimizer C = lambda* and
    Cprime = 2 lambda*."""

    M: float
    C: float
    Cprime: float


@dataclass(frozen=True)
class EulerReport:
    residual_norm: float
    M: float
    C: float


@dataclass(frozen=True)
class Lemma5Report:
    E: float
    bound: float
    satisfied: bool | None
    applicable: bool


@dataclass(frozen=True)
class MinimizationReport:
    minimizer: DensityProfile
    energy: float
    euler_residual: float
    iterations: int
    converged: bool
    trace: tuple  # (iteration, energy, gradient_norm) rows


def evaluate_E(zeta: DensityProfile, g: float) -> float:
    """Midpoint-quadrature value of the two terms of E."""
    kinetic = grid.forward_difference_energy(zeta.samples, 1.0)
    inv_sq = grid.integrate(zeta.samples**-2, 1.0)
    return kinetic + FOUR_PI_SQ * g / inv_sq


def _descent_quantities(u: np.ndarray, g: float):
    """Energy, density, and the gradient field of E in the log parametrization."""
    n = u.size
    ds = 1.0 / n
    w = np.exp(u - u.max())
    zeta = w / np.sqrt(np.sum(w**2) * ds)
    diff = np.roll(zeta, -1) - zeta
    q = np.sum(zeta**-2) * ds
    energy = np.sum(diff**2) / ds + FOUR_PI_SQ * g / q
    m = FOUR_PI_SQ * g / q**2
    # dE/dzeta_i = 2 ds (K zeta + M zeta^-3)_i with K the periodic -d2/ds2
    g_zeta = 2 * ds * (-(np.roll(zeta, -1) - 2 * zeta + np.roll(zeta, 1)) / ds**2
                       + m * zeta**-3)
    s = np.sum(g_zeta * zeta)
    grad_u = zeta * g_zeta - zeta**2 * ds * s
    return energy, zeta, grad_u / ds  # gradient as a grid function


def _energy_of(u: np.ndarray, g: float) -> float:
    n = u.size
    ds = 1.0 / n
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        w = np.exp(u - u.max())
        zeta = w / np.sqrt(np.sum(w**2) * ds)
        diff = np.roll(zeta, -1) - zeta
        return np.sum(diff**2) / ds + FOUR_PI_SQ * g / (np.sum(zeta**-2) * ds)


def minimize_E(g: float, init: DensityProfile, tol: float = 1e-7,
               max_iter: int = 200_000) -> MinimizationReport:
    """Gradient descent on E in the parametrization zeta = exp(u)/||exp(u)||.

    Positivity and normalization hold by construction, so the descent is
    unconstrained in u. Backtracking line search with the Armijo condition,
    initial step 1.0, shrink factor 0.5. Stops when the L2 norm of the
    gradient field drops below tol; hitting max_iter first is reported with
    converged=False, not raised.
    """
    if not g > 0:
        raise ParameterError(f"need g > 0, got {g}")
    u = np.log(init.samples)
    ds = 1.0 / init.n
    trace = []
    energy, zeta, grad = _descent_quantities(u, g)
    gnorm = math.sqrt(np.sum(grad**2) * ds)
    iterations = 0
    converged = gnorm <= tol
    while not converged and iterations < max_iter:
        step = 1.0
        slope = np.sum(grad**2) * ds  # -directional derivative along -grad
        accepted = False
        saw_finite = False
        while step > 1e-20:
            trial_u = u - step * grad
            trial_energy = _energy_of(trial_u, g)
            # wild trial steps overflow the parametrization; shrink past them
            if math.isfinite(trial_energy):
                saw_finite = True
                if trial_energy <= energy - _ARMIJO_C * step * slope:
                    accepted = True
                    break
            step *= _SHRINK
        if not accepted:
            if not saw_finite:
                raise NumericalError(
                    "line search found no finite energy in any backtracked step")
            break  # gradient is at the numerical floor
        u = trial_u
        iterations += 1
        energy, zeta, grad = _descent_quantities(u, g)
        gnorm = math.sqrt(np.sum(grad**2) * ds)
        trace.append((iterations, float(energy), float(gnorm)))
        converged = gnorm <= tol

    minimizer = DensityProfile.normalized(zeta)
    report = euler_residual(minimizer, g)
    return MinimizationReport(
        minimizer=minimizer,
        energy=evaluate_E(minimizer, g),
        euler_residual=report.residual_norm,
        iterations=iterations,
        converged=converged,
        trace=tuple(trace),
    )


def lemma5_check(zeta: DensityProfile, g: float) -> Lemma5Report:
    """Pointwise lower bound on a normalized density with E(zeta) <= pi^2:
    min zeta > 1 - sqrt(E)/pi. Above pi^2 the hypothesis fails and the report
    is marked not applicable."""
    if abs(zeta.norm_sq - 1.0) > 1e-9:
        raise ParameterError("lemma applies to L2-normalized densities only")
    value = evaluate_E(zeta, g)
    bound = 1.0 - math.sqrt(value) / math.pi
    if value > math.pi**2:
        return Lemma5Report(E=value, bound=bound, satisfied=None, applicable=False)
    return Lemma5Report(E=value, bound=bound,
                        satisfied=bool(zeta.samples.min() > bound), applicable=True)


def recover_kappa(zeta: DensityProfile) -> curves.CurvatureProfile:
    """The curvature realizing equality in the Cauchy-Schwarz step:
    kappa = (2 pi / int zeta^-2 ds) * zeta^-2. Winding is 2 pi by construction."""
    inv_sq = zeta.samples**-2
    samples = 2 * math.pi * inv_sq / grid.integrate(inv_sq, 1.0)
    return curves.CurvatureProfile(samples, 1.0)


def euler_residual(zeta: DensityProfile, g: float) -> EulerReport:
    """L2 norm of -zeta'' + M zeta^-3 - C zeta with periodic central
    differences; C is the Galerkin projection making the residual orthogonal
    to zeta (it equals lambda* only at a true minimizer)."""
    q = grid.integrate(zeta.samples**-2, 1.0)
    m = FOUR_PI_SQ * g / q**2
    lhs = -grid.periodic_second_difference(zeta.samples, 1.0) + m * zeta.samples**-3
    c = grid.integrate(lhs * zeta.samples, 1.0) / zeta.norm_sq
    residual = lhs - c * zeta.samples
    return EulerReport(residual_norm=math.sqrt(grid.integrate(residual**2, 1.0)),
                       M=m, C=c)


def euler_data(zeta: DensityProfile, g: float) -> EulerData:
    """Multipliers (M, C) plus the first-integral constant
    C' = int zeta'^2 + M int zeta^-2 + C int zeta^2."""
    report = euler_residual(zeta, g)
    dz = grid.periodic_gradient(zeta.samples, 1.0)
    cprime = (grid.integrate(dz**2, 1.0)
              + report.M * grid.integrate(zeta.samples**-2, 1.0)
              + report.C * zeta.norm_sq)
    return EulerData(M=report.M, C=report.C, Cprime=cprime)


def explicit_solution(m: float, lam: float, s0: float, n: int) -> DensityProfile:
    """The one-parameter solution family of the Euler equation:
    zeta^2 = 1 + sqrt(1 - M/lambda) cos(2 sqrt(lambda) (s - s0)).

    No periodicity is imposed; the family is 1-periodic only when
    sqrt(lambda) is a multiple of pi, which is the point of it.
    """
    if not (0 < m <= lam):
        raise ParameterError(f"need 0 < M <= lambda, got M = {m}, lambda = {lam}")
    s = grid.midpoints(1.0, n)
    amp = math.sqrt(1.0 - m / lam)
    sq = 1.0 + amp * np.cos(2 * math.sqrt(lam) * (s - s0))
    return DensityProfile(np.sqrt(sq))


def first_integral_residual(zeta: DensityProfile, m: float, lam: float) -> float:
    """Sup-norm of zeta^2 zeta'^2 - (lambda - M - lambda (zeta^2 - 1)^2).

    Derivatives are centered differences without periodic wrap (second-order
    one-sided at the two end nodes), so profiles that are smooth on [0, 1]
    but not 1-periodic are differenced correctly.
    """
    ds = 1.0 / zeta.n
    dz = np.gradient(zeta.samples, ds, edge_order=2)
    lhs = zeta.samples**2 * dz**2
    rhs = lam - m - lam * (zeta.samples**2 - 1.0) ** 2
    return float(np.max(np.abs(lhs - rhs)))


def random_density(n: int, rng: np.random.Generator, amplitude: float = 0.25,
                   modes: int = 4) -> DensityProfile:
    """Normalized positive density exp(u)/||exp u|| with random low-mode u;
    the stock random start for descent experiments."""
    s = grid.midpoints(1.0, n)
    u = np.zeros(n)
    for k in range(1, modes + 1):
        u += rng.normal(0, amplitude / k) * np.cos(2 * np.pi * k * s)
        u += rng.normal(0, amplitude / k) * np.sin(2 * np.pi * k * s)
    return DensityProfile.normalized(np.exp(u))


def report_to_dict(report: MinimizationReport) -> dict:
    return {
        "energy": report.energy,
        "euler_residual": report.euler_residual,
        "iterations": report.iterations,
        "converged": report.converged,
        "minimizer": [float(x) for x in report.minimizer.samples],
    }
