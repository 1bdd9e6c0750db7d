"""Minimize the fundamental eigenvalue over curvature space at fixed length.

The search space is a truncated Fourier parametrization of kappa with the
mean mode frozen at 2 pi, so the winding integral is preserved to machine
precision along the whole run. Descent uses the eigenvalue shape gradient
(the grid function 2 g kappa psi^2) projected onto the active modes, with
a backtracking Armijo line search. Optionally the closed-curve constraint is
re-imposed after every trial point; by default the run stays in the relaxed
class, where the variational identities live.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import curves, operator1d
from .errors import ParameterError

FOUR_PI_SQ = 4 * math.pi**2


@dataclass(frozen=True)
class OptimizationConfig:
    g: float
    n_modes: int = 8
    max_iter: int = 200
    # matched to the eigensolver noise floor at the default grid; tightening
    # it further only buys line-search churn on zero-size steps
    grad_tol: float = 1e-5
    step_init: float = 1.0
    shrink: float = 0.5
    armijo_c: float = 1e-4
    seed: int = 0
    enforce_closure: bool = False
    closure_tol: float = 1e-9
    n_grid: int = 512
    restarts: int = 10
    lambda_tol: float = 1e-2  # absolute slack for calling the circle optimal
    eig_method: str = "shift_invert"

    def __post_init__(self):
        if self.n_modes < 1:
            raise ParameterError(f"need n_modes >= 1, got {self.n_modes}")
        if self.restarts < 1:
            raise ParameterError(f"need restarts >= 1, got {self.restarts}")


@dataclass(frozen=True)
class OptimizationTrace:
    steps: tuple              # accepted steps: (iteration, lambda1, gradient_norm, step)
    best_profile: curves.CurvatureProfile
    best_lambda1: float
    converged: bool
    seed: int
    diagnostic: str = ""


def _coeff_pairs(c: np.ndarray):
    m = c.size // 2
    return list(zip(c[:m], c[m:]))


class _Objective:
    """lambda1 and its coefficient gradient for a fixed config."""

    def __init__(self, config: OptimizationConfig):
        self.config = config
        n, length = config.n_grid, 1.0
        s = (np.arange(n) + 0.5) / n
        rows = [np.cos(2 * np.pi * k * s) for k in range(1, config.n_modes + 1)]
        rows += [np.sin(2 * np.pi * k * s) for k in range(1, config.n_modes + 1)]
        self.basis = np.stack(rows)  # (2 n_modes, n)

    def profile(self, c: np.ndarray) -> curves.CurvatureProfile:
        prof = curves.make_fourier_profile(_coeff_pairs(c), 1.0, self.config.n_grid)
        if self.config.enforce_closure:
            prof = curves.closure_project(prof, tol=self.config.closure_tol)
        return prof

    def coords(self, profile: curves.CurvatureProfile) -> np.ndarray:
        return curves.fourier_coefficients(profile, self.config.n_modes)

    def lambda1(self, c: np.ndarray) -> float:
        spec = operator1d.OperatorSpec(self.profile(c), self.config.g)
        result = operator1d.ground_state(spec, self.config.n_grid, k=1,
                                         method=self.config.eig_method)
        return result.lambda1

    def lambda1_and_gradient(self, c: np.ndarray):
        spec = operator1d.OperatorSpec(self.profile(c), self.config.g)
        result = operator1d.ground_state(spec, self.config.n_grid, k=2,
                                         method=self.config.eig_method)
        lam1, lam2 = result.eigenvalues[0], result.eigenvalues[1]
        if lam2 - lam1 < operator1d.DEGENERACY_RTOL * max(1.0, abs(lam1)):
            return lam1, None  # gradient unreliable
        field_grad = operator1d.hf_gradient_kappa(spec, result)
        grad_c = self.basis @ field_grad / self.config.n_grid  # midpoint pairing
        return lam1, grad_c


def minimize_lambda1(config: OptimizationConfig,
                     init: curves.CurvatureProfile) -> OptimizationTrace:
    """Projected gradient descent on the Fourier coefficients of kappa.

    The mean mode stays frozen, accepted steps strictly decrease lambda1 (by
    at least the Armijo margin), and a near-degenerate ground state truncates
    the run with a diagnostic instead of trusting the gradient.
    """
    if not init.winding_ok:
        raise ParameterError(
            f"init winding integral {init.winding:.6f} is not 2 pi within tolerance")
    if abs(init.length - 1.0) > 1e-12:
        raise ParameterError("optimizer works at unit length; rescale first")
    obj = _Objective(config)
    c = obj.coords(init)
    lam, grad = obj.lambda1_and_gradient(c)
    steps = []
    diagnostic = ""
    converged = False
    for iteration in range(1, config.max_iter + 1):
        if grad is None:
            diagnostic = "spectral gap collapsed; trace truncated"
            break
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= config.grad_tol:
            converged = True
            break
        step = config.step_init
        accepted = False
        while step > 1e-14:
            trial = c - step * grad
            lam_trial = obj.lambda1(trial)
            if lam_trial <= lam - config.armijo_c * step * gnorm**2:
                accepted = True
                break
            step *= config.shrink
        if not accepted:
            diagnostic = "line search exhausted"
            break
        c = trial
        lam, grad = obj.lambda1_and_gradient(c)
        steps.append((iteration, float(lam), gnorm, step))
    else:
        diagnostic = "iteration budget exhausted"
    return OptimizationTrace(
        steps=tuple(steps),
        best_profile=obj.profile(c),
        best_lambda1=float(lam),
        converged=converged,
        seed=config.seed,
        diagnostic=diagnostic,
    )


def random_profile(config: OptimizationConfig, rng: np.random.Generator,
                   amplitude: float = 0.8) -> curves.CurvatureProfile:
    """Random Fourier profile in the search space, modes damped like 1/k."""
    ks = np.arange(1, config.n_modes + 1, dtype=float)
    coeffs = np.concatenate([rng.normal(0.0, amplitude / ks),
                             rng.normal(0.0, amplitude / ks)])
    return curves.make_fourier_profile(_coeff_pairs(coeffs), 1.0, config.n_grid)


@dataclass(frozen=True)
class ScanResult:
    rows: tuple       # one dict per (g, seed)
    per_g: tuple      # one dict per g, aggregated over seeds
    best_profiles: tuple  # best CurvatureProfile per g, aligned with per_g
    g_star: float | None  # smallest g where the circle stopped being optimal


def critical_g_scan(g_values, config: OptimizationConfig) -> ScanResult:
    """Multistart minimization across couplings.

    For each g the best found lambda1 is compared with the circle value
    4 pi^2 g; the circle is called optimal when the gap is within
    config.lambda_tol. The reported flip point is empirical evidence, not a
    proof, and no monotonicity in g is assumed.
    """
    rows = []
    per_g = []
    best_profiles = []
    g_star = None
    for gi, g in enumerate(sorted(float(g) for g in g_values)):
        if not (0 < g <= 2):
            raise ParameterError(f"scan couplings must lie in (0, 2], got {g}")
        run_config = _with_g(config, g)
        circle = FOUR_PI_SQ * g
        best = math.inf
        best_profile = None
        for si in range(config.restarts):
            rng = np.random.default_rng((config.seed, gi, si))
            try:
                trace = minimize_lambda1(run_config,
                                         random_profile(run_config, rng))
                lam = trace.best_lambda1
            except NumericalError:
                # a run that broke down (e.g. closure projection stalled on a
                # degenerating iterate) is reported per-entry, never fatal
                lam = math.nan
                trace = None
            gap = circle - lam
            rows.append({
                "g": g,
                "seed": si,
                "best_lambda1": lam,
                "circle_value": circle,
                "gap": gap,
                "circle_optimal": bool(gap <= config.lambda_tol),
            })
            if trace is not None and lam < best:
                best = lam
                best_profile = trace.best_profile
        if best_profile is None:
            best_profile = curves.make_circle(1.0, config.n_grid)
            best = math.nan
        optimal = not (circle - best > config.lambda_tol)  # NaN counts as no evidence
        per_g.append({"g": g, "best_lambda1": best, "circle_value": circle,
                      "gap": circle - best, "circle_optimal": optimal})
        best_profiles.append(best_profile)
        if not optimal and g_star is None:
            g_star = g
    return ScanResult(rows=tuple(rows), per_g=tuple(per_g),
                      best_profiles=tuple(best_profiles), g_star=g_star)


def _with_g(config: OptimizationConfig, g: float) -> OptimizationConfig:
    return replace(config, g=g)
