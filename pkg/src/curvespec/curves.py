"""Closed plane curves represented by their curvature.

A curve of length L is stored as curvature samples on the uniform periodic
midpoint grid over [0, L). The winding integral of an admissible profile is
2 pi; admissibility is tracked with a stored tolerance rather than enforced,
because the relaxed class (integral constraint only, curve not necessarily
closed) is a first-class citizen here. `closure_project` restores the closed
curve when one is wanted.

Two length conventions coexist in the package (L = 1 for the one-dimensional
operator, L = 2 pi for annuli); `rescale` converts explicitly, nothing
rescales behind your back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import grid
from .errors import ConvergenceError, ParameterError

TWO_PI = 2 * math.pi

#: interpolation used when a profile is moved between grids
KIND_SMOOTH = "smooth"
KIND_PIECEWISE = "piecewise"


@dataclass(frozen=True)
class CurvatureProfile:
    """Curvature kappa sampled at s_i = (i + 1/2) L / N, periodic on [0, L)."""

    samples: np.ndarray
    length: float
    winding_tol: float = 1e-8
    kind: str = KIND_SMOOTH

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 16:
            raise ParameterError(f"need a 1-d profile with N >= 16, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("curvature samples must be finite")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ParameterError(f"length must be positive, got {self.length}")
        if self.kind not in (KIND_SMOOTH, KIND_PIECEWISE):
            raise ParameterError(f"unknown profile kind {self.kind!r}")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def nodes(self) -> np.ndarray:
        return grid.midpoints(self.length, self.n)

    @property
    def winding(self) -> float:
        """Midpoint integral of kappa over one period."""
        return grid.integrate(self.samples, self.length)

    @property
    def winding_ok(self) -> bool:
        return abs(self.winding - TWO_PI) <= self.winding_tol


@dataclass(frozen=True)
class PlanarCurve:
    """Tangent angle and positions recovered from a curvature profile.

    theta has N+1 entries on the cell boundaries j * L / N (theta[0] = 0 by
    convention); positions has N+1 rows starting at the origin.
    """

    theta: np.ndarray
    positions: np.ndarray
    length: float


@dataclass(frozen=True)
class ClosureReport:
    winding: float
    gap: float
    closed: bool


def make_circle(length: float, n: int) -> CurvatureProfile:
    """Constant profile kappa = 2 pi / L; the winding integral is exactly 2 pi."""
    if not (isinstance(n, (int, np.integer)) and n >= 16):
        raise ParameterError(f"n must be an integer >= 16, got {n}")
    if not (length > 0):
        raise ParameterError(f"length must be positive, got {length}")
    return CurvatureProfile(np.full(n, TWO_PI / length), float(length))


def make_stadium(eps: float, n: int) -> CurvatureProfile:
    """Two tight arcs of curvature pi/eps joining two straight segments.

    The curve has length 1; the arcs occupy (1/2 - eps, 1/2) and (1 - eps, 1).
    The discontinuity is realized at the nearest grid nodes and the arc value
    is rescaled so the discrete winding integral is exactly 2 pi (an L^2-small
    change that moves eigenvalues by correspondingly small amounts).
    """
    if not (0 < eps < 0.5):
        raise ParameterError(f"eps must lie in (0, 1/2), got {eps}")
    if not (isinstance(n, (int, np.integer)) and n >= 16):
        raise ParameterError(f"n must be an integer >= 16, got {n}")
    s = grid.midpoints(1.0, n)
    on_arc = ((s > 0.5 - eps) & (s < 0.5)) | ((s > 1.0 - eps) & (s < 1.0))
    if on_arc.sum() < 4:
        raise ParameterError(f"n = {n} cannot resolve arcs of width eps = {eps}")
    samples = np.where(on_arc, math.pi / eps, 0.0)
    samples *= TWO_PI / grid.integrate(samples, 1.0)
    return CurvatureProfile(samples, 1.0, kind=KIND_PIECEWISE)


def make_fourier_profile(coeffs, length: float, n: int) -> CurvatureProfile:
    """kappa = 2 pi / L + sum_k (a_k cos(2 pi k s / L) + b_k sin(2 pi k s / L)).

    coeffs is a sequence of (a_k, b_k) pairs for k = 1, 2, ...; the mean mode
    is pinned so the winding integral is 2 pi to machine precision (the basis
    functions have exactly zero midpoint sums).
    """
    coeffs = [(float(a), float(b)) for a, b in coeffs]
    if not (length > 0):
        raise ParameterError(f"length must be positive, got {length}")
    if not (isinstance(n, (int, np.integer)) and n >= max(16, 4 * len(coeffs))):
        raise ParameterError(f"need n >= max(16, 4 * n_modes) = {max(16, 4 * len(coeffs))}, got {n}")
    s = grid.midpoints(length, n)
    samples = np.full(n, TWO_PI / length)
    for k, (a, b) in enumerate(coeffs, start=1):
        arg = TWO_PI * k * s / length
        samples = samples + a * np.cos(arg) + b * np.sin(arg)
    return CurvatureProfile(samples, float(length))


def fourier_coefficients(profile: CurvatureProfile, n_modes: int) -> np.ndarray:
    """Leading (a_k, b_k) of kappa - 2 pi / L, flattened as [a1..an, b1..bn]."""
    s = profile.nodes
    dev = profile.samples - TWO_PI / profile.length
    ds = profile.length / profile.n
    out = np.empty(2 * n_modes)
    for k in range(1, n_modes + 1):
        arg = TWO_PI * k * s / profile.length
        out[k - 1] = 2 / profile.length * np.sum(dev * np.cos(arg)) * ds
        out[n_modes + k - 1] = 2 / profile.length * np.sum(dev * np.sin(arg)) * ds
    return out


def rescale(profile: CurvatureProfile, new_length: float) -> CurvatureProfile:
    """Similarity rescaling: s -> s * (L'/L), kappa -> kappa * (L/L').

    Winding is preserved; grid size is unchanged.
    """
    if not (new_length > 0):
        raise ParameterError(f"length must be positive, got {new_length}")
    factor = profile.length / new_length
    return replace(profile, samples=profile.samples * factor, length=float(new_length))


def resample(profile: CurvatureProfile, n: int, method: str | None = None) -> CurvatureProfile:
    """Move a profile to an N-point grid.

    Smooth profiles use trigonometric interpolation (preserves the integrals
    of kappa and kappa^2 for band-limited data); piecewise profiles are
    sampled from their piecewise-constant extension and rescaled so the
    winding integral is preserved exactly.
    """
    if n == profile.n:
        return profile
    if not (isinstance(n, (int, np.integer)) and n >= 16):
        raise ParameterError(f"n must be an integer >= 16, got {n}")
    method = method or ("nearest" if profile.kind == KIND_PIECEWISE else "trig")
    if method == "trig":
        samples = grid.resample_trig(profile.samples, n)
    elif method == "nearest":
        samples = grid.resample_nearest(profile.samples, n)
        old = profile.winding
        new = grid.integrate(samples, profile.length)
        if abs(new) > 1e-12:
            samples = samples * (old / new)
    else:
        raise ParameterError(f"unknown resampling method {method!r}")
    return replace(profile, samples=samples)


def mollify(profile: CurvatureProfile, width: float) -> CurvatureProfile:
    """Periodic Gaussian smoothing of kappa with standard deviation `width`.

    The k-th Fourier mode is damped by exp(-(2 pi k width / L)^2 / 2); the
    mean mode is untouched, so the winding integral is preserved.
    """
    if width <= 0:
        return profile
    n, length = profile.n, profile.length
    spec = np.fft.rfft(profile.samples)
    k = np.arange(spec.size)
    spec *= np.exp(-0.5 * (TWO_PI * k * width / length) ** 2)
    return replace(profile, samples=np.fft.irfft(spec, n), kind=KIND_SMOOTH)


def _theta_midpoints(samples: np.ndarray, length: float):
    """Tangent angle at cell boundaries and at cell midpoints."""
    ds = length / samples.size
    theta = np.concatenate(([0.0], np.cumsum(samples) * ds))
    theta_mid = theta[:-1] + samples * (ds / 2)
    return theta, theta_mid


def reconstruct(profile: CurvatureProfile) -> PlanarCurve:
    """Integrate kappa -> theta -> positions with the midpoint rule.

    Exact for the circle up to rounding; O(N^-2) otherwise.
    """
    ds = profile.length / profile.n
    theta, theta_mid = _theta_midpoints(profile.samples, profile.length)
    steps = np.column_stack((np.cos(theta_mid), np.sin(theta_mid))) * ds
    positions = np.vstack((np.zeros(2), np.cumsum(steps, axis=0)))
    return PlanarCurve(theta=theta, positions=positions, length=profile.length)


def closure_report(curve: PlanarCurve, tol: float = 1e-6) -> ClosureReport:
    """Winding number and endpoint gap of a reconstructed curve."""
    winding = float(curve.theta[-1] - curve.theta[0]) / TWO_PI
    gap = float(np.hypot(*(curve.positions[-1] - curve.positions[0])))
    closed = gap <= tol and abs(winding - 1.0) <= tol
    return ClosureReport(winding=winding, gap=gap, closed=closed)


def _closure_functionals(samples: np.ndarray, length: float) -> np.ndarray:
    """(integral of cos theta, integral of sin theta); the endpoint gap is the
    Euclidean norm of this vector under the same midpoint scheme reconstruct
    uses."""
    ds = length / samples.size
    _, theta_mid = _theta_midpoints(samples, length)
    return np.array([np.sum(np.cos(theta_mid)) * ds, np.sum(np.sin(theta_mid)) * ds])


def closure_project(profile: CurvatureProfile, tol: float = 1e-10,
                    max_iter: int = 60) -> CurvatureProfile:
    """Adjust the k = 1, 2 Fourier modes of kappa until the curve closes.

    Newton iteration on the two closure functionals int cos theta ds = 0 and
    int sin theta ds = 0, taking the minimum-norm step in the four mode
    amplitudes (they are zero-mean, so the winding integral never moves).
    Raises ConvergenceError with the last gap if the budget runs out.
    """
    if not profile.winding_ok:
        raise ParameterError(
            f"winding integral {profile.winding:.6f} is not 2 pi within {profile.winding_tol}")
    length, n = profile.length, profile.n
    s = profile.nodes
    basis = np.stack([
        np.cos(TWO_PI * s / length), np.sin(TWO_PI * s / length),
        np.cos(2 * TWO_PI * s / length), np.sin(2 * TWO_PI * s / length),
    ])
    ds = length / n
    # d(theta_mid_j)/d(coeff_p), a (4, N) array
    dtheta = (np.cumsum(basis, axis=1) - basis / 2) * ds

    samples = np.array(profile.samples)
    f = _closure_functionals(samples, length)
    gap = float(np.hypot(*f))
    for _ in range(max_iter):
        if gap <= tol:
            return replace(profile, samples=samples)
        _, theta_mid = _theta_midpoints(samples, length)
        jac = np.empty((2, 4))
        jac[0] = (dtheta * (-np.sin(theta_mid))).sum(axis=1) * ds
        jac[1] = (dtheta * np.cos(theta_mid)).sum(axis=1) * ds
        step = np.linalg.lstsq(jac, -f, rcond=None)[0]
        # damped update: halve until the gap does not increase
        scale = 1.0
        for _ in range(30):
            trial = samples + scale * (step @ basis)
            f_trial = _closure_functionals(trial, length)
            if np.hypot(*f_trial) < gap or scale < 1e-6:
                break
            scale *= 0.5
        samples, f = trial, f_trial
        gap = float(np.hypot(*f))
    if gap <= tol:
        return replace(profile, samples=samples)
    raise ConvergenceError(f"closure projection stalled at gap {gap:.3e}", last_value=gap)


# ---------------------------------------------------------------------------
# serialization: {length, N, samples[]} as two-line-header text and as JSON

def profile_to_text(profile: CurvatureProfile) -> str:
    lines = [f"length {profile.length!r}", f"N {profile.n}"]
    lines.extend(repr(float(x)) for x in profile.samples)
    return "\n".join(lines) + "\n"


def profile_from_text(text: str) -> CurvatureProfile:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        length = float(lines[0].split()[1])
        n = int(lines[1].split()[1])
        samples = np.array([float(ln) for ln in lines[2:2 + n]])
    except (IndexError, ValueError) as exc:
        raise ParameterError(f"malformed profile text: {exc}") from exc
    if samples.size != n:
        raise ParameterError(f"header says N = {n} but found {samples.size} samples")
    return CurvatureProfile(samples, length)


def profile_to_dict(profile: CurvatureProfile) -> dict:
    return {"length": profile.length, "N": profile.n,
            "samples": [float(x) for x in profile.samples]}


def profile_from_dict(data: dict) -> CurvatureProfile:
    try:
        samples = np.asarray(data["samples"], dtype=float)
        length = float(data["length"])
        n = int(data["N"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed profile record: {exc}") from exc
    if samples.size != n:
        raise ParameterError(f"record says N = {n} but has {samples.size} samples")
    return CurvatureProfile(samples, length)
