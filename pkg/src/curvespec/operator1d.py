"""The periodic operator -d^2/ds^2 + g kappa^2 on a unit-length curve.

Discretization: second-order central differences with periodic wrap plus a
diagonal potential, giving a symmetric circulant-plus-diagonal matrix. The
lowest eigenvalue of the constant-curvature circle is 4 pi^2 g exactly (the
difference operator has an exact zero mode), which anchors every tolerance
in the test suite.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from . import curves, grid
from .errors import DegeneracyWarning, NumericalError, ParameterError

#: relative spectral gap below which Hellmann-Feynman output is flagged
DEGENERACY_RTOL = 1e-8

#: dense solves up to here, shifted inverse iteration (ARPACK) beyond
DENSE_LIMIT = 2048


@dataclass(frozen=True)
class OperatorSpec:
    """A unit-length curvature profile together with the coupling g."""

    profile: curves.CurvatureProfile
    g: float

    def __post_init__(self):
        if abs(self.profile.length - 1.0) > 1e-12:
            raise ParameterError(
                f"operator profiles must have length 1 (got {self.profile.length}); "
                "rescale explicitly with curves.rescale")


@dataclass(frozen=True)
class SpectrumResult:
    """Lowest eigenvalues and the positive, L2-normalized ground state."""

    eigenvalues: tuple
    ground_state: np.ndarray
    n: int
    g: float

    def __post_init__(self):
        ev = tuple(float(v) for v in self.eigenvalues)
        if any(b < a - 1e-9 for a, b in zip(ev, ev[1:])):
            raise NumericalError(f"eigenvalues not ascending: {ev}")
        psi = np.asarray(self.ground_state, dtype=float)
        norm = grid.integrate(psi**2, 1.0)
        if abs(norm - 1.0) > 1e-12:
            raise NumericalError(f"ground state norm {norm} is not 1")
        psi = psi.copy()
        psi.flags.writeable = False
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "ground_state", psi)

    @property
    def lambda1(self) -> float:
        return self.eigenvalues[0]


def _potential(spec: OperatorSpec, n: int) -> np.ndarray:
    kappa = curves.resample(spec.profile, n).samples
    return spec.g * kappa**2


def _dense_matrix(v: np.ndarray) -> np.ndarray:
    n = v.size
    h2 = float(n) ** 2  # 1/ds^2
    a = np.diag(2 * h2 + v)
    off = -h2 * np.ones(n - 1)
    a += np.diag(off, 1) + np.diag(off, -1)
    a[0, -1] = a[-1, 0] = -h2
    return a

def _sparse_matrix(v: np.ndarray) -> scipy.sparse.csc_matrix:
    n = v.size
    h2 = float(n) ** 2
    main = 2 * h2 + v
    off = -h2 * np.ones(n - 1)
    a = scipy.sparse.diags([off, main, off], [-1, 0, 1], format="lil")
    a[0, n - 1] = a[n - 1, 0] = -h2
    return a.tocsc()


def ground_state(spec: OperatorSpec, n: int = 1024, k: int = 1,
                 method: str = "auto") -> SpectrumResult:
    """k lowest eigenvalues and the ground state on an n-point grid.

    method: 'dense' (full symmetric solve), 'shift_invert' (ARPACK with the
    shift below the spectrum), or 'auto' (dense up to N = 2048).
    """
    if n < 64:
        raise ParameterError(f"need n >= 64, got {n}")
    if not 1 <= k < n:
        raise ParameterError(f"need 1 <= k < n, got k = {k}")
    v = _potential(spec, n)
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "shift_invert"
    try:
        if method == "dense":
            vals, vecs = scipy.linalg.eigh(_dense_matrix(v), subset_by_index=[0, k - 1])
        elif method == "shift_invert":
            sigma = float(v.min()) - 1.0
            vals, vecs = scipy.sparse.linalg.eigsh(
                _sparse_matrix(v), k=k, sigma=sigma, which="LM",
                v0=np.ones(n) / np.sqrt(n))
            order = np.argsort(vals)
            vals, vecs = vals[order], vecs[:, order]
        else:
            raise ParameterError(f"unknown eigensolver method {method!r}")
    except (scipy.linalg.LinAlgError,
            scipy.sparse.linalg.ArpackError) as exc:  # pragma: no cover
        raise NumericalError(f"eigensolve failed at n={n}, g={spec.g}: {exc}") from exc

    psi = vecs[:, 0] * np.sqrt(n)  # unit vector -> unit midpoint L2 norm
    if psi[np.argmax(np.abs(psi))] < 0:
        psi = -psi
    if psi.min() <= -1e-10 * psi.max():
        raise NumericalError(
            f"computed ground state changes sign (min {psi.min():.3e}); "
            "the solver did not return the lowest mode")
    psi = np.abs(psi)  # scrub rounding noise in deep-barrier regions
    return SpectrumResult(eigenvalues=tuple(vals), ground_state=psi, n=n, g=spec.g)


def rayleigh_quotient(spec: OperatorSpec, zeta: np.ndarray) -> float:
    """(int zeta'^2 + g kappa^2 zeta^2) / int zeta^2, centered differences and
    midpoint quadrature on the profile's own grid."""
    zeta = np.asarray(zeta, dtype=float)
    if zeta.shape != (spec.profile.n,):
        raise ParameterError(
            f"test function has {zeta.size} samples, profile has {spec.profile.n}")
    den = grid.integrate(zeta**2, 1.0)
    if not den > 1e-150:
        raise ParameterError("test function has zero norm")
    dz = grid.periodic_gradient(zeta, 1.0)
    num = grid.integrate(dz**2 + spec.g * spec.profile.samples**2 * zeta**2, 1.0)
    return num / den


def _check_gap(result: SpectrumResult):
    if len(result.eigenvalues) >= 2:
        gap = result.eigenvalues[1] - result.eigenvalues[0]
        if gap < DEGENERACY_RTOL * max(1.0, abs(result.eigenvalues[0])):
            warnings.warn(
                f"spectral gap {gap:.3e} is too small for a reliable "
                "eigenvalue derivative", DegeneracyWarning, stacklevel=3)


def hf_gradient_g(spec: OperatorSpec, result: SpectrumResult) -> float:
    """d(lambda1)/dg = int kappa^2 psi^2 ds (exact for the discrete problem)."""
    _check_gap(result)
    kappa = curves.resample(spec.profile, result.n).samples
    return grid.integrate(kappa**2 * result.ground_state**2, 1.0)


def hf_gradient_kappa(spec: OperatorSpec, result: SpectrumResult) -> np.ndarray:
    """First variation of lambda1 in kappa: the grid function 2 g kappa psi^2.

    Pair it with a perturbation through the midpoint inner product
    sum(grad * dkappa) / n.
    """
    _check_gap(result)
    kappa = curves.resample(spec.profile, result.n).samples
    return 2 * spec.g * kappa * result.ground_state**2


def spectrum_to_dict(result: SpectrumResult) -> dict:
    return {
        "g": result.g,
        "N": result.n,
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "ground_state": [float(x) for x in result.ground_state],
    }


def ground_state_rows(result: SpectrumResult):
    """(s, psi) pairs on the midpoint grid, for CSV export."""
    s = grid.midpoints(1.0, result.n)
    for i in range(result.n):
        yield (s[i], result.ground_state[i])
