import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from curvespec import functional, grid, operator1d
from curvespec.errors import ParameterError
from helpers import random_admissible_density

FOUR_PI_SQ = 4 * math.pi**2

# independent quadrature oracle, scripts/pin_oracles.py (N = 2^16 midpoint
# rule on the analytic integrand; agrees with the closed form to 16 digits)
E_ORACLE_HALF_COSINE = 8.160138773760142


def constant_density(n=128):
    return functional.DensityProfile.normalized(np.ones(n))


def test_density_profile_validation():
    with pytest.raises(ParameterError):
        functional.DensityProfile(np.zeros(64))
    with pytest.raises(ParameterError):
        functional.DensityProfile(np.full(64, -1.0))
    z = functional.DensityProfile.normalized(np.full(64, 3.0))
    assert z.is_normalized


def test_energy_of_constant_density():
    assert functional.evaluate_E(constant_density(), 0.7) == pytest.approx(
        FOUR_PI_SQ * 0.7, rel=1e-14)


def test_energy_at_zero_coupling_is_kinetic_only():
    rng = np.random.default_rng(0)
    z = functional.random_density(128, rng)
    kinetic = grid.forward_difference_energy(z.samples, 1.0)
    assert functional.evaluate_E(z, 0.0) == pytest.approx(kinetic, rel=1e-14)


def test_energy_matches_pinned_quadrature_oracle():
    s = grid.midpoints(1.0, 4096)
    z = functional.DensityProfile(np.sqrt(1 + 0.5 * np.cos(2 * np.pi * s)))
    assert z.is_normalized
    value = functional.evaluate_E(z, 0.2)
    assert value == pytest.approx(E_ORACLE_HALF_COSINE, abs=5e-7)


@given(st.integers(min_value=-200, max_value=200))
def test_energy_invariant_under_cyclic_shift(shift):
    rng = np.random.default_rng(11)
    z = functional.random_density(128, rng)
    rolled = functional.DensityProfile(np.roll(z.samples, shift))
    assert functional.evaluate_E(rolled, 0.3) == functional.evaluate_E(z, 0.3)


def test_minimize_returns_to_constant():
    rng = np.random.default_rng(1)
    init = functional.random_density(64, rng, amplitude=0.3)
    report = functional.minimize_E(0.2, init, tol=2.5e-7)
    assert report.converged
    assert report.energy == pytest.approx(FOUR_PI_SQ * 0.2, abs=1e-6)
    assert np.abs(report.minimizer.samples - 1.0).max() < 1e-3
    assert report.energy <= functional.evaluate_E(init, 0.2)


def test_minimize_monotone_energy_trace():
    rng = np.random.default_rng(2)
    init = functional.random_density(64, rng, amplitude=0.3)
    report = functional.minimize_E(0.2, init, tol=1e-5, max_iter=50_000)
    energies = [row[1] for row in report.trace]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


def test_minimize_at_quarter_coupling_from_constant():
    report = functional.minimize_E(0.25, constant_density(64), tol=1e-8)
    assert report.iterations == 0
    assert report.converged
    assert report.energy == pytest.approx(math.pi**2, rel=1e-13)
    assert np.allclose(report.minimizer.samples, 1.0)


def test_minimize_descends_from_explicit_solution():
    # a nonconstant Euler-equation solution is not 1-periodic below pi^2, so
    # the descent leaves it and lands on the constant
    init = functional.DensityProfile.normalized(
        functional.explicit_solution(4.0, 8.0, 0.0, 64).samples)
    report = functional.minimize_E(0.2, init, tol=1e-6, max_iter=100_000)
    assert report.energy == pytest.approx(FOUR_PI_SQ * 0.2, abs=1e-5)
    assert np.abs(report.minimizer.samples - 1.0).max() < 1e-2


def test_minimize_requires_positive_coupling():
    with pytest.raises(ParameterError):
        functional.minimize_E(0.0, constant_density())


@pytest.mark.parametrize("g", [0.1, 0.22])
def test_minimize_lands_on_constant_across_subcritical_range(g):
    for i in range(2):
        rng = np.random.default_rng((round(100 * g), i))
        init = functional.random_density(48, rng, amplitude=0.25)
        report = functional.minimize_E(g, init, tol=1e-4, max_iter=150_000)
        assert report.energy == pytest.approx(FOUR_PI_SQ * g, abs=1e-3)
        assert np.abs(report.minimizer.samples - 1.0).max() < 2e-2


def test_report_to_dict_schema():
    report = functional.minimize_E(0.2, constant_density(64), tol=1e-8)
    data = functional.report_to_dict(report)
    assert set(data) == {"energy", "euler_residual", "iterations", "converged",
                         "minimizer"}
    assert len(data["minimizer"]) == 64


def test_lemma5_constant_case_arithmetic():
    report = functional.lemma5_check(constant_density(), 0.1)
    assert report.applicable
    assert report.E == pytest.approx(FOUR_PI_SQ * 0.1, rel=1e-12)
    assert report.bound == pytest.approx(1 - math.sqrt(FOUR_PI_SQ * 0.1) / math.pi,
                                         rel=1e-12)
    assert report.bound == pytest.approx(0.36754, abs=1e-5)
    assert report.satisfied


def test_lemma5_boundary_case():
    # constant density at g = 1/4: E = pi^2 exactly, bound collapses to zero
    report = functional.lemma5_check(constant_density(), 0.25)
    assert report.applicable
    assert report.bound == pytest.approx(0.0, abs=1e-12)
    assert report.satisfied


def test_lemma5_not_applicable_above_pi_squared():
    report = functional.lemma5_check(constant_density(), 0.3)
    assert not report.applicable
    assert report.satisfied is None


def test_lemma5_rejects_unnormalized_density():
    z = functional.DensityProfile(np.full(64, 2.0))
    with pytest.raises(ParameterError):
        functional.lemma5_check(z, 0.1)


def test_lemma5_randomized_sample():
    rng = np.random.default_rng(99)
    for _ in range(200):
        zeta, g = random_admissible_density(rng)
        report = functional.lemma5_check(zeta, g)
        assert report.applicable and report.satisfied


def test_recover_kappa_constant_density_gives_circle():
    kappa = functional.recover_kappa(constant_density())
    assert np.allclose(kappa.samples, 2 * math.pi, rtol=1e-14)


@given(st.integers(min_value=0, max_value=10_000))
def test_recover_kappa_winding_always_two_pi(seed):
    z = functional.random_density(128, np.random.default_rng(seed))
    kappa = functional.recover_kappa(z)
    assert abs(kappa.winding - 2 * math.pi) < 1e-12


def test_recover_kappa_equality_case_matches_energy():
    # Rayleigh quotient of the recovered curvature at the generating density
    # reproduces E(zeta): the equality case of the coupling inequality
    rng = np.random.default_rng(3)
    z = functional.random_density(512, rng, amplitude=0.2)
    g = 0.3
    kappa = functional.recover_kappa(z)
    spec = operator1d.OperatorSpec(kappa, g)
    # the potential terms agree exactly under the shared midpoint quadrature
    pot = grid.integrate(g * kappa.samples**2 * z.samples**2, 1.0)
    second = FOUR_PI_SQ * g / grid.integrate(z.samples**-2, 1.0)
    assert pot == pytest.approx(second, rel=1e-13)
    # totals differ only by the centered-vs-forward derivative quadrature
    rq = operator1d.rayleigh_quotient(spec, z.samples)
    assert rq == pytest.approx(functional.evaluate_E(z, g), rel=1e-3)


def test_euler_residual_zero_for_constant():
    report = functional.euler_residual(constant_density(), 0.4)
    assert report.residual_norm == pytest.approx(0.0, abs=1e-10)
    assert report.M == pytest.approx(FOUR_PI_SQ * 0.4, rel=1e-12)
    assert report.C == pytest.approx(FOUR_PI_SQ * 0.4, rel=1e-12)


def test_euler_residual_small_on_converged_minimizer():
    rng = np.random.default_rng(4)
    init = functional.random_density(64, rng, amplitude=0.3)
    report = functional.minimize_E(0.2, init, tol=2.5e-7)
    assert report.euler_residual <= 1e-6


def test_euler_residual_positive_off_stationary():
    s = grid.midpoints(1.0, 128)
    z = functional.DensityProfile.normalized(1.0 + 0.3 * np.cos(2 * np.pi * s))
    assert functional.euler_residual(z, 0.2).residual_norm > 1e-2


def test_euler_data_constants_at_minimizer():
    rng = np.random.default_rng(5)
    report = functional.minimize_E(0.2, functional.random_density(64, rng),
                                   tol=2.5e-7)
    data = functional.euler_data(report.minimizer, 0.2)
    assert data.C == pytest.approx(report.energy, abs=1e-7)
    assert data.Cprime == pytest.approx(2 * report.energy, abs=1e-6)
    assert data.M == pytest.approx(report.energy, abs=1e-6)  # constant minimizer


def test_explicit_solution_constant_at_threshold():
    z = functional.explicit_solution(5.0, 5.0, 0.0, 64)
    assert np.allclose(z.samples, 1.0)


def test_explicit_solution_period_and_extremes_at_pi_squared():
    lam = math.pi**2
    z = functional.explicit_solution(lam / 2, lam, 0.0, 4096)
    # exactly 1-periodic at the threshold, hence normalized over [0, 1)
    assert z.norm_sq == pytest.approx(1.0, abs=1e-12)
    assert z.samples.min() == pytest.approx(math.sqrt(1 - math.sqrt(0.5)), abs=1e-6)
    assert z.samples.max() == pytest.approx(math.sqrt(1 + math.sqrt(0.5)), abs=1e-6)


def test_explicit_solution_shift_is_cyclic_rotation():
    n = 256
    z0 = functional.explicit_solution(3.0, math.pi**2, 0.0, n)
    shifted = functional.explicit_solution(3.0, math.pi**2, 10 / n, n)
    assert np.allclose(shifted.samples, np.roll(z0.samples, 10), atol=1e-12)


def test_explicit_solution_rejects_bad_multiplier():
    with pytest.raises(ParameterError):
        functional.explicit_solution(5.0, 4.0, 0.0, 64)
    with pytest.raises(ParameterError):
        functional.explicit_solution(0.0, 4.0, 0.0, 64)


def test_first_integral_zero_for_constant_at_threshold():
    z = functional.explicit_solution(5.0, 5.0, 0.0, 64)
    assert functional.first_integral_residual(z, 5.0, 5.0) == 0.0


def test_first_integral_constant_off_threshold():
    z = functional.explicit_solution(5.0, 5.0, 0.0, 64)  # zeta = 1
    assert functional.first_integral_residual(z, 3.0, 5.0) == pytest.approx(2.0,
                                                                            abs=1e-12)


def test_first_integral_explicit_family():
    rng = np.random.default_rng(314)
    for _ in range(10):
        lam = float(rng.uniform(1.2, 3.4))
        m = float(rng.uniform(0.45, 0.9)) * lam
        z = functional.explicit_solution(m, lam, float(rng.uniform(0, 1)), 4096)
        assert functional.first_integral_residual(z, m, lam) <= 1e-6
