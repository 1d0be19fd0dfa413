"""Tests for the vertical-spectrum solver.

The matrix-element oracle here is independent of the package: closed-form
m = 1, 2 wavefunctions integrated by adaptive quadrature, plus published
hydrogenic expectation values (<z>_m = 3 m^2 r_B / 2 for these states).
"""
import numpy as np
import pytest
from scipy import integrate

from helioq import units
from helioq.hydrogenic import (
    ConvergenceError,
    HydrogenicBasisSpec,
    rydberg_scales,
    solve,
    stark_rate,
)

LAM = units.image_strength(1.057)


@pytest.fixture(scope="module")
def basis():
    return HydrogenicBasisSpec(lam=LAM)


@pytest.fixture(scope="module")
def zero_field(basis):
    return solve(basis, 0.0)


# closed-form ground and first-excited wavefunctions (x in Bohr radii)
def _u1(x):
    return 2.0 * x * np.exp(-x)


def _u2(x):
    return x * (1.0 - 0.5 * x) * np.exp(-0.5 * x) / np.sqrt(2.0)


def test_rydberg_scales_match_quoted_values():
    r, r_b = rydberg_scales(LAM)
    assert r == pytest.approx(7.577203088557404, rel=1e-12)
    assert r * units.K_TO_GHZ == pytest.approx(157.883, rel=1e-4)
    assert r_b * 1e8 == pytest.approx(76.387194, rel=1e-6)   # angstrom


def test_rydberg_scaling_laws():
    r1, b1 = rydberg_scales(LAM)
    r2, b2 = rydberg_scales(2 * LAM)
    assert r2 == pytest.approx(4 * r1, rel=1e-12)
    assert b2 == pytest.approx(b1 / 2, rel=1e-12)


def test_zero_field_levels_are_hydrogenic(zero_field):
    r = zero_field.rydberg_K
    for m in range(1, zero_field.size - 5 + 1):
        assert zero_field.energies[m - 1] == pytest.approx(-r / m**2, rel=1e-6)


def test_transition_frequency(zero_field):
    # nu_12 = (3/4) R / h
    assert zero_field.transition_GHz(2) == pytest.approx(118.412471, rel=1e-6)
    assert zero_field.transition_GHz(2) == pytest.approx(120.0, rel=0.05)


def test_diagonal_elements_against_oracle(zero_field):
    r_b = zero_field.bohr_cm
    z11, _ = integrate.quad(lambda x: _u1(x) * x * _u1(x), 0, 60)
    z22, _ = integrate.quad(lambda x: _u2(x) * x * _u2(x), 0, 120)
    assert zero_field.z_elements[0, 0] == pytest.approx(z11 * r_b, rel=1e-10)
    assert zero_field.z_elements[1, 1] == pytest.approx(z22 * r_b, rel=1e-10)
    # and the closed forms: 1.5 r_B ~ 11.4 nm, 6 r_B ~ 45.6 nm
    assert zero_field.z_elements[0, 0] == pytest.approx(1.5 * r_b, rel=1e-10)
    assert zero_field.z_elements[1, 1] == pytest.approx(6.0 * r_b, rel=1e-10)
    assert zero_field.z_elements[0, 0] * 1e7 == pytest.approx(11.458, abs=2e-2)
    assert zero_field.z_elements[1, 1] * 1e7 == pytest.approx(45.832, abs=2e-2)


def test_offdiagonal_element_against_oracle(zero_field):
    val, _ = integrate.quad(lambda x: _u1(x) * x * _u2(x), 0, 80)
    assert abs(val) == pytest.approx(0.5587016542708524, rel=1e-10)  # 32 sqrt(2)/81
    assert abs(zero_field.z_elements[0, 1]) == pytest.approx(
        abs(val) * zero_field.bohr_cm, rel=1e-10
    )


def test_wavefunctions_normalized(basis, zero_field):
    # adaptive-quadrature oracle on the sampled wavefunctions' analytic form
    for m, u, hi in ((1, _u1, 60), (2, _u2, 120)):
        norm, _ = integrate.quad(lambda x: u(x) ** 2, 0, hi)
        assert norm == pytest.approx(1.0, abs=1e-10)
    # solver-grid samples agree with the closed forms pointwise
    r_b = zero_field.bohr_cm
    x = zero_field.grid / r_b
    mask = x < 50
    expect = _u1(x[mask]) / np.sqrt(r_b)
    assert np.allclose(zero_field.psi[0, mask], expect, rtol=0, atol=1e-6 * expect.max())
    # basis orthonormality through the solver's quadrature, all states
    from helioq.hydrogenic import _moment_matrix

    gram = _moment_matrix(basis.size, 0, basis.quad_order)
    assert np.abs(gram - np.eye(basis.size)).max() < 1e-8


def test_z_matrix_symmetric(zero_field):
    z = zero_field.z_elements
    assert np.abs(z - z.T).max() <= 1e-10 * np.abs(z).max()


def test_stark_rates_match_quoted_values(basis):
    r1 = stark_rate(basis, 1)
    r2 = stark_rate(basis, 2)
    assert r1 == pytest.approx(0.27705512, rel=1e-6)
    assert r2 == pytest.approx(1.10822049, rel=1e-6)
    # the pair responds at ~1 GHz per V/cm
    assert r2 - r1 == pytest.approx(0.83116537, rel=1e-6)
    # first-order identity: rate_m = e <m|z|m> / h
    sol = solve(basis, 0.0)
    for m, rate in ((1, r1), (2, r2)):
        expect = units.EVCM_K * sol.z_elements[m - 1, m - 1] * units.K_TO_GHZ
        assert rate == pytest.approx(expect, rel=1e-6)


def test_hellmann_feynman_at_operating_field(basis):
    # dE_m/dE_perp from finite differences equals e <m|z|m> on the
    # Stark-perturbed states
    e0, delta = 10.0, 0.25
    sol = solve(basis, e0)
    for m in (1, 2):
        up = solve(basis, e0 + delta).energies[m - 1]
        dn = solve(basis, e0 - delta).energies[m - 1]
        fd = (up - dn) / (2 * delta)
        expect = units.EVCM_K * sol.z_elements[m - 1, m - 1]
        assert fd == pytest.approx(expect, rel=1e-4)


def test_stark_shift_linearity(basis):
    base = solve(basis, 0.0)
    for m in (1, 2):
        s1 = solve(basis, 1.0).energies[m - 1] - base.energies[m - 1]
        s2 = solve(basis, 2.0).energies[m - 1] - base.energies[m - 1]
        assert s2 == pytest.approx(2 * s1, rel=1e-2)


def test_transition_monotone_in_field(basis):
    fields = np.linspace(0.0, 100.0, 21)
    nus = [solve(basis, f).transition_GHz(2) for f in fields]
    assert np.all(np.diff(nus) > 0)


def test_sum_rule_quantifies_truncation():
    """The bound-state dipole sum approaches its converged value by M = 20.

    The full closure sum <1|z^2|1> = 3 r_B^2 is NOT reached by bound
    states alone: adaptive-quadrature summation converges to 0.89119 of
    it as M grows, the remainder being continuum weight.  What truncation
    must deliver is stability of the bound sum.
    """
    small = solve(HydrogenicBasisSpec(lam=LAM, size=20), 0.0)
    r_b = small.bohr_cm
    bound_sum = float(np.sum((small.z_elements[0, :] / r_b) ** 2))
    # frozen oracle: sum_{n<=20} |<1|z|n>|^2 from independent quadrature
    assert bound_sum == pytest.approx(2.672354865841365, rel=1e-6)
    # truncation is converged: 5 more states move the sum by < 1e-3 of total
    big = solve(HydrogenicBasisSpec(lam=LAM, size=25), 0.0)
    big_sum = float(np.sum((big.z_elements[0, :] / r_b) ** 2))
    assert abs(big_sum - bound_sum) < 1e-3 * 3.0
    # and the continuum deficit is the known ~10.9%
    assert bound_sum / 3.0 == pytest.approx(0.89078, abs=5e-4)


def test_solve_rejects_overwhelming_field(basis):
    with pytest.raises(ConvergenceError):
        solve(basis, 1e5)


def test_small_basis_rejected():
    with pytest.raises(ValueError):
        HydrogenicBasisSpec(lam=LAM, size=2)


def test_grid_validation():
    with pytest.raises(ValueError):
        HydrogenicBasisSpec(lam=LAM, grid=np.array([0.0, 1e-6]))
    with pytest.raises(ValueError):
        HydrogenicBasisSpec(lam=LAM, grid=np.array([1e-6, 1e-6]))
