"""Tests for the mode-wise extension solver.

Three independent routes to the same numbers are played against each other:
the closed U-function stack, the Frobenius series (exact rationals where
possible), and blind ODE integration.
"""

from fractions import Fraction

import numpy as np
import pytest

from crext.extend import (
    FourthOrderMode,
    ModeSolution,
    eval_boundary_ops,
    exclusion_residuals,
    extract_dtn,
    fit_boundary_expansion,
    frobenius_series,
    verify_dtn_theorem,
    verify_fourth_constants,
)
from crext.scatter import raw_recursion
from crext.spectral import GammaParam, ModeIndex, mode_eigenvalue


def _series_eval(coeffs, rho):
    rho = np.asarray(rho, dtype=float)
    acc = np.zeros_like(rho)
    for j in reversed(range(len(coeffs))):
        acc = acc * rho**2 + float(coeffs[j])
    return acc


@pytest.mark.parametrize("order", [0.25, 0.6, 1.35, 1.8])
@pytest.mark.parametrize("mode", [ModeIndex(0.5, 0, 1), ModeIndex(2.0, 3, 2)])
def test_closed_solution_matches_its_own_boundary_expansion(order, mode):
    sol = ModeSolution(order, mode)
    coeff_a, coeff_b = frobenius_series(order, sol.nu, sol.lam**2)
    rho = np.array([0.05, 0.15, 0.3])
    series = _series_eval(coeff_a, rho) + sol.c1 * rho ** (2 * order) * _series_eval(
        coeff_b, rho
    )
    np.testing.assert_allclose(sol.value(rho), series, rtol=1e-10)


@pytest.mark.parametrize("order", [0.4, 0.75, 1.25, 1.6])
def test_regular_companion_matches_frobenius_branch(order):
    mode = ModeIndex(1.0, 1, 2)
    sol = ModeSolution(order, mode)
    coeff_a, _ = frobenius_series(order, sol.nu, sol.lam**2)
    rho = np.array([0.1, 0.25, 0.4])
    np.testing.assert_allclose(
        sol.regular_value(rho), _series_eval(coeff_a, rho), rtol=1e-11
    )


@pytest.mark.parametrize("order", [0.3, 0.8, 1.45])
def test_closed_solution_satisfies_the_mode_equation(order):
    mode = ModeIndex(1.5, 2, 1)
    sol = ModeSolution(order, mode)
    rho = np.geomspace(0.2, 3.0, 7)
    u, up, upp = sol.derivatives(rho, upto=2)
    res = upp + (1.0 - 2.0 * order) / rho * up - (sol.lam**2 * rho**2 + sol.nu) * u
    scale = np.abs(upp) + np.abs(up / rho) + np.abs((sol.lam**2 * rho**2 + sol.nu) * u)
    assert float(np.max(np.abs(res) / scale)) < 1e-11


def test_frobenius_matches_two_symbol_recursion_exactly():
    # With L1 -> -nu/2, L2 -> -lam^2 and the spectral parameter chosen so the
    # denominators line up, the recursion terms are 2^j times the regular
    # Frobenius coefficients; the reflected parameter gives the other branch.
    order = Fraction(1, 3)
    nu = Fraction(7, 2)
    lam_sq = Fraction(9, 4)
    for m in (2, 3):
        s_reg = Fraction(m + order, 2)
        s_sing = Fraction(m - order, 2)
        coeff_a, coeff_b = frobenius_series(order, nu, lam_sq, nterms=9)
        reg = raw_recursion(8, m, s_reg)
        sing = raw_recursion(8, m, s_sing)
        for ell in range(9):
            val_reg = sum(
                c * (-nu / 2) ** i * (-lam_sq) ** j for (i, j), c in reg[ell].items()
            )
            val_sing = sum(
                c * (-nu / 2) ** i * (-lam_sq) ** j for (i, j), c in sing[ell].items()
            )
            assert val_reg == 2**ell * coeff_a[ell]
            assert val_sing == 2**ell * coeff_b[ell]


def test_frobenius_rejects_integer_order():
    with pytest.raises(ValueError):
        frobenius_series(1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        frobenius_series(Fraction(2), 2, 1)


@pytest.mark.parametrize(
    "order,mode",
    [
        (0.25, ModeIndex(0.5, 0, 1)),
        (0.6, ModeIndex(2.0, 4, 2)),
        (0.75, ModeIndex(4.0, 8, 3)),
        (1.25, ModeIndex(1.0, 1, 1)),
        (1.75, ModeIndex(0.25, 2, 3)),
    ],
)
def test_numeric_integration_recovers_closed_dtn(order, mode):
    closed = ModeSolution(order, mode).dtn
    numeric = extract_dtn(order, mode)
    assert numeric == pytest.approx(closed, rel=1e-9)


def test_numeric_fit_is_tight():
    fit = fit_boundary_expansion(0.6, ModeIndex(0.5, 1, 1))
    assert fit.fit_residual < 1e-9
    assert fit.c0 == pytest.approx(1.0, rel=0.1)  # normalization drift stays mild


@pytest.mark.parametrize("g", [0.25, 0.5, 0.75])
def test_dtn_identity_closed_form(g):
    param = GammaParam(g)
    for mode in (ModeIndex(0.25, 0, 1), ModeIndex(1.0, 5, 2), ModeIndex(4.0, 8, 3)):
        assert verify_dtn_theorem(param, mode, "closed") < 1e-12


def test_dtn_identity_numeric_spot():
    assert verify_dtn_theorem(GammaParam(0.5), ModeIndex(1.0, 1, 2), "numeric") < 1e-8


def test_dtn_verifier_guards():
    with pytest.raises(ValueError):
        verify_dtn_theorem(GammaParam(1.5), ModeIndex(1.0, 0, 1))
    with pytest.raises(ValueError):
        verify_dtn_theorem(GammaParam(0.5), ModeIndex(1.0, 0, 1), method="guess")
    with pytest.raises(ValueError):
        verify_fourth_constants(GammaParam(0.5), ModeIndex(1.0, 0, 1))
    with pytest.raises(ValueError):
        FourthOrderMode(GammaParam(0.5), ModeIndex(1.0, 0, 1))


def test_boundary_data_roundtrip():
    param = GammaParam(1.4)
    mode = ModeIndex(1.0, 2, 2)
    u = FourthOrderMode(param, mode, phi=0.8, psi=-1.7)
    ops = eval_boundary_ops(u)
    assert ops["dirichlet"] == pytest.approx(0.8, rel=1e-14)
    assert ops["fractional"] == pytest.approx(-1.7, rel=1e-14)


@pytest.mark.parametrize("g", [1.25, 1.5, 1.75])
def test_neumann_functionals_ignore_the_other_datum(g):
    param = GammaParam(g)
    for mode in (ModeIndex(0.5, 0, 1), ModeIndex(2.0, 4, 3)):
        res_conormal, res_second = exclusion_residuals(param, mode)
        assert res_conormal < 1e-12
        assert res_second < 1e-12


@pytest.mark.parametrize("g", [1.25, 1.5, 1.75])
def test_fourth_constants_closed_form(g):
    param = GammaParam(g)
    for mode in (ModeIndex(0.25, 0, 1), ModeIndex(1.0, 3, 2), ModeIndex(4.0, 8, 3)):
        err_phi, err_psi = verify_fourth_constants(param, mode, "closed")
        assert err_phi < 1e-12
        assert err_psi < 1e-12


def test_fourth_constants_numeric_spot():
    err_phi, err_psi = verify_fourth_constants(
        GammaParam(1.5), ModeIndex(1.0, 1, 1), "numeric"
    )
    assert err_phi < 1e-8
    assert err_psi < 1e-8


def test_fourth_order_operator_identity():
    # The shortcut Lop u = 2 rho^-1 (A W1' + B rho^(2 alpha) W2') must agree
    # with the honest second-derivative evaluation.
    param = GammaParam(1.35)
    mode = ModeIndex(1.5, 1, 2)
    u = FourthOrderMode(param, mode, phi=1.0, psi=0.6)
    rho = np.geomspace(0.3, 2.0, 6)
    al = param.alpha
    nu = mode_eigenvalue(mode)
    d0, d1, d2 = u.derivatives(rho, upto=2)
    honest = d2 + (1.0 - 2.0 * al) / rho * d1 - (u.lam**2 * rho**2 + nu) * d0
    np.testing.assert_allclose(u.lop(rho), honest, rtol=1e-8, atol=1e-12)


def test_fourth_order_equation_residual():
    # (Lop^2 - 4 lam^2) u = 0 through four honest derivatives.
    param = GammaParam(1.6)
    mode = ModeIndex(1.0, 1, 1)
    u = FourthOrderMode(param, mode, phi=1.0, psi=0.7)
    rho = np.geomspace(0.4, 1.8, 5)
    al = param.alpha
    nu = mode_eigenvalue(mode)
    lam2 = u.lam**2
    d0, d1, d2, d3, d4 = u.derivatives(rho, upto=4)
    pot = lam2 * rho**2 + nu
    v0 = d2 + (1.0 - 2.0 * al) / rho * d1 - pot * d0
    v1 = d3 + (1.0 - 2.0 * al) * (d2 / rho - d1 / rho**2) - pot * d1 - 2.0 * lam2 * rho * d0
    v2 = (
        d4
        + (1.0 - 2.0 * al) * (d3 / rho - 2.0 * d2 / rho**2 + 2.0 * d1 / rho**3)
        - pot * d2
        - 4.0 * lam2 * rho * d1
        - 2.0 * lam2 * d0
    )
    res = v2 + (1.0 - 2.0 * al) / rho * v1 - pot * v0 - 4.0 * lam2 * d0
    scale = (
        np.abs(v2)
        + np.abs((1.0 - 2.0 * al) / rho * v1)
        + np.abs(pot * v0)
        + np.abs(4.0 * lam2 * d0)
        + np.abs(d4)
    )
    assert float(np.max(np.abs(res) / scale)) < 1e-5


def test_derivative_ladder_depth_guard():
    sol = ModeSolution(0.5, ModeIndex(1.0, 0, 1))
    with pytest.raises(ValueError):
        sol.derivatives(np.array([1.0]), upto=5)
