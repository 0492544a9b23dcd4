import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from _support import MODELS, random_states
from esno.ecflux import (
    ec2_flux,
    ec4_flux,
    ec6_flux,
    ec_coefficients,
    ec_interface_fluxes,
    entropy_flux_2p,
    entropy_flux_q2,
    logmean,
)
from esno.errors import NonPhysicalStateError, ParameterError
from esno.models import entropy_flux, entropy_potential, entropy_variables, physical_flux

ADV, BURGERS, E1, E2 = (MODELS[k] for k in ("advection", "burgers", "euler1d", "euler2d"))


def burgers_pair(a, b):
    return (a * a + a * b + b * b) / 6.0


def brute_force_ec(values, alpha, pair):
    """Order-2p flux at the centre interface of 2p scalar values, summed pair by pair."""
    p = len(alpha)
    i = p - 1
    return sum(alpha[k - 1] * pair(values[i - l], values[i - l + k]) for k in range(1, p + 1) for l in range(k))


def test_coefficients():
    assert ec_coefficients(1).alpha == (1.0,)
    assert ec_coefficients(2).exact == (sp.Rational(4, 3), sp.Rational(-1, 6))
    assert ec_coefficients(3).exact == (sp.Rational(3, 2), sp.Rational(-3, 10), sp.Rational(1, 30))
    for p in (1, 2, 3):
        assert sum(k * a for k, a in enumerate(ec_coefficients(p).exact, 1)) == 1
    with pytest.raises(ParameterError):
        ec_coefficients(4)


def test_two_point_examples():
    assert ec2_flux(BURGERS, [1.0], [2.0])[0] == pytest.approx(7 / 6, rel=1e-15)
    assert ec2_flux(ADV, [0.0], [2.0])[0] == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(NonPhysicalStateError):
        ec2_flux(E1, [1.0, 0.0, -1.0], [1.0, 0.0, 2.5])


def test_high_order_examples():
    col = lambda *v: np.array(v, dtype=float)[:, None]  # noqa: E731
    assert ec4_flux(ADV, col(0, 1, 2, 3))[0] == pytest.approx(1.5, rel=1e-15)
    assert ec4_flux(BURGERS, col(1, 1, 2, 2))[0] == pytest.approx(7 / 6, rel=1e-15)
    assert ec6_flux(ADV, col(-1, 0, 1, 2, 3, 4))[0] == pytest.approx(1.5, rel=1e-15)
    vals = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0]
    oracle = brute_force_ec(vals, (1.5, -0.3, 1 / 30), burgers_pair)
    assert ec6_flux(BURGERS, col(*vals))[0] == pytest.approx(oracle, rel=1e-14)
    with pytest.raises(ParameterError):
        ec6_flux(ADV, col(0, 1, 2, 3))


@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6))
def test_burgers_ec6_matches_brute_force(vals):
    got = ec6_flux(BURGERS, np.array(vals)[:, None])[0]
    assert got == pytest.approx(brute_force_ec(vals, (1.5, -0.3, 1 / 30), burgers_pair), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("mid", list(MODELS))
def test_consistency_on_constant_states(mid, rng):
    model = MODELS[mid]
    for c in random_states(model, 20, rng):
        for ax in range(model.ndim):
            f = physical_flux(model, c, ax)
            tol = 1e-13 * np.maximum(1.0, np.abs(f))
            assert np.all(np.abs(ec2_flux(model, c, c, ax) - f) <= tol)
            assert np.all(np.abs(ec4_flux(model, np.tile(c, (4, 1)), ax) - f) <= tol)
            assert np.all(np.abs(ec6_flux(model, np.tile(c, (6, 1)), ax) - f) <= tol)
            q = entropy_flux(model, c, ax)
            assert entropy_flux_q2(model, c, c, ax) == pytest.approx(q, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("mid", list(MODELS))
def test_entropy_conservation_identity(mid, rng):
    model = MODELS[mid]
    uL, uR = random_states(model, 10_000, rng), random_states(model, 10_000, rng)
    dv = entropy_variables(model, uR) - entropy_variables(model, uL)
    for ax in range(model.ndim):
        dpsi = entropy_potential(model, uR, ax) - entropy_potential(model, uL, ax)
        lhs = np.sum(dv * ec2_flux(model, uL, uR, ax), axis=-1)
        assert np.all(np.abs(lhs - dpsi) <= 1e-11 * (1 + np.abs(dpsi)))


@pytest.mark.parametrize("mid", list(MODELS))
def test_two_point_flux_is_symmetric(mid, rng):
    model = MODELS[mid]
    uL, uR = random_states(model, 500, rng), random_states(model, 500, rng)
    for ax in range(model.ndim):
        np.testing.assert_allclose(ec2_flux(model, uL, uR, ax), ec2_flux(model, uR, uL, ax), rtol=1e-13, atol=1e-14)


def test_nearly_equal_states_stay_consistent():
    u = np.array([1.0, 0.3, 2.5])
    for d in (1e-3, 1e-6, 1e-9, 1e-12):
        F = ec2_flux(E1, u, u * (1 + d))
        f = physical_flux(E1, u)
        assert np.all(np.abs(F - f) <= 10 * d * np.maximum(1.0, np.abs(f)) + 1e-14)


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (0.3, 0.30003), (5.0, 5.0 + 1e-9), (1e-3, 7.0), (2.0, 2.0)])
def test_logmean_against_high_precision(a, b):
    if a == b:
        assert logmean(a, b) == a
        return
    A, B = sp.Float(a, 50), sp.Float(b, 50)
    exact = float(sp.N((A - B) / (sp.log(A) - sp.log(B)), 40))
    assert float(logmean(a, b)) == pytest.approx(exact, rel=2e-15)


def test_entropy_flux_examples():
    assert entropy_flux_q2(BURGERS, [1.0], [2.0]) == pytest.approx(1.0, rel=1e-15)
    assert entropy_flux_q2(ADV, [0.0], [2.0]) == pytest.approx(0.0, abs=1e-15)
    assert entropy_flux_2p(BURGERS, [[1.0], [2.0]], 1) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ParameterError):
        entropy_flux_2p(BURGERS, [[1.0], [2.0]], 4)


def test_order_2p_cell_entropy_identity(rng):
    """v_i (F_{i+1/2} - F_{i-1/2}) = q_{i+1/2} - q_{i-1/2} for every EC order on random periodic data."""
    for model in (BURGERS, E1):
        n, g = 30, 3
        u = random_states(model, n, rng)
        up = np.concatenate([u[-g:], u, u[:g]])
        v = entropy_variables(model, u)
        for order in (2, 4, 6):
            F, q = ec_interface_fluxes(model, up, order, g - 1, g + n, with_entropy=True)
            lhs = np.sum(v * (F[1:] - F[:-1]), axis=-1)
            assert np.max(np.abs(lhs - (q[1:] - q[:-1]))) <= 1e-11 * (1 + np.max(np.abs(q)))


@pytest.mark.parametrize("order", [2, 4, 6])
def test_flux_difference_order(order):
    """EC-2p flux difference approximates f(u)_x at order 2p on smooth periodic data."""
    errs = []
    for n in (20, 40, 80):
        h = 2.0 / n
        x = -1 + h * (np.arange(n) + 0.5)
        u = (1.0 + 0.5 * np.sin(np.pi * x))[:, None]
        g = 3
        up = np.concatenate([u[-g:], u, u[:g]])
        F = ec_interface_fluxes(BURGERS, up, order, g - 1, g + n)
        D = (F[1:, 0] - F[:-1, 0]) / h
        errs.append(np.max(np.abs(D - u[:, 0] * 0.5 * np.pi * np.cos(np.pi * x))))
    assert np.log2(errs[-2] / errs[-1]) >= order - 0.2


def test_interface_flux_needs_ghosts():
    with pytest.raises(ParameterError):
        ec_interface_fluxes(BURGERS, np.ones((8, 1)), 6, 0, 7)
    with pytest.raises(ParameterError):
        ec_interface_fluxes(BURGERS, np.ones((8, 1)), 8, 3, 4)
