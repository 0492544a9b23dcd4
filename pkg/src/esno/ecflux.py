"""Entropy-conservative interface fluxes and their numerical entropy fluxes.

The order-2p flux is a linear combination of two-point fluxes over wider
pairs, ``sum_k a_k sum_{l=0}^{k-1} F*(u_{i-l}, u_{i-l+k})``, and the matching
entropy flux is the same combination of two-point entropy fluxes.
"""

from __future__ import annotations

from functools import cache
from typing import NamedTuple

import numpy as np
import sympy as sp

from .errors import ParameterError
from .models import SystemModel, check_physical, entropy_potential, entropy_variables

EC_ORDERS = (2, 4, 6)

# |a/b - 1| below which the logarithmic mean switches to its series
LOGMEAN_SWITCH = 1e-4


class EcCoefficients(NamedTuple):
    p: int
    alpha: tuple[float, ...]
    exact: tuple


@cache
def ec_coefficients(p: int) -> EcCoefficients:
    """Solve ``sum k a_k = 1`` and ``sum k^(2j-1) a_k = 0`` for ``j = 2..p``."""
    if p not in (1, 2, 3):
        raise ParameterError(f"unsupported half-order p={p}; expected 1, 2 or 3")
    M = sp.Matrix(p, p, lambda j, k: sp.Integer(k + 1) ** (2 * j + 1))
    rhs = sp.Matrix([1] + [0] * (p - 1))
    a = M.LUsolve(rhs)
    return EcCoefficients(p, tuple(float(x) for x in a), tuple(a))


def logmean(a, b):
    """Logarithmic mean ``(a - b)/(ln a - ln b)`` of positive arrays, stable at ``a == b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a - b
    f = d / (a + b)
    uu = f * f
    near = np.abs(d) < LOGMEAN_SWITCH * np.abs(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = d / np.log1p(d / b)
    series = (a + b) / (2.0 * (1.0 + uu / 3.0 + uu * uu / 5.0 + uu * uu * uu / 7.0))
    return np.where(near, series, direct)


def _euler_ec2(model: SystemModel, uL, uR, axis: int):
    # Kinetic-energy-preserving EC flux for s = ln p - gamma ln rho, written
    # with beta = rho/(2p); log means of rho and beta.
    g = model.gamma
    rL, rR = uL[..., 0], uR[..., 0]
    velL = uL[..., 1:-1] / rL[..., None]
    velR = uR[..., 1:-1] / rR[..., None]
    pL = (g - 1.0) * (uL[..., -1] - 0.5 * rL * np.sum(velL * velL, axis=-1))
    pR = (g - 1.0) * (uR[..., -1] - 0.5 * rR * np.sum(velR * velR, axis=-1))
    bL, bR = 0.5 * rL / pL, 0.5 * rR / pR
    rho_ln = logmean(rL, rR)
    beta_ln = logmean(bL, bR)
    vel_avg = 0.5 * (velL + velR)
    v2_avg = 0.5 * (np.sum(velL * velL, axis=-1) + np.sum(velR * velR, axis=-1))
    p_hat = 0.5 * (rL + rR) / (bL + bR)
    un = vel_avg[..., axis]

    F = np.empty(np.broadcast_shapes(uL.shape, uR.shape))
    F[..., 0] = rho_ln * un
    F[..., 1:-1] = vel_avg * F[..., 0:1]
    F[..., 1 + axis] += p_hat
    F[..., -1] = (0.5 / ((g - 1.0) * beta_ln) - 0.5 * v2_avg) * F[..., 0] + np.sum(
        vel_avg * F[..., 1:-1], axis=-1
    )
    return F


def ec2_flux(model: SystemModel, uL, uR, axis: int = 0, check: bool = True) -> np.ndarray:
    """Two-point entropy-conservative flux satisfying ``[[v]].F* = [[psi]]``."""
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    if check:
        check_physical(model, uL)
        check_physical(model, uR)
    if model.id == "advection":
        # [[a u^2/2]] / [[u]]
        return model.advection_speed * 0.5 * (uL + uR)
    if model.id == "burgers":
        # [[u^3/6]] / [[u]]
        return (uL * uL + uL * uR + uR * uR) / 6.0
    return _euler_ec2(model, uL, uR, axis)


def entropy_flux_q2(model: SystemModel, uL, uR, axis: int = 0, F=None, check: bool = True) -> np.ndarray:
    """``q* = vbar . F* - psibar`` for the two-point flux."""
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    if F is None:
        F = ec2_flux(model, uL, uR, axis, check)
    vbar = 0.5 * (entropy_variables(model, uL, check) + entropy_variables(model, uR, check))
    psibar = 0.5 * (entropy_potential(model, uL, axis, False) + entropy_potential(model, uR, axis, False))
    return np.sum(vbar * F, axis=-1) - psibar


def _check_order(order: int) -> int:
    if order not in EC_ORDERS:
        raise ParameterError(f"unsupported EC order {order}; expected one of {EC_ORDERS}")
    return order // 2


def _pairs(p: int):
    """(coefficient, left offset, right offset) relative to cell i."""
    alpha = ec_coefficients(p).alpha
    return [(alpha[k - 1], -l, k - l) for k in range(1, p + 1) for l in range(k)]


def ec_interface_fluxes(model: SystemModel, u, order: int, lo: int, hi: int, axis: int = 0, with_entropy: bool = False):
    """EC flux of ``order`` at interfaces ``i+1/2`` for ``lo <= i < hi`` of a padded array.

    With ``with_entropy`` also returns the matching numerical entropy flux.
    """
    p = _check_order(order)
    u = np.asarray(u, dtype=float)
    if lo - (p - 1) < 0 or hi + p > u.shape[0]:
        raise ParameterError(f"EC{order} needs {p} ghost cells")
    F = 0.0
    q = 0.0
    if with_entropy:
        v = entropy_variables(model, u, check=False)
        psi = entropy_potential(model, u, axis, check=False)
    for a, dl, dr in _pairs(p):
        uL = u[lo + dl : hi + dl]
        uR = u[lo + dr : hi + dr]
        Fk = ec2_flux(model, uL, uR, axis, check=False)
        F = F + a * Fk
        if with_entropy:
            vbar = 0.5 * (v[lo + dl : hi + dl] + v[lo + dr : hi + dr])
            psibar = 0.5 * (psi[lo + dl : hi + dl] + psi[lo + dr : hi + dr])
            q = q + a * (np.sum(vbar * Fk, axis=-1) - psibar)
    return (F, q) if with_entropy else F


def _stencil_flux(model, stencil, order, axis, with_entropy=False):
    p = _check_order(order)
    s = np.asarray(stencil, dtype=float)
    if s.shape[0] != 2 * p:
        raise ParameterError(f"EC{order} needs a stencil of {2 * p} states, got {s.shape[0]}")
    check_physical(model, s)
    i = p - 1
    return ec_interface_fluxes(model, s, order, i, i + 1, axis, with_entropy)


def ec4_flux(model: SystemModel, stencil, axis: int = 0) -> np.ndarray:
    """Fourth-order EC flux from states ``u_{i-1}..u_{i+2}``."""
    return _stencil_flux(model, stencil, 4, axis)[0]


def ec6_flux(model: SystemModel, stencil, axis: int = 0) -> np.ndarray:
    """Sixth-order EC flux from states ``u_{i-2}..u_{i+3}``."""
    return _stencil_flux(model, stencil, 6, axis)[0]


def entropy_flux_2p(model: SystemModel, stencil, p: int, axis: int = 0) -> float:
    """Entropy flux matching the order-2p EC flux on stencil ``u_{i-p+1}..u_{i+p}``."""
    if p not in (1, 2, 3):
        raise ParameterError(f"unsupported half-order p={p}; expected 1, 2 or 3")
    _, q = _stencil_flux(model, stencil, 2 * p, axis, with_entropy=True)
    return float(q[0])
