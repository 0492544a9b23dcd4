"""Conservation-law systems with their entropy pairs.

State arrays carry the conserved components on the last axis, so every
function here is vectorised over arbitrary leading dimensions.

Scalar models use the square entropy ``eta = u**2/2`` (so ``v = u``).
The Euler systems use the physical entropy ``eta = -rho*s/(gamma-1)`` with
``s = ln p - gamma ln rho``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NonPhysicalStateError  # noqa: F401

MODEL_IDS = ("advection", "burgers", "euler1d", "euler2d")
_NCOMP = {"advection": 1, "burgers": 1, "euler1d": 3, "euler2d": 4}

#: Absolute floor for density and pressure; anything below is an error.
POSITIVITY_FLOOR = 1e-13


@dataclass(frozen=True)
class SystemModel:
    id: str
    gamma: float = 1.4
    advection_speed: float = 1.0

    def __post_init__(self):
        if self.id not in MODEL_IDS:
            raise ValueError(f"unknown model {self.id!r}; expected one of {MODEL_IDS}")
        if self.is_euler and not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1 for the Euler equations")

    @property
    def m(self) -> int:
        return _NCOMP[self.id]

    @property
    def ndim(self) -> int:
        return 2 if self.id == "euler2d" else 1

    @property
    def is_euler(self) -> bool:
        return self.id.startswith("euler")

    @property
    def is_scalar(self) -> bool:
        return self.m == 1


class EntropyPairValues(NamedTuple):
    eta: np.ndarray
    q: np.ndarray  # (..., ndim)
    v: np.ndarray  # (..., m)
    psi: np.ndarray  # (..., ndim)


def _check_axis(model: SystemModel, axis: int) -> None:
    if axis not in range(model.ndim):
        raise ValueError(f"axis {axis} invalid for {model.id} ({model.ndim}D)")


def euler_primitives(model: SystemModel, u: np.ndarray, check: bool = True):
    """Return ``rho, vel, p`` with ``vel`` of shape (..., ndim)."""
    u = np.asarray(u, dtype=float)
    rho = u[..., 0]
    vel = u[..., 1:-1] / rho[..., None]
    p = (model.gamma - 1.0) * (u[..., -1] - 0.5 * rho * np.sum(vel * vel, axis=-1))
    if check:
        check_physical(model, u, rho=rho, p=p)
    return rho, vel, p


def check_physical(model: SystemModel, u, rho=None, p=None) -> None:
    """Raise :class:`NonPhysicalStateError` if any state breaks positivity or is not finite."""
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        bad = np.argwhere(~np.isfinite(u))[0]
        raise NonPhysicalStateError("non-finite value", index=tuple(int(b) for b in bad[:-1]))
    if not model.is_euler:
        return
    if rho is None or p is None:
        rho, _, p = euler_primitives(model, u, check=False)
    for name, q in (("density", rho), ("pressure", p)):
        bad = ~(q >= POSITIVITY_FLOOR)
        if np.any(bad):
            idx = np.argwhere(bad)[0]
            raise NonPhysicalStateError(
                name, index=tuple(int(i) for i in idx), value=float(q[tuple(idx)])
            )


def physical_flux(model: SystemModel, u, axis: int = 0, check: bool = True) -> np.ndarray:
    """Physical flux ``f(u)`` along ``axis``."""
    _check_axis(model, axis)
    u = np.asarray(u, dtype=float)
    if model.id == "advection":
        return model.advection_speed * u
    if model.id == "burgers":
        return 0.5 * u * u
    rho, vel, p = euler_primitives(model, u, check)
    un = vel[..., axis]
    f = u * un[..., None]
    f[..., 1 + axis] += p
    f[..., -1] += p * un
    return f


def entropy_variables(model: SystemModel, u, check: bool = True) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if model.is_scalar:
        return u.copy()
    rho, vel, p = euler_primitives(model, u, check)
    g = model.gamma
    s = np.log(p) - g * np.log(rho)
    beta = rho / p
    v = np.empty_like(u)
    v[..., 0] = (g - s) / (g - 1.0) - 0.5 * beta * np.sum(vel * vel, axis=-1)
    v[..., 1:-1] = beta[..., None] * vel
    v[..., -1] = -beta
    return v


def entropy(model: SystemModel, u, check: bool = True) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if model.is_scalar:
        return 0.5 * u[..., 0] ** 2
    rho, _, p = euler_primitives(model, u, check)
    s = np.log(p) - model.gamma * np.log(rho)
    return -rho * s / (model.gamma - 1.0)


def entropy_potential(model: SystemModel, u, axis: int = 0, check: bool = True) -> np.ndarray:
    """``psi = v.f - q`` in closed form along ``axis``."""
    _check_axis(model, axis)
    u = np.asarray(u, dtype=float)
    if model.id == "advection":
        return 0.5 * model.advection_speed * u[..., 0] ** 2
    if model.id == "burgers":
        return u[..., 0] ** 3 / 6.0
    if check:
        check_physical(model, u)
    return u[..., 1 + axis].copy()


def entropy_flux(model: SystemModel, u, axis: int = 0, check: bool = True) -> np.ndarray:
    _check_axis(model, axis)
    u = np.asarray(u, dtype=float)
    if model.id == "advection":
        return 0.5 * model.advection_speed * u[..., 0] ** 2
    if model.id == "burgers":
        return u[..., 0] ** 3 / 3.0
    rho, vel, p = euler_primitives(model, u, check)
    s = np.log(p) - model.gamma * np.log(rho)
    return -rho * vel[..., axis] * s / (model.gamma - 1.0)


def entropy_pair(model: SystemModel, u, check: bool = True) -> EntropyPairValues:
    u = np.asarray(u, dtype=float)
    if check:
        check_physical(model, u)
    axes = range(model.ndim)
    return EntropyPairValues(
        eta=entropy(model, u, check=False),
        q=np.stack([entropy_flux(model, u, a, check=False) for a in axes], axis=-1),
        v=entropy_variables(model, u, check=False),
        psi=np.stack([entropy_potential(model, u, a, check=False) for a in axes], axis=-1),
    )


def max_wavespeed(model: SystemModel, u, axis: int | None = None, check: bool = True) -> np.ndarray:
    """Spectral radius of the flux Jacobian, per state.

    ``axis=None`` returns the maximum over all directions.
    """
    u = np.asarray(u, dtype=float)
    if model.id == "advection":
        return np.full(u.shape[:-1], abs(model.advection_speed))
    if model.id == "burgers":
        return np.abs(u[..., 0])
    rho, vel, p = euler_primitives(model, u, check)
    c = np.sqrt(model.gamma * p / rho)
    if axis is None:
        return np.max(np.abs(vel), axis=-1) + c
    _check_axis(model, axis)
    return np.abs(vel[..., axis]) + c


def conserved_from_primitive(model: SystemModel, prim) -> np.ndarray:
    """Primitive ``(rho, u[, v], p)`` to conserved ``(rho, rho u[, rho v], E)``."""
    prim = np.asarray(prim, dtype=float)
    if model.is_scalar:
        return prim.copy()
    rho, vel, p = prim[..., 0], prim[..., 1:-1], prim[..., -1]
    if np.any(~(rho >= POSITIVITY_FLOOR)):
        raise NonPhysicalStateError("density")
    if np.any(~(p >= POSITIVITY_FLOOR)):
        raise NonPhysicalStateError("pressure")
    u = np.empty_like(prim)
    u[..., 0] = rho
    u[..., 1:-1] = rho[..., None] * vel
    u[..., -1] = p / (model.gamma - 1.0) + 0.5 * rho * np.sum(vel * vel, axis=-1)
    return u


def primitive_from_conserved(model: SystemModel, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if model.is_scalar:
        return u.copy()
    rho, vel, p = euler_primitives(model, u)
    prim = np.empty_like(u)
    prim[..., 0] = rho
    prim[..., 1:-1] = vel
    prim[..., -1] = p
    return prim
