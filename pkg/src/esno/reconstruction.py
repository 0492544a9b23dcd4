"""Lax-Friedrichs flux splitting and ENO/WENO reconstruction of split fluxes.

Point values of the split fluxes are treated as cell averages of an auxiliary
function (finite-difference WENO), reconstructed componentwise:
``F+`` from ``f+`` on the left-biased window of cell ``i`` and ``F-`` from
``f-`` on the mirrored window of cell ``i+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import _backend
from .errors import ConfigurationError, ParameterError
from .models import SystemModel, max_wavespeed, physical_flux
from .stencils import stencil_coefficients

# family -> (kind, k, formal order)
FAMILIES = {
    "llf1": ("llf", 1, 1),
    "eno2": ("eno", 2, 2),
    "eno3": ("eno", 3, 3),
    "weno3js": ("weno-js", 2, 3),
    "weno5js": ("weno-js", 3, 5),
    "weno3z": ("weno-z", 2, 3),
    "weno5z": ("weno-z", 3, 5),
}
# auto: global for scalar models, local for systems
SPLITTING_MODES = ("auto", "global", "local")


@dataclass(frozen=True)
class NsFluxConfig:
    family: str = "weno5js"
    epsilon: float = 1e-6
    splitting: str = "auto"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown flux family {self.family!r}; expected one of {list(FAMILIES)}")
        if not self.epsilon > 0:
            raise ParameterError("WENO epsilon must be positive")
        if self.splitting not in SPLITTING_MODES:
            raise ParameterError(f"splitting must be one of {SPLITTING_MODES}")

    @property
    def kind(self) -> str:
        return FAMILIES[self.family][0]

    @property
    def k(self) -> int:
        return FAMILIES[self.family][1]

    @property
    def order(self) -> int:
        return FAMILIES[self.family][2]

    @property
    def ghost_width(self) -> int:
        return self.k


class ReconstructionWeights(NamedTuple):
    beta: np.ndarray
    gamma_lin: np.ndarray
    omega: np.ndarray
    epsilon: float


def split_flux_lxf(f_point, u_point, sigma):
    """Lax-Friedrichs splitting ``f+- = (f +- sigma u)/2``."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0):
        raise ParameterError("splitting speed sigma must be non-negative")
    f = np.asarray(f_point, dtype=float)
    su = sigma * np.asarray(u_point, dtype=float)
    return 0.5 * (f + su), 0.5 * (f - su)


def _window(window, k: int, side: str) -> np.ndarray:
    if k not in (2, 3):
        raise ParameterError(f"unsupported order k={k}; expected 2 or 3")
    w = np.asarray(window, dtype=float)
    if w.shape[-1] != 2 * k - 1:
        raise ParameterError(f"window must hold {2 * k - 1} values for k={k}, got {w.shape[-1]}")
    if side == "left":
        return w[..., ::-1]
    if side != "right":
        raise ParameterError("side must be 'left' or 'right'")
    return w


def eno_interface_value(window, k: int, side: str = "right"):
    """ENO-k value at the right (or left) interface of the window's centre cell.

    ``side='left'`` is the mirror image of ``side='right'``, ties included.
    """
    w = _window(window, k, side)
    st = stencil_coefficients(k)
    rows = np.ascontiguousarray(w.reshape(-1, 2 * k - 1))
    out = _backend.kernels.eno_rows(rows, st.C, k).reshape(w.shape[:-1])
    return out[()] if out.ndim == 0 else out


def weno_interface_value(window, k: int, eps: float = 1e-6, weight_mode: str = "js", side: str = "right"):
    """WENO-(2k-1) value at the right (or left) interface of the centre cell."""
    if not eps > 0:
        raise ParameterError("eps must be positive")
    if weight_mode not in ("js", "z"):
        raise ParameterError("weight_mode must be 'js' or 'z'")
    w = _window(window, k, side)
    st = stencil_coefficients(k)
    rows = np.ascontiguousarray(w.reshape(-1, 2 * k - 1))
    out = _backend.kernels.weno_rows(rows, st.C, st.gamma, st.A, st.G, eps, weight_mode == "z")
    out = out.reshape(w.shape[:-1])
    return out[()] if out.ndim == 0 else out


def weno_weights(window, k: int, eps: float = 1e-6, weight_mode: str = "js", side: str = "right"):
    w = _window(window, k, side)
    st = stencil_coefficients(k)
    from ._kernels_py import weno_weights as _ww

    beta, omega = _ww(w.reshape(-1, 2 * k - 1), st.C, st.gamma, st.A, st.G, eps, weight_mode == "z")
    shape = w.shape[:-1] + (k,)
    return ReconstructionWeights(beta.reshape(shape), st.gamma.copy(), omega.reshape(shape), eps)


def reconstruct_rows(rows, cfg: NsFluxConfig) -> np.ndarray:
    """Right-interface reconstruction of every row of ``rows`` (shape (N, 2k-1))."""
    st = stencil_coefficients(cfg.k)
    rows = np.ascontiguousarray(rows, dtype=float)
    if cfg.kind == "eno":
        return _backend.kernels.eno_rows(rows, st.C, cfg.k)
    return _backend.kernels.weno_rows(rows, st.C, st.gamma, st.A, st.G, cfg.epsilon, cfg.kind == "weno-z")


def splitting_speed(model: SystemModel, u, axis: int = 0) -> float:
    """Global Lax-Friedrichs speed: max wavespeed over every supplied state."""
    s = max_wavespeed(model, u, axis if model.ndim > 1 else 0)
    return float(np.max(s)) if s.size else 0.0


def nonoscillatory_flux(
    u,
    model: SystemModel,
    cfg: NsFluxConfig,
    lo: int,
    hi: int,
    axis: int = 0,
    sigma: float | None = None,
    f=None,
) -> np.ndarray:
    """Non-oscillatory interface fluxes ``F^s_{i+1/2}`` for cells ``lo <= i < hi``.

    ``u`` is padded along its first axis (the sweep direction) and may carry
    extra batch axes before the component axis. ``sigma`` overrides the global
    splitting speed so callers that chunk a field can keep it field-wide.
    Local splitting uses the largest wavespeed over the 2k cells feeding an
    interface.
    """
    u = np.asarray(u, dtype=float)
    ntot = u.shape[0]
    k = cfg.k
    if lo - k + 1 < 0 or hi + k > ntot:
        raise ConfigurationError(
            f"{cfg.family} needs {k} ghost cells; interfaces [{lo}, {hi}) exceed the padded array of {ntot}"
        )
    if f is None:
        f = physical_flux(model, u, axis)
    if cfg.kind == "llf":
        uL, uR = u[lo:hi], u[lo + 1 : hi + 1]
        ws = max_wavespeed(model, u[lo : hi + 1], axis, check=False)
        alpha = np.maximum(ws[:-1], ws[1:])[..., None]
        return 0.5 * (f[lo:hi] + f[lo + 1 : hi + 1]) - 0.5 * alpha * (uR - uL)

    W = 2 * k - 1
    nI = hi - lo
    mode = cfg.splitting
    if mode == "auto":
        mode = "global" if model.is_scalar else "local"
    if mode == "global":
        if sigma is None:
            sigma = splitting_speed(model, u, axis)
        fp, fm = split_flux_lxf(f, u, sigma)
        wp = sliding_window_view(fp[lo - k + 1 : hi + k - 1], W, axis=0)
        wm = sliding_window_view(fm[lo - k + 2 : hi + k], W, axis=0)[..., ::-1]
    else:
        ws = max_wavespeed(model, u[lo - k + 1 : hi + k], axis, check=False)
        sig = sliding_window_view(ws, 2 * k, axis=0).max(axis=-1)[..., None, None]
        fw = sliding_window_view(f[lo - k + 1 : hi + k], W, axis=0)
        uw = sliding_window_view(u[lo - k + 1 : hi + k], W, axis=0)
        wp = 0.5 * (fw[:nI] + sig * uw[:nI])
        wm = (0.5 * (fw[1:] - sig * uw[1:]))[..., ::-1]
    out_shape = wp.shape[:-1]
    rows = np.concatenate([wp.reshape(-1, W), wm.reshape(-1, W)])
    vals = reconstruct_rows(rows, cfg)
    half = vals.size // 2
    return vals[:half].reshape(out_shape) + vals[half:].reshape(out_shape)
