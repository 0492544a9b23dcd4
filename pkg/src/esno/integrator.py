"""Semi-discrete residual, boundary padding, time-step control and SSP-RK3.

Fields store interior cells only, shaped ``(nx, m)`` or ``(nx, ny, m)``.
Every directional sweep pads along axis 0 and runs the 1D pipeline; the
y-sweep transposes the field and swaps the momentum components so it is the
x-sweep code verbatim, which makes x/y-symmetric data stay exactly symmetric.
"""

from __future__ import annotations

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .ecflux import ec_interface_fluxes
from .errors import ConfigurationError, NonPhysicalStateError, ParameterError
from .esflux import esno_flux
from .models import SystemModel, check_physical, entropy, entropy_variables, max_wavespeed, physical_flux
from .reconstruction import nonoscillatory_flux, splitting_speed
from .schemes import FluxSchemeConfig

BC_KINDS = ("periodic", "transmissive", "reflective")
ACCURACY_EXPONENT = 5.0 / 3.0
# 2D component order with the two momentum components exchanged
_SWAP_2D = np.array([0, 2, 1, 3])


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred grid; ``bounds`` and ``n`` hold one entry per axis."""

    bounds: tuple[tuple[float, float], ...]
    n: tuple[int, ...]
    ghost_width: int = 3

    def __post_init__(self):
        if len(self.bounds) != len(self.n) or len(self.n) not in (1, 2):
            raise ConfigurationError("grid needs matching bounds and sizes for 1 or 2 axes")
        for (a, b), n in zip(self.bounds, self.n):
            if not b > a:
                raise ConfigurationError(f"empty interval [{a}, {b}]")
            if n < 4:
                raise ConfigurationError("at least 4 cells per axis are required")
            if n < self.ghost_width:
                raise ConfigurationError(f"{n} cells cannot supply {self.ghost_width} ghost cells")
        if self.ghost_width < 1:
            raise ConfigurationError("ghost_width must be at least 1")

    @classmethod
    def uniform(cls, bounds, n, ghost_width: int = 3) -> Grid:
        if np.ndim(n) == 0:
            n = (int(n),) * len(bounds)
        return cls(tuple((float(a), float(b)) for a, b in bounds), tuple(int(k) for k in n), ghost_width)

    @property
    def ndim(self) -> int:
        return len(self.n)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / n for (a, b), n in zip(self.bounds, self.n))

    @property
    def dx(self) -> float:
        return self.spacing[0]

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def centers(self, axis: int = 0) -> np.ndarray:
        """Cell centres, mirror-symmetric about the interval midpoint to the last bit."""
        (a, b), n = self.bounds[axis], self.n[axis]
        h = (b - a) / n
        return 0.5 * (a + b) + (np.arange(n) - 0.5 * (n - 1)) * h

    def mesh(self):
        """Centre coordinates broadcast to the field shape (without the component axis)."""
        if self.ndim == 1:
            return (self.centers(0),)
        return tuple(np.meshgrid(self.centers(0), self.centers(1), indexing="ij"))


@dataclass
class Field:
    grid: Grid
    u: np.ndarray
    bc: tuple[str, ...]
    time: float = 0.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if isinstance(self.bc, str):
            self.bc = (self.bc,) * self.grid.ndim
        self.bc = tuple(self.bc)
        if len(self.bc) != self.grid.ndim or any(b not in BC_KINDS for b in self.bc):
            raise ConfigurationError(f"need one boundary condition per axis from {BC_KINDS}")
        if self.u.shape[:-1] != self.grid.n:
            raise ConfigurationError(f"field shape {self.u.shape} does not match grid {self.grid.n}")

    def copy(self) -> Field:
        return Field(self.grid, self.u.copy(), self.bc, self.time)


@dataclass(frozen=True)
class TimeControl:
    mode: str = "cfl"
    cfl: float = 0.25
    t_final: float = 1.0

    def __post_init__(self):
        if self.mode not in ("cfl", "accuracy"):
            raise ParameterError("time-step mode must be 'cfl' or 'accuracy'")
        if not self.cfl > 0:
            raise ParameterError("cfl must be positive")
        if not self.t_final >= 0:
            raise ParameterError("t_final must be non-negative")


class SweepDiagnostics(NamedTuple):
    residual: np.ndarray  # v_i . L_i + (q_hat_{i+1/2} - q_hat_{i-1/2})/dx, per cell
    chi: np.ndarray  # (n+1, ..., m) selection mask
    dissipation: np.ndarray  # [[v]] . (F* - F_hat) per interface
    q_hat: np.ndarray


# --------------------------------------------------------------------- padding


def pad_axis0(u: np.ndarray, g: int, bc: str, normal: int | None = None) -> np.ndarray:
    """Pad ``g`` ghost cells on both ends of axis 0.

    ``normal`` is the momentum component negated by a reflective wall.
    """
    n = u.shape[0]
    if g > n:
        raise ConfigurationError(f"{n} cells cannot supply {g} ghost cells")
    if bc == "periodic":
        left, right = u[n - g :], u[:g]
    elif bc == "transmissive":
        left = np.repeat(u[:1], g, axis=0)
        right = np.repeat(u[n - 1 :], g, axis=0)
    elif bc == "reflective":
        left = u[g - 1 :: -1].copy() if g else u[:0]
        right = u[n - 1 : n - g - 1 : -1].copy() if n > g else u[::-1].copy()
        if normal is not None:
            left[..., normal] *= -1.0
            right[..., normal] *= -1.0
    else:
        raise ConfigurationError(f"unknown boundary condition {bc!r}")
    return np.concatenate([left, u, right], axis=0)


def _normal_component(model: SystemModel) -> int | None:
    return 1 if model.is_euler else None


def apply_boundary(fld: Field, model: SystemModel, g: int | None = None) -> np.ndarray:
    """Interior plus ghost layers on every axis; corners follow the x-then-y fill."""
    g = fld.grid.ghost_width if g is None else g
    up = pad_axis0(fld.u, g, fld.bc[0], _normal_component(model))
    if fld.grid.ndim == 2:
        t = _to_y_frame(up, model)
        t = pad_axis0(t, g, fld.bc[1], _normal_component(model))
        up = _to_y_frame(t, model)
    return up


def _to_y_frame(u: np.ndarray, model: SystemModel) -> np.ndarray:
    """Transpose the two spatial axes and exchange momentum components (an involution)."""
    t = np.swapaxes(u, 0, 1)
    if model.id == "euler2d":
        t = t[..., _SWAP_2D]
    return np.ascontiguousarray(t)


# ---------------------------------------------------------------- residuals


def _sweep(model: SystemModel, scheme: FluxSchemeConfig, up: np.ndarray, g: int, dx: float, sigma, diag: bool):
    """Tendency along axis 0 of the padded array ``up``, optionally with diagnostics."""
    n = up.shape[0] - 2 * g
    lo, hi = g - 1, g + n
    sel = scheme.selector
    need_v = diag or (scheme.gated and sel.jump_variable == "entropy")
    v = entropy_variables(model, up, check=False) if need_v else None

    f_ec = f_ns = q_star = None
    if scheme.ec_order is not None:
        if diag:
            f_ec, q_star = ec_interface_fluxes(model, up, scheme.ec_order, lo, hi, 0, with_entropy=True)
        else:
            f_ec = ec_interface_fluxes(model, up, scheme.ec_order, lo, hi, 0)
    if scheme.ns is not None:
        f = physical_flux(model, up, 0, check=False)
        f_ns = nonoscillatory_flux(up, model, scheme.ns, lo, hi, 0, sigma=sigma, f=f)

    if scheme.gated:
        src = v if sel.jump_variable == "entropy" else up
        rec = esno_flux(f_ec, f_ns, src[lo + 1 : hi + 1] - src[lo:hi], sel)
        f_hat, chi, diffusion = rec.f_hat, rec.chi, rec.diffusion
    elif f_ec is not None:
        f_hat, chi, diffusion = f_ec, np.zeros(f_ec.shape, dtype=bool), np.zeros_like(f_ec)
    else:
        f_hat, chi, diffusion = f_ns, np.ones(f_ns.shape, dtype=bool), None

    L = -(f_hat[1:] - f_hat[:-1]) / dx
    if not diag:
        return L, None

    if q_star is None:
        nan = np.full(f_hat.shape[:-1], np.nan)
        return L, SweepDiagnostics(np.full(L.shape[:-1], np.nan), chi, nan, nan)
    vL, vR = v[lo:hi], v[lo + 1 : hi + 1]
    q_hat = q_star - np.sum(0.5 * (vL + vR) * diffusion, axis=-1)
    dissipation = np.sum((vR - vL) * diffusion, axis=-1)
    residual = np.sum(v[g : g + n] * L, axis=-1) + (q_hat[1:] - q_hat[:-1]) / dx
    return L, SweepDiagnostics(residual, chi, dissipation, q_hat)


def _run_rows(fn, up: np.ndarray, workers: int):
    """Evaluate ``fn`` over chunks of batch axis 1 with a thread pool; chunk results are concatenated."""
    if workers <= 1 or up.ndim < 3 or up.shape[1] < 2 * workers:
        return fn(up)
    edges = np.linspace(0, up.shape[1], workers + 1).astype(int)
    chunks = [up[:, a:b] for a, b in zip(edges[:-1], edges[1:])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(fn, chunks))
    L = np.concatenate([p[0] for p in parts], axis=1)
    if parts[0][1] is None:
        return L, None
    d = SweepDiagnostics(*(np.concatenate([getattr(p[1], name) for p in parts], axis=1) for name in SweepDiagnostics._fields))
    return L, d


def _oriented_rhs(model, scheme, u, g, bc, dx, diag, workers, normal):
    """Residual along axis 0 of an oriented interior array (x frame)."""
    up = pad_axis0(u, g, bc, normal)
    sigma = None
    if scheme.ns is not None and scheme.ns.kind != "llf":
        mode = scheme.ns.splitting
        if mode == "global" or (mode == "auto" and model.is_scalar):
            sigma = splitting_speed(model, up, 0)
    return _run_rows(lambda a: _sweep(model, scheme, a, g, dx, sigma, diag), up, workers)


def semi_discrete_rhs(
    fld: Field,
    model: SystemModel,
    scheme: FluxSchemeConfig,
    axis: int | None = None,
    diagnostics: bool = False,
    workers: int = 1,
):
    """``L(u) = -(F_hat_{i+1/2} - F_hat_{i-1/2})/dx`` along ``axis`` (all axes summed if None).

    With ``diagnostics`` returns ``(L, [SweepDiagnostics per axis])`` where
    residuals and masks are mapped back to the field layout.
    """
    grid = fld.grid
    g = grid.ghost_width
    if g < scheme.ghost_width:
        raise ConfigurationError(f"scheme {scheme.name} needs {scheme.ghost_width} ghost cells, grid has {g}")
    axes = range(grid.ndim) if axis is None else (axis,)
    normal = _normal_component(model)
    L_total = None
    diags = []
    for ax in axes:
        if ax == 0:
            L, d = _oriented_rhs(model, scheme, fld.u, g, fld.bc[0], grid.spacing[0], diagnostics, workers, normal)
        elif ax == 1 and grid.ndim == 2:
            ut = _to_y_frame(fld.u, model)
            Lt, dt_ = _oriented_rhs(model, scheme, ut, g, fld.bc[1], grid.spacing[1], diagnostics, workers, normal)
            L = _to_y_frame(Lt, model)
            d = None
            if dt_ is not None:
                chi = np.swapaxes(dt_.chi, 0, 1)
                if model.id == "euler2d":
                    chi = chi[..., _SWAP_2D]
                d = SweepDiagnostics(
                    np.swapaxes(dt_.residual, 0, 1), chi, np.swapaxes(dt_.dissipation, 0, 1), np.swapaxes(dt_.q_hat, 0, 1)
                )
        else:
            raise ParameterError(f"axis {ax} invalid for a {grid.ndim}D grid")
        L_total = L if L_total is None else L_total + L
        diags.append(d)
    return (L_total, diags) if diagnostics else L_total


# ---------------------------------------------------------------- stepping


def compute_dt(fld: Field, model: SystemModel, tc: TimeControl) -> float:
    """Stable step for ``tc``, clipped so the run lands exactly on ``t_final``."""
    h = fld.grid.spacing
    if tc.mode == "accuracy":
        dt = min(h) ** ACCURACY_EXPONENT
    else:
        rate = 0.0
        for ax, hx in enumerate(h):
            s = max_wavespeed(model, fld.u, ax if model.ndim > 1 else 0)
            rate += (float(np.max(s)) if s.size else 0.0) / hx
        dt = tc.cfl / rate if rate > 0 else tc.cfl * min(h)
    remaining = tc.t_final - fld.time
    return float(min(dt, remaining))


def _checked(model, u, time, stage):
    try:
        check_physical(model, u)
    except NonPhysicalStateError as exc:
        raise exc.with_context(time=time, stage=stage) from None


def ssp_rk3_step(fld: Field, model: SystemModel, scheme: FluxSchemeConfig, dt: float, workers: int = 1, rhs=None):
    """One SSP-RK3 step. ``rhs(field) -> L`` overrides the residual operator."""
    if not dt > 0:
        raise ParameterError("dt must be positive")
    if rhs is None:
        def rhs(f):
            return semi_discrete_rhs(f, model, scheme, workers=workers)

    t0 = fld.time
    u0 = fld.u
    _checked(model, u0, t0, 1)
    L0 = rhs(fld)
    u1 = u0 + dt * L0
    _checked(model, u1, t0 + dt, 2)
    L1 = rhs(Field(fld.grid, u1, fld.bc, t0 + dt))
    u2 = 0.75 * u0 + 0.25 * (u1 + dt * L1)
    _checked(model, u2, t0 + 0.5 * dt, 3)
    L2 = rhs(Field(fld.grid, u2, fld.bc, t0 + 0.5 * dt))
    u3 = (1.0 / 3.0) * u0 + (2.0 / 3.0) * u2 + (2.0 / 3.0) * dt * L2
    _checked(model, u3, t0 + dt, "update")
    return Field(fld.grid, u3, fld.bc, t0 + dt)


def step_2d(fld: Field, model: SystemModel, scheme: FluxSchemeConfig, dt: float, workers: int = 1) -> Field:
    """SSP-RK3 step of a 2D field with ``L = Lx + Ly``."""
    if fld.grid.ndim != 2:
        raise ConfigurationError("step_2d needs a 2D field")
    return ssp_rk3_step(fld, model, scheme, dt, workers)


# -------------------------------------------------------------- run loop


@dataclass
class EntropyReport:
    """Per-step entropy and selector statistics, time-ordered."""

    rows: list = field(default_factory=list)
    violations: int = 0  # selected interfaces with [[v]].(F* - F_hat) < -tol
    tol: float = 1e-12

    HEADER = ("t", "total_entropy", "max_cell_residual", "chi_fraction", "min_dissipation")

    def add(self, t, total_entropy, max_residual, chi_fraction, min_dissipation):
        self.rows.append((float(t), float(total_entropy), float(max_residual), float(chi_fraction), float(min_dissipation)))

    def column(self, name: str) -> np.ndarray:
        return np.array([r[self.HEADER.index(name)] for r in self.rows])

    @property
    def min_dissipation(self) -> float:
        d = self.column("min_dissipation")
        d = d[np.isfinite(d)]
        return float(d.min()) if d.size else float("nan")

    @property
    def max_cell_residual(self) -> float:
        r = self.column("max_cell_residual")
        r = r[np.isfinite(r)]
        return float(r.max()) if r.size else float("nan")

    def max_entropy_increase(self) -> float:
        e = self.column("total_entropy")
        return float(np.max(np.diff(e))) if e.size > 1 else 0.0


def entropy_snapshot(fld: Field, model: SystemModel, scheme: FluxSchemeConfig, workers: int = 1):
    """Entropy statistics of the frozen field: (total entropy, residual per cell, chi fraction, min dissipation, violations)."""
    _, diags = semi_discrete_rhs(fld, model, scheme, diagnostics=True, workers=workers)
    total = float(np.sum(entropy(model, fld.u, check=False)) * fld.grid.cell_volume)
    residual = sum(d.residual for d in diags)
    if scheme.gated:
        chi_sel = [np.any(d.chi, axis=-1) for d in diags]
        n_sel = sum(int(np.count_nonzero(c)) for c in chi_sel)
        n_all = sum(c.size for c in chi_sel)
        chi_fraction = n_sel / n_all
        picked = [d.dissipation[c] for d, c in zip(diags, chi_sel)]
        picked = np.concatenate(picked) if picked else np.empty(0)
        min_diss = float(picked.min()) if picked.size else float("nan")
        violations = int(np.count_nonzero(picked < -EntropyReport.tol))
    else:
        chi_fraction = 0.0 if scheme.ns is None else 1.0
        min_diss = 0.0 if scheme.ns is None else float("nan")
        violations = 0
    return total, residual, chi_fraction, min_diss, violations


@dataclass
class RunResult:
    field: Field
    steps: int
    report: EntropyReport | None = None


def run(
    fld: Field,
    model: SystemModel,
    scheme: FluxSchemeConfig,
    tc: TimeControl,
    diagnostics: bool = False,
    workers: int = 1,
    monitor: Callable[[int, Field], None] | None = None,
    max_steps: int | None = None,
) -> RunResult:
    """Advance ``fld`` to ``tc.t_final``; ``monitor(step, field)`` sees every accepted state."""
    report = EntropyReport() if diagnostics else None

    def record(f):
        total, res, chi_frac, min_diss, viol = entropy_snapshot(f, model, scheme, workers)
        report.violations += viol
        report.add(f.time, total, np.max(res) if np.all(np.isfinite(res)) else np.nan, chi_frac, min_diss)

    steps = 0
    if monitor is not None:
        monitor(0, fld)
    while fld.time < tc.t_final:
        if report is not None:
            record(fld)
        t0 = fld.time
        dt = compute_dt(fld, model, tc)
        if not dt > 0:
            break
        fld = ssp_rk3_step(fld, model, scheme, dt, workers)
        fld.time = tc.t_final if dt >= tc.t_final - t0 else t0 + dt
        steps += 1
        if monitor is not None:
            monitor(steps, fld)
        if max_steps is not None and steps >= max_steps:
            break
    if report is not None:
        record(fld)
    return RunResult(fld, steps, report)
