"""Registry of test problems: initial data, domains, boundaries, final times, exact solutions."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError
from .integrator import Field, Grid, TimeControl
from .models import SystemModel, conserved_from_primitive

NEWTON_TOL = 1e-14


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    model_id: str
    bounds: tuple[tuple[float, float], ...]
    bc: tuple[str, ...]
    t_final: float
    cfl: float
    n_default: int
    dt_mode: str
    ic: Callable  # coordinates -> conserved states (..., m)
    exact: Callable | None = None  # (x, t) -> conserved states
    description: str = ""

    @property
    def ndim(self) -> int:
        return len(self.bounds)

    def model(self, gamma: float = 1.4) -> SystemModel:
        return SystemModel(self.model_id, gamma=gamma)

    def grid(self, n: int | tuple[int, ...] | None = None, ghost_width: int = 3) -> Grid:
        return Grid.uniform(self.bounds, self.n_default if n is None else n, ghost_width)

    def time_control(self, t_final: float | None = None, cfl: float | None = None, mode: str | None = None) -> TimeControl:
        return TimeControl(
            mode=self.dt_mode if mode is None else mode,
            cfl=self.cfl if cfl is None else cfl,
            t_final=self.t_final if t_final is None else t_final,
        )


# ------------------------------------------------------------- initial data


def _scalar(values) -> np.ndarray:
    return np.asarray(values, dtype=float)[..., None]


def _euler1d(model, rho, u, p) -> np.ndarray:
    prim = np.stack(np.broadcast_arrays(rho, u, p), axis=-1).astype(float)
    return conserved_from_primitive(model, prim)


def _euler2d(model, rho, u, v, p) -> np.ndarray:
    prim = np.stack(np.broadcast_arrays(rho, u, v, p), axis=-1).astype(float)
    return conserved_from_primitive(model, prim)


def _wrap(x, a: float, b: float):
    return a + np.mod(x - a, b - a)


def advection_ic1(x):
    return _scalar(-np.sin(np.pi * x))


def advection_ic2(x):
    return _scalar(np.where(np.abs(x) <= 0.1, 1.0, 0.0))


def burgers_ic3(x):
    return _scalar(1.0 + 0.5 * np.sin(np.pi * x))


def burgers_ic4(x):
    x = np.asarray(x, dtype=float)
    conds = [np.abs(x) > 4, (x >= -1) & (x <= -0.5), (x >= -0.5) & (x <= 0), (x >= 0) & (x < 0.5)]
    return _scalar(np.select(conds, [np.sin(np.pi * x), 3.0, 1.0, 3.0], default=1.0))


def _riemann_1d(left, right, x0=0.0):
    def ic(x, gamma=1.4):
        m = SystemModel("euler1d", gamma=gamma)
        x = np.asarray(x, dtype=float)
        L = x < x0
        prim = [np.where(L, a, b) for a, b in zip(left, right)]
        return _euler1d(m, *prim)

    return ic


def _shu_osher(p_left: float, x0: float):
    def ic(x, gamma=1.4):
        m = SystemModel("euler1d", gamma=gamma)
        x = np.asarray(x, dtype=float)
        L = x < x0
        rho = np.where(L, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
        return _euler1d(m, rho, np.where(L, 2.629369, 0.0), np.where(L, p_left, 1.0))

    return ic


def blast_ic(x, gamma=1.4):
    m = SystemModel("euler1d", gamma=gamma)
    x = np.asarray(x, dtype=float)
    p = np.select([x < 0.1, x < 0.9], [1000.0, 0.01], default=100.0)
    return _euler1d(m, np.ones_like(x), 0.0, p)


def config3_ic(x, y, gamma=1.4):
    m = SystemModel("euler2d", gamma=gamma)
    east, north = x > 0.5, y > 0.5
    # (p, rho, u, v) per quadrant
    ne = (1.5, 1.5, 0.0, 0.0)
    nw = (0.3, 0.5323, 1.206, 0.0)
    sw = (0.029, 0.138, 1.206, 1.206)
    se = (0.3, 0.5323, 0.0, 1.206)
    out = []
    for k in range(4):
        out.append(np.where(north, np.where(east, ne[k], nw[k]), np.where(east, se[k], sw[k])))
    p, rho, u, v = out
    return _euler2d(m, rho, u, v, p)


def explosion_ic(x, y, gamma=1.4):
    m = SystemModel("euler2d", gamma=gamma)
    inside = x * x + y * y < 0.4**2
    return _euler2d(m, np.where(inside, 1.0, 0.125), 0.0, 0.0, np.where(inside, 1.0, 0.1))


def implosion_ic(x, y, gamma=1.4):
    m = SystemModel("euler2d", gamma=gamma)
    inside = np.abs(x) + np.abs(y) < 0.15
    return _euler2d(m, np.where(inside, 0.125, 1.0), 0.0, 0.0, np.where(inside, 0.14, 1.0))


# -------------------------------------------------------------- exact data


def advection_exact(ic, a: float = 1.0, bounds=(-1.0, 1.0)):
    def exact(x, t):
        return ic(_wrap(np.asarray(x, dtype=float) - a * t, *bounds))

    return exact


def burgers_ic3_exact(x, t, tol: float = NEWTON_TOL, max_iter: int = 100):
    """Solve ``u = 1 + sin(pi (x - u t))/2`` by Newton iteration from ``u0(x)``."""
    x = np.asarray(x, dtype=float)
    u = 1.0 + 0.5 * np.sin(np.pi * x)
    if t == 0:
        return u[..., None]
    for _ in range(max_iter):
        phase = np.pi * (x - u * t)
        g = u - 1.0 - 0.5 * np.sin(phase)
        dg = 1.0 + 0.5 * np.pi * t * np.cos(phase)
        u = u - g / dg
        if np.max(np.abs(u - 1.0 - 0.5 * np.sin(np.pi * (x - u * t))), initial=0.0) <= tol:
            break
    return u[..., None]


# ------------------------------------------------------------------ registry

_TUBE = ((-5.0, 5.0),)

_REGISTRY = {
    p.id: p
    for p in [
        ProblemSpec("advection-ic1", "advection", ((-1.0, 1.0),), ("periodic",), 0.5, 0.8, 80, "accuracy",
                    advection_ic1, advection_exact(advection_ic1), "u0 = -sin(pi x), smooth accuracy test"),
        ProblemSpec("advection-ic2", "advection", ((-1.0, 1.0),), ("periodic",), 2.0, 0.8, 200, "accuracy",
                    advection_ic2, advection_exact(advection_ic2), "square pulse |x| <= 0.1, one period"),
        ProblemSpec("burgers-ic3", "burgers", ((-1.0, 1.0),), ("periodic",), 1.0 / (2.0 * np.pi), 0.4, 80, "accuracy",
                    burgers_ic3, burgers_ic3_exact, "u0 = 1 + sin(pi x)/2 before shock formation"),
        ProblemSpec("burgers-ic4", "burgers", ((-4.0, 4.0),), ("periodic",), 0.5, 0.8, 80, "cfl",
                    burgers_ic4, None, "piecewise data with interacting shocks and rarefactions"),
        ProblemSpec("sod", "euler1d", _TUBE, ("transmissive",), 1.3, 0.25, 100, "cfl",
                    _riemann_1d((1.0, 0.0, 1.0), (0.125, 0.0, 0.1)), None, "Sod shock tube"),
        ProblemSpec("lax", "euler1d", _TUBE, ("transmissive",), 1.3, 0.25, 100, "cfl",
                    _riemann_1d((0.445, 0.698, 3.528), (0.5, 0.0, 0.571)), None, "Lax shock tube"),
        ProblemSpec("laney", "euler1d", _TUBE, ("transmissive",), 0.01, 0.25, 100, "cfl",
                    _riemann_1d((1.0, 0.0, 100000.0), (0.01, 0.0, 1000.0)), None, "strong pressure-ratio tube"),
        ProblemSpec("shu-osher", "euler1d", _TUBE, ("transmissive",), 1.8, 0.25, 400, "cfl",
                    _shu_osher(10.33333, -4.0), None, "shock/entropy-wave interaction, standard states"),
        ProblemSpec("shu-osher-variant", "euler1d", _TUBE, ("transmissive",), 1.8, 0.25, 400, "cfl",
                    _shu_osher(2.629369, 0.0), None, "shock/entropy-wave variant with p_left = 2.629369, x0 = 0"),
        ProblemSpec("blast", "euler1d", ((0.0, 1.0),), ("reflective",), 0.038, 0.25, 400, "cfl",
                    blast_ic, None, "two interacting blast waves between reflecting walls"),
        ProblemSpec("riemann2d-config3", "euler2d", ((0.0, 1.0), (0.0, 1.0)), ("transmissive", "transmissive"), 0.5, 0.25,
                    400, "cfl", config3_ic, None, "four-quadrant Riemann problem, configuration 3"),
        ProblemSpec("explosion", "euler2d", ((-3.0, 3.0), (-3.0, 3.0)), ("transmissive", "transmissive"), 3.2, 0.45,
                    400, "cfl", explosion_ic, None, "circular explosion, radius 0.4"),
        ProblemSpec("implosion", "euler2d", ((0.0, 0.3), (0.0, 0.3)), ("reflective", "reflective"), 3.2, 0.45,
                    400, "cfl", implosion_ic, None, "implosion, upper-right quadrant with reflecting walls"),
    ]
}


def get_problem(problem_id: str) -> ProblemSpec:
    key = problem_id.strip().lower()
    if key not in _REGISTRY:
        raise KeyError(f"unknown problem {problem_id!r}; registered: {', '.join(_REGISTRY)}")
    return _REGISTRY[key]


def list_problems() -> list[ProblemSpec]:
    return list(_REGISTRY.values())


def _spec(spec) -> ProblemSpec:
    return get_problem(spec) if isinstance(spec, str) else spec


def sample_ic(spec, *coords, gamma: float = 1.4) -> np.ndarray:
    spec = _spec(spec)
    if spec.model_id.startswith("euler"):
        return spec.ic(*coords, gamma=gamma)
    return spec.ic(*coords)


def initial_condition(spec, grid: Grid | int | None = None, gamma: float = 1.4) -> Field:
    """Point samples of the initial data at the cell centres of ``grid``."""
    spec = _spec(spec)
    if not isinstance(grid, Grid):
        grid = spec.grid(grid)
    if grid.ndim != spec.ndim:
        raise ValueError(f"{spec.id} is {spec.ndim}D; grid is {grid.ndim}D")
    for (a, b), (pa, pb) in zip(grid.bounds, spec.bounds):
        if a < pa or b > pb:
            raise ValueError(f"grid [{a}, {b}] leaves the domain of {spec.id}")
    return Field(grid, sample_ic(spec, *grid.mesh(), gamma=gamma), spec.bc, 0.0)


def exact_solution(spec, x, t: float) -> np.ndarray:
    spec = _spec(spec)
    if spec.exact is None:
        raise CapabilityError(f"no exact solution for {spec.id}")
    return spec.exact(x, t)
