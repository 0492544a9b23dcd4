"""Error norms, observed orders, convergence tables and solution metrics."""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, NonPhysicalStateError, ParameterError
from .integrator import Field, TimeControl, run
from .problems import ProblemSpec, exact_solution, get_problem, initial_condition
from .schemes import FluxSchemeConfig

#: Marker returned by :func:`observed_order` when a rate is undefined.
UNDEFINED_RATE = float("nan")

SYMMETRIES = ("x-reflection", "y-reflection", "diagonal")


class ConvergenceRow(NamedTuple):
    n: int
    linf_err: float
    linf_rate: float | None
    l1_err: float
    l1_rate: float | None


def error_norms(numeric, exact, dx: float, component: int = 0) -> tuple[float, float]:
    """``(max |e|, sum |e| dx)`` of one component (scalars: the only one).

    1D arrays are taken as scalar fields; ``dx`` is the cell volume.
    """
    a = np.asarray(numeric.u if isinstance(numeric, Field) else numeric, dtype=float)
    b = np.asarray(exact, dtype=float)
    if a.shape != b.shape:
        raise ParameterError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.ndim > 1:
        a, b = a[..., component], b[..., component]
    e = np.abs(a - b)
    if e.size == 0:
        return 0.0, 0.0
    return float(e.max()), float(np.sum(e) * dx)


def observed_order(e_coarse: float, e_fine: float, ratio: float = 2.0) -> float:
    """``log(e_coarse/e_fine)/log(ratio)``; :data:`UNDEFINED_RATE` if either error is zero."""
    if e_coarse < 0 or e_fine < 0:
        raise ParameterError("errors must be non-negative")
    if e_coarse == 0 or e_fine == 0:
        return UNDEFINED_RATE
    return math.log(e_coarse / e_fine) / math.log(ratio)


def convergence_study(
    problem: ProblemSpec | str,
    scheme: FluxSchemeConfig,
    n_list: Sequence[int],
    tc: TimeControl | None = None,
    workers: int = 1,
) -> list[ConvergenceRow]:
    """Run ``problem`` on every N of ``n_list`` and tabulate errors against the exact solution."""
    spec = get_problem(problem) if isinstance(problem, str) else problem
    if spec.exact is None:
        raise ConfigurationError(f"{spec.id} has no exact solution")
    tc = spec.time_control() if tc is None else tc
    model = spec.model()
    rows: list[ConvergenceRow] = []
    prev = None
    for n in n_list:
        fld = initial_condition(spec, spec.grid(n, max(3, scheme.ghost_width)))
        try:
            out = run(fld, model, scheme, tc, workers=workers).field
        except NonPhysicalStateError as exc:
            raise NonPhysicalStateError(f"{exc.quantity} (N={n})", exc.index, exc.value, exc.time, exc.stage) from exc
        ex = exact_solution(spec, *out.grid.mesh(), out.time)
        linf, l1 = error_norms(out, ex, out.grid.cell_volume)
        if prev is None:
            rows.append(ConvergenceRow(n, linf, None, l1, None))
        else:
            ratio = n / prev.n
            rows.append(
                ConvergenceRow(n, linf, observed_order(prev.linf_err, linf, ratio), l1, observed_order(prev.l1_err, l1, ratio))
            )
        prev = rows[-1]
    return rows


def format_convergence_table(rows: Sequence[ConvergenceRow], title: str = "") -> str:
    """Plain-text table with rates to two decimals."""

    def rate(r):
        return "-" if r is None else ("nan" if math.isnan(r) else f"{r:.2f}")

    lines = [title] if title else []
    lines.append(f"{'N':>6} {'Linf error':>22} {'Rate':>6} {'L1 error':>22} {'Rate':>6}")
    for r in rows:
        lines.append(f"{r.n:>6} {r.linf_err:>22.15e} {rate(r.linf_rate):>6} {r.l1_err:>22.15e} {rate(r.l1_rate):>6}")
    return "\n".join(lines)


def oscillation_metrics(fld, bounds: tuple[float, float]) -> tuple[float, float]:
    """``(max(0, max u - upper), max(0, lower - min u))`` for a scalar field."""
    u = np.asarray(fld.u if isinstance(fld, Field) else fld, dtype=float)
    if u.ndim > 1:
        if u.shape[-1] != 1:
            raise ParameterError("oscillation metrics need a scalar field")
        u = u[..., 0]
    lo, hi = bounds
    return max(0.0, float(u.max()) - hi), max(0.0, lo - float(u.min()))


def symmetry_check_2d(fld: Field, symmetry: str) -> float:
    """Largest deviation of a 2D Euler field from its image under ``symmetry``.

    Reflections are about the domain midlines; the diagonal map swaps x and y.
    """
    if symmetry not in SYMMETRIES:
        raise ParameterError(f"symmetry must be one of {SYMMETRIES}")
    g = fld.grid
    if g.ndim != 2 or fld.u.shape[-1] != 4:
        raise ParameterError("symmetry checks need a 2D Euler field")
    u = fld.u
    if symmetry == "x-reflection":
        img = u[::-1, :].copy()
        img[..., 1] *= -1.0
    elif symmetry == "y-reflection":
        img = u[:, ::-1].copy()
        img[..., 2] *= -1.0
    else:
        if g.n[0] != g.n[1] or g.bounds[0] != g.bounds[1]:
            raise ParameterError("diagonal symmetry needs identical x and y axes")
        img = np.swapaxes(u, 0, 1)[..., [0, 2, 1, 3]]
    return float(np.max(np.abs(u - img)))
