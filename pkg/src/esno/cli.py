"""Command-line driver: single runs, convergence studies and entropy reports.

Exit status: 0 success, 1 usage or configuration error, 2 solver abort,
3 output failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError, NonPhysicalStateError, ParameterError
from .esflux import JUMP_VARIABLES, SELECTOR_MODES, SelectorConfig
from .harness import ConvergenceRow, convergence_study, format_convergence_table
from .integrator import Field, run
from .models import SystemModel, primitive_from_conserved
from .problems import ProblemSpec, get_problem, initial_condition, list_problems
from .reconstruction import SPLITTING_MODES
from .schemes import FluxSchemeConfig, parse_scheme_name, render_scheme_name

EXIT_OK, EXIT_USAGE, EXIT_ABORT, EXIT_IO = 0, 1, 2, 3

SOLUTION_HEADERS = {
    "advection": ("x", "u"),
    "burgers": ("x", "u"),
    "euler1d": ("x", "rho", "u", "p"),
    "euler2d": ("x", "y", "rho", "u", "v", "p"),
}
CONVERGENCE_HEADER = ("N", "Linf", "Linf_rate", "L1", "L1_rate")

# config-file keys and their parsers; names match the long flags
_KEYS = {
    "problem": str,
    "scheme": str,
    "nx": int,
    "ny": int,
    "cfl": float,
    "accuracy_dt": None,
    "t_final": float,
    "selector": str,
    "jump": str,
    "weno_eps": float,
    "splitting": str,
    "out": str,
    "diagnostics": None,
    "convergence": str,
    "workers": int,
}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemSpec
    scheme: FluxSchemeConfig
    nx: int
    ny: int | None
    dt_mode: str
    cfl: float
    t_final: float
    out: Path
    diagnostics: bool
    convergence: tuple[int, ...] | None
    workers: int

    @property
    def stem(self) -> str:
        return f"{self.problem.id}_{render_scheme_name(self.scheme)}"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="esno", description="Entropy-stable non-oscillatory finite-difference solver.")
    p.add_argument("--problem", help="problem id (see --list)")
    p.add_argument("--scheme", help="EC<m>-<FAMILY>-<n>, <FAMILY>-<n> or EC<m>; default EC6-WENOJS-5")
    p.add_argument("--nx", type=int, help="cells along x")
    p.add_argument("--ny", type=int, help="cells along y (2D; defaults to nx)")
    p.add_argument("--cfl", type=float, help="CFL number (selects the CFL time step)")
    p.add_argument("--accuracy-dt", action="store_true", default=None, help="use dt = dx^(5/3)")
    p.add_argument("--t-final", type=float, help="final time")
    p.add_argument("--selector", choices=SELECTOR_MODES)
    p.add_argument("--jump", choices=JUMP_VARIABLES)
    p.add_argument("--weno-eps", type=float)
    p.add_argument("--splitting", choices=SPLITTING_MODES, help="Lax-Friedrichs splitting speed")
    p.add_argument("--out", help="output directory (default: current directory)")
    p.add_argument("--diagnostics", action="store_true", default=None, help="write the entropy report")
    p.add_argument("--convergence", help="comma-separated N list; runs a convergence study")
    p.add_argument("--workers", type=int, help="threads for 2D sweeps (0 = all CPUs)")
    p.add_argument("--config", help="flat 'key = value' file; flags override it")
    p.add_argument("--list", action="store_true", help="list registered problems and exit")
    return p


def read_config_file(path: str | os.PathLike) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_").lower()
            if key not in _KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            conv = _KEYS[key]
            if conv is None:
                low = val.lower()
                if low not in _TRUE | _FALSE:
                    raise UsageError(f"{path}:{lineno}: {key} expects a boolean")
                values[key] = low in _TRUE
            else:
                try:
                    values[key] = conv(val)
                except ValueError:
                    raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        ns = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise UsageError(f"--convergence expects comma-separated integers, got {text!r}") from None
    if not ns or any(n < 4 for n in ns):
        raise UsageError("--convergence needs grid sizes of at least 4 cells")
    return ns


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over config-file keys over registry defaults."""
    merged = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if "problem" not in merged:
        raise UsageError("--problem is required")
    try:
        spec = get_problem(merged["problem"])
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None

    ns_opts = {}
    if "weno_eps" in merged:
        ns_opts["epsilon"] = merged["weno_eps"]
    if "splitting" in merged:
        ns_opts["splitting"] = merged["splitting"]
    try:
        scheme = parse_scheme_name(merged.get("scheme", "EC6-WENOJS-5"), **ns_opts)
        selector = SelectorConfig(mode=merged.get("selector", "interface"), jump_variable=merged.get("jump", "conserved"))
    except (ConfigurationError, ParameterError) as exc:
        raise UsageError(str(exc)) from None
    scheme = scheme.with_options(selector=selector)

    if merged.get("accuracy_dt"):
        mode = "accuracy"
    elif "cfl" in merged:
        mode = "cfl"
    else:
        mode = spec.dt_mode
    nx = merged.get("nx", spec.n_default)
    ny = merged.get("ny", nx) if spec.ndim == 2 else None
    workers = merged.get("workers", 1)
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers < 0:
        raise UsageError("--workers must be non-negative")
    conv = _parse_n_list(merged["convergence"]) if merged.get("convergence") else None
    return RunConfig(
        problem=spec,
        scheme=scheme,
        nx=nx,
        ny=ny,
        dt_mode=mode,
        cfl=merged.get("cfl", spec.cfl),
        t_final=merged.get("t_final", spec.t_final),
        out=Path(merged.get("out", ".")),
        diagnostics=bool(merged.get("diagnostics", False)),
        convergence=conv,
        workers=workers,
    )


# ----------------------------------------------------------------- writers


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_solution_csv(path: Path, fld: Field, model_id: str, gamma: float = 1.4) -> None:
    model = SystemModel(model_id, gamma=gamma)
    prim = primitive_from_conserved(model, fld.u)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SOLUTION_HEADERS[model_id])
        if fld.grid.ndim == 1:
            for x, row in zip(fld.grid.centers(0), prim):
                w.writerow([_fmt(x), *map(_fmt, row)])
        else:
            xs, ys = fld.grid.centers(0), fld.grid.centers(1)
            for j, y in enumerate(ys):
                for i, x in enumerate(xs):
                    w.writerow([_fmt(x), _fmt(y), *map(_fmt, prim[i, j])])


def write_convergence_csv(path: Path, rows: list[ConvergenceRow]) -> None:
    def rate(r):
        return "" if r is None else _fmt(r)

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CONVERGENCE_HEADER)
        for r in rows:
            w.writerow([r.n, _fmt(r.linf_err), rate(r.linf_rate), _fmt(r.l1_err), rate(r.l1_rate)])


def write_entropy_csv(path: Path, report) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(report.HEADER)
        for row in report.rows:
            w.writerow([_fmt(v) for v in row])


# ------------------------------------------------------------------ driver


def execute(cfg: RunConfig, stdout=sys.stdout) -> list[Path]:
    """Run ``cfg`` and return the files written."""
    spec = cfg.problem
    model = spec.model()
    tc = spec.time_control(t_final=cfg.t_final, cfl=cfg.cfl, mode=cfg.dt_mode)
    ghost = max(3, cfg.scheme.ghost_width)
    written = []
    cfg.out.mkdir(parents=True, exist_ok=True)
    if cfg.convergence:
        rows = convergence_study(spec, cfg.scheme, cfg.convergence, tc, cfg.workers)
        path = cfg.out / f"{cfg.stem}_convergence.csv"
        write_convergence_csv(path, rows)
        written.append(path)
        print(format_convergence_table(rows, f"{spec.id} {render_scheme_name(cfg.scheme)}"), file=stdout)
        return written

    n = cfg.nx if spec.ndim == 1 else (cfg.nx, cfg.ny)
    fld = initial_condition(spec, spec.grid(n, ghost))
    result = run(fld, model, cfg.scheme, tc, diagnostics=cfg.diagnostics, workers=cfg.workers)
    path = cfg.out / f"{cfg.stem}.csv"
    write_solution_csv(path, result.field, spec.model_id)
    written.append(path)
    if result.report is not None:
        epath = cfg.out / f"{cfg.stem}_entropy.csv"
        write_entropy_csv(epath, result.report)
        written.append(epath)
        print(
            f"entropy: max cell residual {result.report.max_cell_residual:.3e}, "
            f"min dissipation {result.report.min_dissipation:.3e}, "
            f"dissipation violations {result.report.violations}",
            file=stdout,
        )
    print(f"{spec.id} {render_scheme_name(cfg.scheme)}: {result.steps} steps to t={result.field.time:.17g}", file=stdout)
    return written


def _list(stdout) -> None:
    for p in list_problems():
        dom = " x ".join(f"[{a:g},{b:g}]" for a, b in p.bounds)
        meta = f"T={p.t_final:.6g} CFL={p.cfl:g} N={p.n_default}"
        print(f"{p.id:20s} {p.model_id:9s} {dom:18s} {meta} {p.description}", file=stdout)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.list:
            _list(stdout)
            return EXIT_OK
        cfg = resolve_config(args)
    except UsageError as exc:
        print(f"esno: error: {exc}", file=stderr)
        if "unknown problem" not in str(exc):
            print(parser.format_usage().rstrip(), file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"esno: cannot read config: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        for path in execute(cfg, stdout):
            print(f"wrote {path}", file=stdout)
    except NonPhysicalStateError as exc:
        print(f"esno: solver aborted: {exc}", file=stderr)
        return EXIT_ABORT
    except (ConfigurationError, ParameterError) as exc:
        print(f"esno: error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"esno: output failed: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
