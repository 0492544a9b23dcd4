import numpy as np
import pytest

from _support import MODELS, random_states
from esno.errors import ConfigurationError, NonPhysicalStateError, ParameterError
from esno.esflux import SelectorConfig
from esno.harness import symmetry_check_2d
from esno.integrator import (
    EntropyReport,
    Field,
    Grid,
    TimeControl,
    apply_boundary,
    compute_dt,
    entropy_snapshot,
    pad_axis0,
    run,
    semi_discrete_rhs,
    ssp_rk3_step,
    step_2d,
)
from esno.models import SystemModel, conserved_from_primitive
from esno.problems import get_problem, initial_condition
from esno.schemes import parse_scheme_name

ADV, BURGERS, E1, E2 = (MODELS[k] for k in ("advection", "burgers", "euler1d", "euler2d"))
SCHEMES = ["EC6-WENOJS-5", "EC4-ENO-3", "EC2-WENOZ-3", "ENO-2", "LLF-1", "EC6"]


def periodic_field(u, bounds=(-1.0, 1.0)):
    return Field(Grid.uniform((bounds,), len(u), 3), u, "periodic")


# ---------------------------------------------------------------- boundaries


def test_periodic_padding_example():
    up = pad_axis0(np.array([1.0, 2.0, 3.0, 4.0])[:, None], 1, "periodic")
    np.testing.assert_array_equal(up[:, 0], [4, 1, 2, 3, 4, 1])


def test_reflective_padding_negates_normal_momentum():
    u = np.tile([1.0, 0.3, 2.5], (4, 1))
    up = pad_axis0(u, 1, "reflective", normal=1)
    np.testing.assert_array_equal(up[0], [1.0, -0.3, 2.5])
    np.testing.assert_array_equal(up[-1], [1.0, -0.3, 2.5])


def test_transmissive_padding_copies_edge_cells():
    up = pad_axis0(np.arange(5.0)[:, None], 2, "transmissive")
    np.testing.assert_array_equal(up[:, 0], [0, 0, 0, 1, 2, 3, 4, 4, 4])


def test_padding_errors():
    with pytest.raises(ConfigurationError):
        pad_axis0(np.zeros((4, 1)), 2, "outflow")
    with pytest.raises(ConfigurationError):
        pad_axis0(np.zeros((2, 1)), 3, "periodic")


def test_2d_reflective_walls_flip_their_own_momentum():
    g = Grid.uniform(((0, 1), (0, 1)), 4, 1)
    u = np.tile([1.0, 0.2, 0.3, 2.5], (4, 4, 1))
    up = apply_boundary(Field(g, u, "reflective"), E2, 1)
    np.testing.assert_array_equal(up[0, 1], [1.0, -0.2, 0.3, 2.5])
    np.testing.assert_array_equal(up[1, 0], [1.0, 0.2, -0.3, 2.5])


# --------------------------------------------------------------- validation


def test_grid_field_timecontrol_validation():
    with pytest.raises(ConfigurationError):
        Grid.uniform(((0, 1),), 3, 1)
    with pytest.raises(ConfigurationError):
        Grid.uniform(((1, 0),), 10, 1)
    with pytest.raises(ConfigurationError):
        Grid.uniform(((0, 1),), 4, 5)
    g = Grid.uniform(((0, 1),), 8, 3)
    with pytest.raises(ConfigurationError):
        Field(g, np.zeros((7, 1)), "periodic")
    with pytest.raises(ConfigurationError):
        Field(g, np.zeros((8, 1)), "open")
    with pytest.raises(ParameterError):
        TimeControl(mode="fixed")
    with pytest.raises(ParameterError):
        TimeControl(cfl=0.0)


def test_centres_are_mirror_symmetric():
    c = Grid.uniform(((-3.0, 3.0),), 101, 3).centers()
    np.testing.assert_array_equal(c, -c[::-1])


def test_rhs_needs_enough_ghosts():
    f = Field(Grid.uniform(((0, 1),), 8, 2), np.ones((8, 1)), "periodic")
    with pytest.raises(ConfigurationError):
        semi_discrete_rhs(f, BURGERS, parse_scheme_name("EC6-WENOJS-5"))


# --------------------------------------------------------------- residual


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("mid", list(MODELS))
def test_constant_field_has_zero_residual(mid, scheme, rng):
    model = MODELS[mid]
    c = random_states(model, 1, rng)[0]
    n = (12,) * model.ndim
    g = Grid.uniform(((0.0, 1.0),) * model.ndim, n, 3)
    L = semi_discrete_rhs(Field(g, np.broadcast_to(c, n + (model.m,)).copy(), "transmissive"), model, parse_scheme_name(scheme))
    assert np.max(np.abs(L)) <= 1e-12 * max(1.0, np.max(np.abs(c)))


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("mid", ["burgers", "euler1d", "euler2d"])
def test_periodic_residual_is_conservative(mid, scheme, rng):
    model = MODELS[mid]
    n = (16,) * model.ndim
    u = random_states(model, int(np.prod(n)), rng).reshape(n + (model.m,))
    g = Grid.uniform(((0.0, 1.0),) * model.ndim, n, 3)
    L = semi_discrete_rhs(Field(g, u, "periodic"), model, parse_scheme_name(scheme))
    total = np.sum(L.reshape(-1, model.m), axis=0)
    assert np.all(np.abs(total) <= 1e-11 * np.sum(np.abs(L.reshape(-1, model.m)), axis=0) + 1e-12)


def test_advection_residual_order_ec4_eno3():
    errs = []
    for n in (40, 80, 160):
        f = periodic_field(np.sin(np.pi * Grid.uniform(((-1, 1),), n).centers())[:, None])
        L = semi_discrete_rhs(f, ADV, parse_scheme_name("EC4-ENO-3"))
        x = f.grid.centers()
        errs.append(np.sum(np.abs(L[:, 0] + np.pi * np.cos(np.pi * x))) * f.grid.dx)
    assert np.log2(errs[-2] / errs[-1]) == pytest.approx(3.0, abs=0.3)


def test_cell_entropy_inequality_scalar(rng):
    """v_i L_i + [[q_hat]]_i/dx <= 0 on rough periodic Burgers data for every gated scheme."""
    u = rng.uniform(-2, 2, size=(64, 1))
    for name in ("EC6-WENOJS-5", "EC4-ENO-3", "EC2-LLF-1", "EC6-WENOZ-3"):
        _, res, _, min_diss, viol = entropy_snapshot(periodic_field(u), BURGERS, parse_scheme_name(name))
        assert np.max(res) <= 1e-12
        assert viol == 0 and min_diss >= -1e-12


def test_pure_ec_scheme_conserves_entropy_per_cell(rng):
    u = rng.uniform(0.5, 2.0, size=(32, 1))
    _, res, chi, _, _ = entropy_snapshot(periodic_field(u), BURGERS, parse_scheme_name("EC6"))
    assert np.max(np.abs(res)) <= 1e-12 and chi == 0.0


def test_entropy_jump_mode_is_dissipative_for_sod():
    spec = get_problem("sod")
    scheme = parse_scheme_name("EC6-WENOJS-5").with_options(selector=SelectorConfig(jump_variable="entropy"))
    fld = initial_condition(spec, 100)
    _, res, _, _, viol = entropy_snapshot(fld, spec.model(), scheme)
    assert viol == 0 and np.max(res) <= 1e-10


# ------------------------------------------------------------- time steps


def test_dt_examples():
    g = Grid.uniform(((0.0, 2.0),), 20, 3)
    f = Field(g, np.full((20, 1), 2.0), "periodic")
    assert compute_dt(f, BURGERS, TimeControl("cfl", 0.25, 10.0)) == pytest.approx(0.0125, rel=1e-15)
    assert compute_dt(f, BURGERS, TimeControl("accuracy", 0.25, 10.0)) == pytest.approx(0.02154434690, rel=1e-10)
    f.time = 10.0 - 1e-5
    assert compute_dt(f, BURGERS, TimeControl("cfl", 0.25, 10.0)) == pytest.approx(1e-5, rel=1e-9)


def test_dt_falls_back_when_wavespeed_vanishes():
    g = Grid.uniform(((0.0, 1.0),), 10, 3)
    f = Field(g, np.zeros((10, 1)), "periodic")
    assert compute_dt(f, BURGERS, TimeControl("cfl", 0.5, 1.0)) == pytest.approx(0.05)


def test_rk3_amplification_factor():
    f = periodic_field(np.ones((8, 1)))
    out = ssp_rk3_step(f, ADV, None, 0.1, rhs=lambda fld: -fld.u)
    np.testing.assert_allclose(out.u, 1 - 0.1 + 0.005 - 0.1**3 / 6, rtol=1e-15)
    same = ssp_rk3_step(f, ADV, None, 0.1, rhs=lambda fld: np.zeros_like(fld.u))
    np.testing.assert_array_equal(same.u, f.u)
    with pytest.raises(ParameterError):
        ssp_rk3_step(f, ADV, None, 0.0, rhs=lambda fld: fld.u)


def test_rk3_temporal_order_with_spectral_space():
    n = 32
    g = Grid.uniform(((0.0, 2 * np.pi),), n, 3)
    x = g.centers()
    k = 1j * np.fft.fftfreq(n, 1.0 / n)

    def rhs(fld):
        return -np.real(np.fft.ifft(k * np.fft.fft(fld.u[:, 0])))[:, None]

    errs = []
    for steps in (20, 40, 80):
        f = Field(g, np.sin(x)[:, None], "periodic")
        dt = 1.0 / steps
        for _ in range(steps):
            f = ssp_rk3_step(f, ADV, None, dt, rhs=rhs)
        errs.append(np.sum(np.abs(f.u[:, 0] - np.sin(x - 1.0))) * g.dx)
    assert np.log2(errs[-2] / errs[-1]) == pytest.approx(3.0, abs=0.1)


def test_abort_reports_stage_and_time():
    fe = Field(Grid.uniform(((0, 1),), 8, 3), np.tile([1.0, 0.0, 2.5], (8, 1)), "periodic")

    def crush(fld):
        return np.tile([-100.0, 0.0, 0.0], (8, 1))

    with pytest.raises(NonPhysicalStateError) as exc:
        ssp_rk3_step(fe, E1, None, 0.1, rhs=crush)
    assert exc.value.stage == 2 and exc.value.time == pytest.approx(0.1)
    assert exc.value.quantity == "density" and "RK stage 2" in str(exc.value)


def test_run_lands_on_final_time_and_records():
    f = periodic_field(np.sin(np.pi * Grid.uniform(((-1, 1),), 20).centers())[:, None])
    seen = []
    res = run(f, ADV, parse_scheme_name("EC4-ENO-3"), TimeControl("cfl", 0.8, 0.3), diagnostics=True,
              monitor=lambda s, fld: seen.append((s, fld.time)))
    assert res.field.time == 0.3 and seen[0] == (0, 0.0) and seen[-1] == (res.steps, 0.3)
    t = res.report.column("t")
    assert len(t) == res.steps + 1 and np.all(np.diff(t) > 0)
    assert res.report.HEADER == EntropyReport.HEADER


def test_max_steps_stops_early():
    f = periodic_field(np.ones((8, 1)))
    assert run(f, ADV, parse_scheme_name("ENO-2"), TimeControl("cfl", 0.5, 10.0), max_steps=3).steps == 3


# ---------------------------------------------------------------------- 2D


def _sod_rows(ny):
    sod = get_problem("sod")
    f1 = initial_condition(sod, 100)
    u2 = np.zeros((100, ny, 4))
    u2[..., [0, 1, 3]] = f1.u[:, None, :]
    return f1, Field(Grid.uniform(((-5, 5), (0, 1)), (100, ny), 3), u2, ("transmissive", "periodic"))


def test_2d_rows_match_1d_solver():
    scheme = parse_scheme_name("EC6-WENOJS-5")
    f1, f2 = _sod_rows(6)
    for _ in range(20):
        f1 = ssp_rk3_step(f1, E1, scheme, 0.01)
        f2 = step_2d(f2, E2, scheme, 0.01)
    U = f2.u
    assert np.max(np.abs(U - U[:, :1])) <= 1e-13
    assert np.max(np.abs(U[:, 0][:, [0, 1, 3]] - f1.u)) <= 1e-13
    assert np.max(np.abs(U[..., 2])) == 0.0


def test_constant_2d_field_unchanged():
    g = Grid.uniform(((0, 1), (0, 2)), (8, 10), 3)
    c = conserved_from_primitive(E2, [1.2, 0.3, -0.4, 2.0])
    f = Field(g, np.broadcast_to(c, (8, 10, 4)).copy(), "periodic")
    out = step_2d(f, E2, parse_scheme_name("EC6-WENOJS-5"), 0.01)
    np.testing.assert_allclose(out.u, f.u, rtol=1e-14, atol=1e-14)
    with pytest.raises(ConfigurationError):
        step_2d(periodic_field(np.ones((8, 1))), ADV, parse_scheme_name("ENO-2"), 0.1)


def test_small_explosion_keeps_symmetry():
    spec = get_problem("explosion")
    f = initial_condition(spec, 40)
    res = run(f, spec.model(), parse_scheme_name("EC6-WENOJS-5"), spec.time_control(t_final=0.3))
    for sym in ("x-reflection", "y-reflection", "diagonal"):
        assert symmetry_check_2d(res.field, sym) <= 1e-12


def test_worker_count_does_not_change_results():
    spec = get_problem("riemann2d-config3")
    scheme = parse_scheme_name("EC4-WENOZ-5")
    tc = spec.time_control(t_final=0.02)
    a = run(initial_condition(spec, (24, 20)), spec.model(), scheme, tc, diagnostics=True, workers=1)
    b = run(initial_condition(spec, (24, 20)), spec.model(), scheme, tc, diagnostics=True, workers=3)
    assert a.steps == b.steps
    np.testing.assert_array_equal(a.field.u, b.field.u)
    assert a.report.rows == b.report.rows


def test_burgers_mass_is_conserved_per_step():
    spec = get_problem("burgers-ic4")
    f = initial_condition(spec)
    mass = []
    run(f, spec.model(), parse_scheme_name("EC6-WENOJS-5"), spec.time_control(),
        monitor=lambda s, fld: mass.append(fld.u.sum() * fld.grid.dx))
    norm = np.sum(np.abs(f.u)) * f.grid.dx
    assert np.max(np.abs(np.diff(mass))) <= 1e-12 * norm


def test_model_gamma_enters_flux():
    a = SystemModel("euler1d", gamma=1.4)
    b = SystemModel("euler1d", gamma=5 / 3)
    f = initial_condition(get_problem("sod"), 20)
    s = parse_scheme_name("EC4-ENO-3")
    assert not np.array_equal(semi_discrete_rhs(f, a, s), semi_discrete_rhs(f, b, s))
