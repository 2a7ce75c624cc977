import numpy as np
import pytest

from spinclone.cloner import (
    CloneTask,
    clone_fidelity,
    closed_form_fidelity,
    heisenberg_optimum,
    optimal_pcc_bound,
    optimize,
    qudit_clone_fidelity,
    qudit_closed_form,
    time_to_threshold,
    universal_clone,
    universal_clone_fidelity,
    universal_input_spread,
    xy_optimum,
)

EQ = np.pi / 2.0


def star_task(M, lam, theta=EQ):
    return CloneTask.make("star", lam, theta, M=M)


def test_task_validation():
    with pytest.raises(ValueError):
        CloneTask.make("star", 0.0, -1.0, M=2)
    with pytest.raises(ValueError):
        CloneTask.make("star", 0.0, EQ, blank_policy="junk", M=2)


def test_blank_policy_auto():
    low = CloneTask.make("star", 0.0, 0.3, blank_policy="auto", M=1)
    assert np.allclose(low.blank_amplitudes(), [1.0, 0.0])
    high = CloneTask.make("star", 0.0, 3.0, blank_policy="auto", M=1)
    assert np.allclose(high.blank_amplitudes(), [0.0, 1.0])


@pytest.mark.parametrize("M", [1, 2, 3])
def test_xy_closed_form_at_optimum(M):
    B, t = xy_optimum(M)
    _, mean = clone_fidelity(star_task(M, 0.0), B, t)
    assert mean == pytest.approx(closed_form_fidelity("xy", M, EQ), abs=1e-12)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_heisenberg_closed_form_at_optimum(M):
    B, t = heisenberg_optimum(M)
    _, mean = clone_fidelity(star_task(M, 1.0), B, t)
    assert mean == pytest.approx(
        closed_form_fidelity("heisenberg", M, EQ), abs=1e-12)


def test_equatorial_xy_values():
    assert closed_form_fidelity("xy", 2, EQ) == pytest.approx(
        0.5 * (1.0 + 1.0 / np.sqrt(2.0)), abs=1e-15)
    assert closed_form_fidelity("xy", 4, EQ) == pytest.approx(0.75, abs=1e-15)


def test_pole_states_clone_perfectly():
    # theta = 0 input equals the blank state: fidelity 1 at all times
    _, mean = clone_fidelity(star_task(2, 0.0, theta=0.0), 0.7, 1.3)
    assert mean == pytest.approx(1.0, abs=1e-12)


def test_scan_engine_matches_dense():
    from spinclone.cloner import _ScanEngine

    task = star_task(3, 0.6, theta=1.1)
    engine = _ScanEngine(task)
    per_dense, mean_dense = clone_fidelity(task, 0.8, 2.3)
    assert engine.mean_fidelity(0.8, 2.3) == pytest.approx(mean_dense, abs=1e-12)
    per_fast = engine.per_site_fidelity(0.8, 2.3)
    assert np.allclose(per_fast, per_dense, atol=1e-12)


def test_optimize_xy_star_recovers_closed_form():
    report = optimize(star_task(2, 0.0),
                      B_grid=np.geomspace(0.05, 3.0, 25),
                      t_grid=np.arange(0.0, 12.0, 0.05))
    B, t = xy_optimum(2)
    assert report.mean_fidelity == pytest.approx(
        closed_form_fidelity("xy", 2, EQ), abs=1e-9)
    assert report.B_star == pytest.approx(B, abs=1e-3)
    assert report.t_star == pytest.approx(t, abs=1e-3)
    assert np.allclose(report.per_site_fidelity, report.mean_fidelity, atol=1e-9)


def test_optimize_heisenberg_star():
    report = optimize(star_task(2, 1.0),
                      B_grid=np.concatenate(([0.0], np.geomspace(0.05, 2.0, 15))),
                      t_grid=np.arange(0.0, 12.0, 0.05))
    assert report.mean_fidelity == pytest.approx(
        closed_form_fidelity("heisenberg", 2, EQ), abs=1e-9)
    assert report.t_star == pytest.approx(2.0 * np.pi / 3.0, abs=1e-3)


def test_optimize_threshold_time():
    t_grid = np.arange(0.0, 12.0, 0.05)
    report = optimize(star_task(2, 0.0),
                      B_grid=np.geomspace(0.05, 3.0, 25),
                      t_grid=t_grid, threshold_delta=0.01)
    assert report.t_threshold is not None
    assert 0.0 < report.t_threshold <= report.t_star + 1e-9
    direct = time_to_threshold(star_task(2, 0.0), report.B_star, 0.01,
                               report.mean_fidelity, t_grid=t_grid)
    assert direct == pytest.approx(report.t_threshold, abs=1e-6)


def test_optimize_rejects_empty_grids():
    with pytest.raises(ValueError):
        optimize(star_task(1, 0.0), B_grid=[], t_grid=[0.0, 1.0])


def test_pcc_bounds():
    assert optimal_pcc_bound(1, 2) == pytest.approx(
        0.5 * (1.0 + np.sqrt(8.0) / 4.0))
    assert optimal_pcc_bound(1, 3) == pytest.approx(5.0 / 6.0)
    assert optimal_pcc_bound(1, 4) == pytest.approx(
        0.5 * (1.0 + np.sqrt(24.0) / 8.0))
    assert optimal_pcc_bound(1, 2, d=3) == pytest.approx(
        1.0 / 3.0 + (1.0 + np.sqrt(17.0)) / 12.0)
    assert optimal_pcc_bound(2, 3) == pytest.approx(0.941)
    with pytest.raises(ValueError):
        optimal_pcc_bound(4, 9)


def test_universal_clone_maximum():
    best, g, table = universal_clone(2.0 * np.pi / 3.0,
                                     g_values=np.linspace(0.0, 2.0, 11))
    assert best == pytest.approx(13.0 / 18.0, abs=1e-9)
    assert len(table) == 11
    assert best >= max(f for _, f in table) - 1e-15


def test_universal_input_independence():
    t, g = 2.0 * np.pi / 3.0, 1.0
    mean, spread = universal_input_spread(t, g, n_inputs=25, seed=1)
    assert spread < 1e-10
    assert mean == pytest.approx(universal_clone_fidelity(t, g), abs=1e-10)


def test_qudit_effective_matches_closed_form():
    for d in (2, 3, 4, 5):
        B, t = xy_optimum(2)
        got = qudit_clone_fidelity(d, 2, B, t, mode="effective")
        assert got == pytest.approx(qudit_closed_form(d, 2), abs=1e-12)
    # qubit case reduces to the standard equatorial result
    assert qudit_closed_form(2, 2) == pytest.approx(
        closed_form_fidelity("xy", 2, EQ), abs=1e-15)


def test_qudit_full_matches_effective():
    d, M = 3, 2
    B, t = xy_optimum(M)
    eff = qudit_clone_fidelity(d, M, B, t, mode="effective")
    full = qudit_clone_fidelity(d, M, B, t, mode="full")
    assert full == pytest.approx(eff, abs=1e-9)


def test_qudit_phase_covariance():
    d, M = 3, 2
    B, t = xy_optimum(M)
    base = qudit_clone_fidelity(d, M, B, t)
    shifted = qudit_clone_fidelity(d, M, B, t, phases=[0.9, 4.4])
    assert shifted == pytest.approx(base, abs=1e-12)


def test_qudit_validation():
    with pytest.raises(ValueError):
        qudit_clone_fidelity(1, 2, 0.5, 1.0)
    with pytest.raises(ValueError):
        qudit_clone_fidelity(3, 2, 0.5, 1.0, mode="junk")
    with pytest.raises(ValueError):
        qudit_closed_form(4, 3)
