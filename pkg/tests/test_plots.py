import numpy as np
import pytest

from spinclone_plots import cli as plot_cli
from spinclone_plots.render import (
    REQUIRED_COLUMNS,
    FigureJob,
    SchemaError,
    load_table,
    render,
)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def fig2_csv(tmp_path, name="fig2.csv"):
    path = tmp_path / name
    thetas = np.linspace(0.0, np.pi, 7)
    rows = [[f"{t:.6f}", f"{0.8 + 0.05 * np.sin(t):.6f}",
             f"{0.75 + 0.05 * np.sin(t):.6f}"] for t in thetas]
    write_csv(path, ["theta", "F_xy", "F_heisenberg"], rows)
    return path


def test_job_validation():
    with pytest.raises(SchemaError):
        FigureJob("fig99", ("a.csv",), "out")
    with pytest.raises(SchemaError):
        FigureJob("fig2", (), "out")


def test_load_table_schema_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaError, match="empty"):
        load_table(str(empty), REQUIRED_COLUMNS["fig2"])
    wrong = tmp_path / "wrong.csv"
    write_csv(wrong, ["theta", "F_xy"], [["0", "0.8"]])
    with pytest.raises(SchemaError, match="F_heisenberg"):
        load_table(str(wrong), REQUIRED_COLUMNS["fig2"])
    headeronly = tmp_path / "headeronly.csv"
    write_csv(headeronly, ["theta", "F_xy", "F_heisenberg"], [])
    with pytest.raises(SchemaError, match="no data rows"):
        load_table(str(headeronly), REQUIRED_COLUMNS["fig2"])


def test_render_fig2(tmp_path):
    path = fig2_csv(tmp_path)
    written = render(FigureJob("fig2", (str(path),), str(tmp_path / "out")))
    assert sorted(p.rsplit(".", 1)[1] for p in written) == ["png", "svg"]
    for p in written:
        assert (tmp_path / p.rsplit("/", 1)[1]).stat().st_size > 0


def test_render_deterministic(tmp_path):
    path = fig2_csv(tmp_path)
    render(FigureJob("fig2", (str(path),), str(tmp_path / "one")))
    render(FigureJob("fig2", (str(path),), str(tmp_path / "two")))
    assert (tmp_path / "one.svg").read_bytes() == (tmp_path / "two.svg").read_bytes()
    assert (tmp_path / "one.png").read_bytes() == (tmp_path / "two.png").read_bytes()


def test_render_all_figure_families(tmp_path):
    tables = {
        "fig3": (["M", "F_xy", "F_heisenberg", "F_pcc"],
                 [[m, 0.8, 0.75, 0.85] for m in (2, 3, 4)]),
        "fig4": (["epsilon", "mu", "mean_F", "stderr"],
                 [[e, mu, 0.85 - e, 0.001] for e in (0.0, 0.1, 0.2)
                  for mu in (0.0, 0.5)]),
        "fig6": (["delta", "target", "mean_F", "stderr"],
                 [[d, t, 0.85 - 0.1 * d, 0.001] for d in (0.0, 0.5, 1.0)
                  for t in ("J", "B")]),
        "fig7": (["alpha", "M", "F_network", "F_gates"],
                 [[a, 2, 0.85 - a, 0.84 - 2 * a] for a in (1e-4, 1e-3, 1e-2)]),
        "fig12": (["ratio", "F_max"], [[r, 0.85 - r] for r in (0.0, 0.1, 0.2)]),
    }
    for fig, (header, rows) in tables.items():
        path = tmp_path / f"{fig}.csv"
        write_csv(path, header, rows)
        written = render(FigureJob(fig, (str(path),), str(tmp_path / fig)))
        assert len(written) == 2


def test_fig8_requires_m3_rows(tmp_path):
    path = tmp_path / "m2only.csv"
    write_csv(path, ["alpha", "M", "F_network", "F_gates"],
              [[1e-3, 2, 0.8, 0.82]])
    with pytest.raises(SchemaError, match="M = 3"):
        render(FigureJob("fig8", (str(path),), str(tmp_path / "f8")))


def test_multi_csv_concatenation(tmp_path):
    a = fig2_csv(tmp_path, "a.csv")
    b = fig2_csv(tmp_path, "b.csv")
    written = render(FigureJob("fig2", (str(a), str(b)), str(tmp_path / "cat")))
    assert len(written) == 2


def test_plot_cli_exit_codes(tmp_path, capsys):
    path = fig2_csv(tmp_path)
    assert plot_cli.main(["--figure", "fig2", "--csv", str(path),
                          "--out", str(tmp_path / "cli_out")]) == 0
    out = capsys.readouterr().out
    assert "cli_out.svg" in out
    wrong = tmp_path / "wrong.csv"
    write_csv(wrong, ["theta"], [["0"]])
    assert plot_cli.main(["--figure", "fig2", "--csv", str(wrong),
                          "--out", str(tmp_path / "nope")]) == 2
    assert "schema error" in capsys.readouterr().err
