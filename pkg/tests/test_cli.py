import io
import os
from contextlib import redirect_stdout

import numpy as np
import pytest

from tcfield import __version__
from tcfield.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main
from tcfield.config import RunConfig, load_config, parse_config_text
from tcfield.core import ParameterError
from tcfield.dynamics import s1_all_up
from tcfield.distributions import coherent


def _run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def _read(text):
    meta, rows, header = {}, [], None
    for line in text.splitlines():
        if line.startswith("# ") and ": " in line:
            k, v = line[2:].split(": ", 1)
            meta[k] = v
        elif line.startswith("#"):
            continue
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(x) for x in line.split(",")])
    return meta, header, np.array(rows)


def test_run_stdout_csv():
    code, out = _run(["run", "--observable", "s1", "-N", "2", "--distribution", "coherent:3",
                      "--tau-max", "2", "--steps", "5"])
    assert code == EXIT_OK
    assert out.splitlines()[0] == f"# tcfield {__version__}"
    meta, header, data = _read(out)
    assert header == ["tau", "value_re"]
    assert data.shape == (5, 2)
    assert meta["N"] == "2" and meta["beta"] == "0" and "threads" not in meta
    expected = s1_all_up(2, 0.0, coherent(3.0), np.linspace(0, 2, 5)).values
    np.testing.assert_allclose(data[:, 1], expected, rtol=1e-11, atol=1e-12)


def test_run_complex_columns_and_delta(tmp_path):
    out = tmp_path / "s2.csv"
    code, _ = _run(["run", "--observable", "s2", "-N", "1", "--distribution", "coherent:4",
                    "--delta", "1", "--steps", "11", "--tau-max", "1", "-o", str(out)])
    assert code == EXIT_OK
    meta, header, data = _read(out.read_text())
    assert header == ["tau", "value_re", "value_im"]
    assert meta["beta"] == "2"
    assert np.any(np.abs(data[:, 2]) > 1e-6)


def test_run_plot_written_next_to_csv(tmp_path):
    csv, png = tmp_path / "a.csv", tmp_path / "a.png"
    code, _ = _run(["run", "-N", "1", "--distribution", "fock:2", "--steps", "21",
                    "-o", str(csv), "--plot", str(png)])
    assert code == EXIT_OK
    assert csv.stat().st_size > 0 and png.read_bytes()[:4] == b"\x89PNG"


def test_run_closed_and_afa_methods():
    for extra in (["--method", "closed", "-N", "3"], ["--method", "afa", "-N", "3"],
                  ["--method", "closed", "-N", "4", "--corrected"]):
        code, out = _run(["run", "--distribution", "coherent:5", "--steps", "3"] + extra)
        assert code == EXIT_OK, extra


@pytest.mark.parametrize("argv", [
    ["run", "-N", "0"],
    ["run", "--observable", "s4", "--scenario", "all_up"],
    ["run", "--method", "afa", "--observable", "s4", "--scenario", "all_down"],
    ["run", "--method", "closed", "-N", "7"],
    ["run", "--method", "closed", "-N", "2", "--beta", "1"],
    ["run", "--distribution", "poisson:3"],
    ["run", "--steps", "1"],
    ["run", "--observable", "ee", "--scenario", "dicke:9", "-N", "2"],
    ["sweep", "--N", "1", "--nbar", "2", "--observable", "ee"],
    ["sweep", "--N", "0", "--nbar", "2"],
    ["preset", "fig1", "--threads", "0"],
])
def test_parameter_errors_exit_1(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "tcfield: error:" in capsys.readouterr().err


def test_truncation_error_exit_2(capsys):
    assert main(["run", "--distribution", "coherent:50", "--n-trunc", "10", "--steps", "3"]) == EXIT_NUMERIC
    assert "numerical error" in capsys.readouterr().err


def test_argparse_rejects_beta_and_delta():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--beta", "1", "--delta", "1"])
    assert exc.value.code == 2


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\nobservable = s4\nscenario = all_down\nN = 3  # three molecules\n"
                   "distribution = fock:2\ndelta = 4\nsteps = 7\ncorrected = yes\n")
    c = load_config(str(cfg), {"N": 2, "beta": None}).resolved()
    assert (c.observable, c.N, c.steps, c.beta, c.corrected) == ("s4", 2, 7, 4.0, True)
    c = load_config(str(cfg), {"beta": 0.5}).resolved()
    assert c.beta == 0.5
    code, out = _run(["run", "--config", str(cfg), "-N", "2", "--tau-max", "1"])
    assert code == EXIT_OK
    meta, _, data = _read(out)
    assert meta["N"] == "2" and meta["observable"] == "s4" and data.shape == (7, 2)


def test_config_errors(tmp_path):
    with pytest.raises(ParameterError):
        parse_config_text("colour = red\n")
    with pytest.raises(ParameterError):
        parse_config_text("N = three\n")
    with pytest.raises(ParameterError):
        parse_config_text("corrected = maybe\n")
    with pytest.raises(ParameterError):
        load_config(str(tmp_path / "missing.cfg"))
    with pytest.raises(ParameterError):
        RunConfig(beta=1.0, delta=1.0).resolved()
    assert parse_config_text("n_trunc = none\n") == {"n_trunc": None}


def test_sweep_sorted_rows():
    code, out = _run(["sweep", "--N", "4,1", "--nbar", "4,1", "--beta", "0", "--threads", "3"])
    assert code == EXIT_OK
    meta, header, data = _read(out)
    assert header == ["N", "nbar", "beta", "stationary_mean"]
    assert [tuple(r[:2]) for r in data] == [(1, 1), (1, 4), (4, 1), (4, 4)]
    assert abs(data[0, 3] - 0.5) < 1e-12
    assert abs(data[2, 3] - 1.66) < 0.02


def test_sweep_series_and_delta():
    code, out = _run(["sweep", "--N", "2", "--nbar", "3", "--family", "fock", "--delta", "0,1",
                      "--statistic", "series", "--steps", "4", "--tau-max", "1",
                      "--observable", "s4"])
    assert code == EXIT_OK
    meta, header, data = _read(out)
    assert header == ["N", "nbar", "beta", "tau", "value"] and data.shape == (8, 5)
    assert meta["scenario"] == "all_down"
    assert list(data[:, 2]) == [0, 0, 0, 0, 2, 2, 2, 2]


def test_sweep_empty_grid():
    code, out = _run(["sweep", "--N", "", "--nbar", "1"])
    assert code == EXIT_OK
    _, header, data = _read(out)
    assert header == ["N", "nbar", "beta", "stationary_mean"] and data.size == 0


def test_sweep_threads_identical():
    argv = ["sweep", "--N", "1,2,3", "--nbar", "2,5", "--beta", "0,1.5"]
    assert _run(argv + ["--threads", "1"])[1] == _run(argv + ["--threads", "4"])[1]


@pytest.mark.parametrize("name", ["figB1", "figE2", "collapse_revival"])
def test_preset_smoke(name, tmp_path):
    code, out = _run(["preset", name, "--outdir", str(tmp_path), "--format", "svg"])
    assert code == EXIT_OK
    paths = out.split()
    assert paths[-1].endswith(f"{name}.svg") and os.path.exists(paths[-1])
    for p in paths[:-1]:
        meta, _, data = _read(open(p).read())
        assert meta["figure"].startswith(name)
        assert data.shape[0] > 10


def test_preset_no_plot(tmp_path):
    code, out = _run(["preset", "figB2", "--outdir", str(tmp_path), "--no-plot", "--delta", "9"])
    assert code == EXIT_OK
    assert all(p.endswith(".csv") for p in out.split())
    meta, _, _ = _read((tmp_path / "figB2_detuned.csv").read_text())
    assert meta["beta"] == "6"


def test_validate_runs(capsys):
    code = main(["validate"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1].endswith("checks passed")


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "tcfield", "run", "--steps", "2", "--tau-max", "1",
                          "--distribution", "fock:0"], capture_output=True, text=True)
    assert res.returncode == 0 and "tau,value_re" in res.stdout
