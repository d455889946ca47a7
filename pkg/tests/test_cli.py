"""Config parsing, scenario execution, artifact layout, exit codes and
byte-level reproducibility of the command line front-end."""

import json

import pytest

from polyheat.cli import (
    ConfigError,
    RunConfig,
    config_text,
    main,
    parse_config_text,
)

MINIMAL = """
[run]
scenario = kernel-table

[kernel]
n = 1
m = 2
"""

SOLVE_FAST = """
[run]
scenario = solve-cauchy
figures = false

[kernel]
n = 1
m = 1

[fit]
basis_sizes = 32,64
lambda_sweep = logspace:-12,-4,9

[data]
benchmark = {kind}
"""


def _run(tmp_path, text, *extra):
    tmp_path.mkdir(parents=True, exist_ok=True)
    cfg_path = tmp_path / "run.ini"
    cfg_path.write_text(text)
    out = tmp_path / "out"
    return main(["run", str(cfg_path), "--out", str(out), *extra]), out


def test_config_round_trip():
    cfg = parse_config_text(MINIMAL)
    assert cfg == parse_config_text(config_text(cfg))


def test_defaults_round_trip():
    cfg = RunConfig(scenario="uniqueness-sweep")
    assert parse_config_text(config_text(cfg)) == cfg


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match=r"wibble.*line 3"):
        parse_config_text("[run]\nscenario = kernel-table\nwibble = 1\n")


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match=r"\[extras\]"):
        parse_config_text(MINIMAL + "\n[extras]\nx = 1\n")


def test_bad_value_diagnosed_with_line():
    with pytest.raises(ConfigError, match=r"'n' in \[kernel\] \(line 6\)"):
        parse_config_text(MINIMAL.replace("n = 1", "n = one"))


def test_scenario_required():
    with pytest.raises(ConfigError, match="scenario"):
        parse_config_text("[kernel]\nn = 1\nm = 1\n")


def test_kernel_table_run(tmp_path):
    code, out = _run(tmp_path, MINIMAL)
    assert code == 0
    lines = (out / "kernel_table.csv").read_text().splitlines()
    assert lines[0] == "s,phi,dphi"
    assert len(lines) == 242
    report = json.loads((out / "report.json").read_text())
    assert report["schema_version"] == 1
    assert report["scenario"] == "kernel-table"
    assert report["results"]["rows"] == 241
    # the echoed config reparses to the executed configuration
    echoed = parse_config_text(report["config_ini"])
    assert echoed.scenario == "kernel-table"
    assert echoed.out_dir == str(out)
    assert config_text(echoed) == report["config_ini"]


def test_repeat_runs_bit_identical(tmp_path):
    _, out1 = _run(tmp_path / "a", MINIMAL)
    _, out2 = _run(tmp_path / "b", MINIMAL)
    assert (out1 / "kernel_table.csv").read_bytes() \
        == (out2 / "kernel_table.csv").read_bytes()


def test_solve_cauchy_compatible(tmp_path):
    code, out = _run(tmp_path, SOLVE_FAST.format(kind="compatible"))
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["results"]["verdict"] == "compatible"
    assert report["results"]["residual_rel"] <= 1e-3
    assert (out / "reconstruction.csv").exists()
    assert (out / "residual_sweep.csv").exists()
    header = (out / "reconstruction.csv").read_text().splitlines()[0]
    assert header == "t,x,u,exact,abs_err"


def test_solve_cauchy_csv_determinism(tmp_path):
    _, out1 = _run(tmp_path / "a", SOLVE_FAST.format(kind="compatible"))
    _, out2 = _run(tmp_path / "b", SOLVE_FAST.format(kind="compatible"))
    for name in ("reconstruction.csv", "residual_sweep.csv",
                 "residual_by_size.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_fail_on_incompatible_exit_code(tmp_path):
    text = SOLVE_FAST.format(kind="incompatible").replace(
        "figures = false", "figures = false\nfail_on_incompatible = true")
    code, out = _run(tmp_path, text)
    assert code == 1
    report = json.loads((out / "report.json").read_text())
    assert report["results"]["verdict"] == "incompatible"
    assert not (out / "reconstruction.csv").exists()


def test_unsupported_dimension_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, MINIMAL.replace("n = 1", "n = 4"))
    assert code == 3
    assert "unsupported" in capsys.readouterr().err


def test_malformed_config_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, "[run]\nscenario = kernel-table\nbogus = 1\n")
    assert code == 2
    assert "bogus" in capsys.readouterr().err


def test_missing_config_exit_code(tmp_path):
    out = tmp_path / "out"
    assert main(["run", str(tmp_path / "none.ini"), "--out", str(out)]) == 2


def test_seed_override_echoed(tmp_path):
    code, out = _run(tmp_path, MINIMAL, "--seed", "42")
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["seed"] == 42
    assert "seed = 42" in report["config_ini"]


def test_figures_rendered(tmp_path):
    text = MINIMAL.replace("scenario = kernel-table",
                           "scenario = kernel-table\nfigures = true")
    code, out = _run(tmp_path, text)
    assert code == 0
    assert (out / "kernel_table.png").exists()
    report = json.loads((out / "report.json").read_text())
    assert "kernel_table.png" in report["artifacts"]


def test_bench_rows(tmp_path):
    cfg_path = tmp_path / "bench.ini"
    cfg_path.write_text(MINIMAL + "\n[bench]\nbatch = 5000\n"
                        "direct_batch = 40\nrepeats = 2\n"
                        "assembly_points = 256\nassembly_size = 32\n")
    out = tmp_path / "out"
    assert main(["bench", str(cfg_path), "--out", str(out)]) == 0
    lines = (out / "bench.csv").read_text().splitlines()
    assert lines[0].startswith("task,batch,repeats,median_s,p95_s")
    tasks = [l.split(",")[0] for l in lines[1:]]
    assert "kernel-table-backed" in tasks
    assert "kernel-direct-quadrature" in tasks
    assert "collocation-assembly" in tasks
