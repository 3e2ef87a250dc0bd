import pytest

from energy_coverage.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from energy_coverage.scenario import bundled_text


def test_validate_bundled(capsys):
    assert main(["validate", "scenario1"]) == EXIT_OK
    assert "6 robots" in capsys.readouterr().out


def test_validate_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(bundled_text("scenario1").replace("alpha: 5", "alpha: 0"))
    assert main(["validate", str(bad)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "line" in err and "alpha" in err


def test_run_writes_outputs(tmp_path):
    assert main(["run", "scenario0", "--out", str(tmp_path), "--controller", "wmtc"]) == EXIT_OK
    assert (tmp_path / "trace.csv").exists() and (tmp_path / "partition_0.svg").exists()
    assert "controller: WMTC" in (tmp_path / "summary.txt").read_text()


def test_compare_single_controller(capsys):
    assert main(["compare", "scenario1", "--controllers", "WMTC"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and lines[1].startswith("WMTC")


def test_compare_is_deterministic(capsys):
    main(["compare", "scenario1"])
    first = capsys.readouterr().out
    main(["compare", "scenario1"])
    assert capsys.readouterr().out == first


def test_sweep_disconnected_is_runtime_error(capsys):
    assert main(["sweep-connectivity", "connectivity_n20", "--radii", "5"]) == EXIT_RUNTIME
    assert "components" in capsys.readouterr().err


def test_bad_controller_list():
    with pytest.raises(SystemExit):
        main(["compare", "scenario1", "--controllers", "XYZ"])
