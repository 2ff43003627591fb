import math

import pytest

from decoshell import cli


def run(args):
    return cli.main(args)


def test_derive_defaults(capsys):
    assert run(["derive"]) == 0
    out = capsys.readouterr().out
    assert "rho0" in out and "m_A" in out


def test_derive_symmetric_phase_exit_code(tmp_path, capsys):
    cfg = tmp_path / "sym.cfg"
    cfg.write_text("mu = 0.1\nm_psi = 0.5\n")
    assert run(["derive", "--config", str(cfg)]) == 2
    assert "symmetric phase" in capsys.readouterr().err


def test_derive_override_supersedes_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mu = 2.0\nm_H = auto\n")
    assert run(["derive", "--config", str(cfg), "--set", "mu=1.0"]) == 0
    out = capsys.readouterr().out
    rho0 = float(out.splitlines()[0].split("=")[1])
    assert rho0 == pytest.approx(1.0)   # mu = 1 with the defaults


def test_shell_command(capsys):
    assert run(["shell", "--ky", "0.0"]) == 0
    out = capsys.readouterr().out
    assert "kx_star" in out and "jacobian_w" in out


def test_shell_below_threshold_is_numeric_failure(capsys):
    assert run(["shell", "--set", "v_rel=0.01"]) == 3


def test_rate_command(capsys):
    assert run(["rate", "--quantity", "resonant"]) == 0
    out = capsys.readouterr().out
    assert "mode       = resonant" in out


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code = run(["sweep", "--axis", "v_rel:0.015:0.03:5",
                "--quantity", "resonant", "--out", str(out), "--svg"])
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == "v_rel,value,abs_err,n_evals,mode,error"
    assert len(text.splitlines()) == 6
    assert out.with_suffix(".svg").exists()


def test_sweep_axis_validation():
    assert run(["sweep", "--axis", "v_rel:bad", "--quantity", "resonant",
                "--out", "x.csv"]) == 4


def test_figure_command(tmp_path):
    code = run(["figure", "4", "--out", str(tmp_path), "--svg"])
    assert code == 0
    assert (tmp_path / "fig4.csv").exists()
    assert (tmp_path / "fig4.svg").read_text().startswith("<svg")


def test_figure_flag_alias(tmp_path):
    assert run(["figure", "--figure", "4", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig4.csv").exists()


def test_figure_unknown_number():
    assert run(["figure", "3"]) == 4


def test_figure_number_required():
    assert run(["figure"]) == 4


def test_platforms_lists_ratios(capsys):
    assert run(["platforms"]) == 0
    out = capsys.readouterr().out
    assert "a/xi=16" in out
    assert "Plasmonic" in out


def test_unknown_subcommand_is_usage_error():
    assert run(["no-such-command"]) == 4


def test_selftest_passes(capsys):
    assert run(["selftest"]) == 0
    out = capsys.readouterr().out
    for name in ("pole_residuals", "threshold_exactness", "jacobian_check",
                 "decoupling_limit"):
        assert f"ok   {name}" in out


def test_selftest_reports_first_failure(monkeypatch, capsys):
    def broken():
        raise AssertionError("deliberately broken")

    patched = [(name, broken) if name == "jacobian_check" else (name, fn)
               for name, fn in cli.SELFTEST_CHECKS]
    monkeypatch.setattr(cli, "SELFTEST_CHECKS", patched)
    assert run(["selftest"]) == 1
    out = capsys.readouterr().out
    assert "FAIL jacobian_check" in out
