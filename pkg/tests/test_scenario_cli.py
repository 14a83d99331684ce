import math
import os
import subprocess
import sys

import pytest

from oamlink import cli
from oamlink.errors import ConfigError, DomainError, IoError, ParseError, ValidationError
from oamlink.scenario import (Scenario, default_config_text, deflection_from_db, deflection_to_db,
                              load_scenario, save_scenario, scenario_from_dict)
from oamlink.sweeps import (Column, SweepSpec, apply_parameter, figure_sweep, format_csv,
                            run_sweep)


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "empty.yaml"
    p.write_text("")
    s = load_scenario(p)
    assert s == Scenario()
    assert s.beam.wavelength == 0.005
    assert s.states.count == 4 and s.state_list() == [1, 2, 3, 4]
    assert s.z == 50.0 and s.array.num_antennas == 8
    assert s.turbulence.structure_constant == 3e-12 and s.turbulence.spectral_index == 3.7
    mis = s.misalignment_params()
    assert (mis.displacement, mis.displacement_azimuth) == (0.005, math.pi / 2)
    assert (mis.deflection, mis.deflection_azimuth) == (1e-4, 0.0)
    assert s.link.snr_db == 10.0
    assert s.geometry().spacing == pytest.approx(3 * s.ring_radius())


def test_shipped_default_file_matches_defaults(tmp_path):
    p = tmp_path / "default.yaml"
    p.write_text(default_config_text())
    assert load_scenario(p) == Scenario()


def test_alpha_out_of_range(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("turbulence:\n  spectral_index: 4.5\n")
    with pytest.raises(ValidationError, match="3 < α < 4"):
        load_scenario(p)


def test_roundtrip(tmp_path):
    s = (Scenario().replace("link.snr_db", 3.5).replace("states.rule", "multiples")
         .replace("array.spacing", 20.0).replace("link.gain_constant", 2.0))
    p = tmp_path / "s.yaml"
    save_scenario(s, p)
    assert load_scenario(p) == s


def test_unknown_keys_and_types():
    with pytest.raises(ValidationError, match="unknown key link.snr"):
        scenario_from_dict({"link": {"snr": 3}})
    with pytest.raises(ValidationError, match="unknown section"):
        scenario_from_dict({"links": {}})
    with pytest.raises(ValidationError, match="integer"):
        scenario_from_dict({"array": {"num_antennas": 2.5}})
    with pytest.raises(ValidationError, match="boolean"):
        scenario_from_dict({"link": {"snr_db": True}})
    with pytest.raises(ValidationError):
        scenario_from_dict({"link": {"symbol_metric": "hamming"}})
    with pytest.raises(ValidationError):
        scenario_from_dict([1, 2])
    assert scenario_from_dict({"link": {"snr_db": 7}}).link.snr_db == 7.0


def test_parse_error_reports_position(tmp_path):
    p = tmp_path / "broken.yaml"
    p.write_text("link:\n  snr_db: [1, 2\n")
    with pytest.raises(ParseError, match="line 3"):
        load_scenario(p)
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "missing.yaml")


def test_infeasible_waist_rejected():
    # a 0.5 m reference waist cannot reach the state-1 ring radius for l = 4 at 50 m
    s = Scenario().replace("beam.waist", 0.5)
    from oamlink.pipeline import evaluate
    from oamlink.errors import NoRoot
    with pytest.raises(NoRoot):
        evaluate(s)


def test_deflection_db_conventions():
    assert deflection_from_db(-24) == pytest.approx(10 ** -2.4)
    assert deflection_from_db(-5, 20) == pytest.approx(10 ** -0.25)
    assert deflection_to_db(deflection_from_db(-13.0)) == pytest.approx(-13.0)
    s = Scenario().with_deflection_db(-5.0)
    assert s.misalignment.deflection == pytest.approx(0.31622776601683794)
    with pytest.raises(ValidationError):
        Scenario().replace("misalignment.deflection_db_factor", 15)


def test_sweep_spec_validation():
    col = (Column("c"),)
    with pytest.raises(DomainError):
        SweepSpec("link.snr_db", (), col)
    with pytest.raises(DomainError):
        SweepSpec("link.snr_db", (1.0, 3.0, 2.0), col)
    with pytest.raises(DomainError):
        SweepSpec("link.snr_db", (1.0, 1.0), col)
    with pytest.raises(DomainError):
        SweepSpec("link.snr_db", (1.0,), ())
    assert SweepSpec("link.snr_db", (3.0, 2.0), col).header() == ["snr_db", "c"]
    with pytest.raises(ValidationError):
        apply_parameter(Scenario(), "array.num_antennas", 2.5)
    with pytest.raises(ValidationError):
        apply_parameter(Scenario(), "link.nothing", 1.0)
    with pytest.raises(DomainError):
        figure_sweep("fig10")


def test_csv_uses_17_significant_digits():
    text = format_csv(["a", "b"], [[0.1, 1 / 3]])
    assert text == "a,b\n0.10000000000000001,0.33333333333333331\n"


def test_run_sweep_writes_nothing_on_failure(tmp_path):
    out = tmp_path / "out.csv"
    spec = SweepSpec("turbulence.spectral_index", (3.5, 3.7, 4.2), (Column("c"),))
    with pytest.raises(ValidationError):
        run_sweep(Scenario(), spec, out)
    assert not out.exists() and os.listdir(tmp_path) == []
    with pytest.raises(IoError):
        run_sweep(Scenario(), SweepSpec("link.snr_db", (1.0,), (Column("c"),)),
                  tmp_path / "nodir" / "x.csv")


def test_sweep_rows(tmp_path):
    spec = SweepSpec("link.snr_db", (0.0, 10.0), (Column("c"), Column("a", aligned=True),
                                                  Column("p", "error_probability"),
                                                  Column("rx1", "capacity_rx1")))
    out = tmp_path / "o.csv"
    rows = run_sweep(Scenario(), spec, out, threads=2)
    lines = out.read_text().splitlines()
    assert lines[0] == "snr_db,c,a,p,rx1"
    assert len(lines) == 3 and rows[1][0] == 10.0
    assert rows[1][1] > rows[0][1] and rows[0][4] < rows[0][1]


def test_figure_headers():
    s = Scenario()
    assert figure_sweep("fig3", s).header() == ["snr_db", "capacity_aligned", "capacity_misaligned"]
    assert figure_sweep("fig4a", s).header()[1:] == ["capacity_z30", "capacity_z50", "capacity_z100"]
    h7 = figure_sweep("fig7", s).header()
    assert h7[0] == "deflection_db" and h7[1] == "capacity_o1" and h7[10] == "capacity_o10"
    assert h7[-4:] == ["optimal_interval", "optimal_capacity", "improvement_over_o1",
                       "improvement_over_omax"]
    assert figure_sweep("fig8", s).header()[1] == "error_probability_dbm24"


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main([]) == cli.EXIT_USAGE
    assert cli.main(["fig3", "--threads", "0"]) == cli.EXIT_USAGE
    assert cli.main(["fig3", "--config", str(tmp_path / "missing.yaml")]) == cli.EXIT_CONFIG
    bad = tmp_path / "bad.yaml"
    bad.write_text("turbulence:\n  spectral_index: 4.5\n")
    assert cli.main(["purity", "--config", str(bad)]) == cli.EXIT_CONFIG
    broken = tmp_path / "broken.yaml"
    broken.write_text("link: [\n")
    assert cli.main(["purity", "--config", str(broken)]) == cli.EXIT_CONFIG
    assert "line" in capsys.readouterr().err
    infeasible = tmp_path / "waist.yaml"
    infeasible.write_text("beam:\n  waist: 0.5\n")
    assert cli.main(["optimize", "--config", str(infeasible)]) == cli.EXIT_COMPUTE
    assert cli.main(["purity", "--out", str(tmp_path / "no" / "p.csv")]) == cli.EXIT_IO


def test_cli_purity_and_optimize(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert cli.main(["purity", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("state,offset_m8,") and lines[0].endswith(",offset_8")
    assert len(lines) == 5
    opt = tmp_path / "o.csv"
    assert cli.main(["optimize", "--out", str(opt), "--tie-break", "last",
                     "--state-rule", "multiples"]) == 0
    rows = opt.read_text().splitlines()
    assert rows[0] == "interval,total_capacity,optimal" and len(rows) == 11
    assert sum(r.endswith(",1") for r in rows[1:]) == 1
    assert "optimal interval" in capsys.readouterr().err


def test_cli_entry_point_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out, threads in ((a, "1"), (b, "4")):
        proc = subprocess.run([sys.executable, "-m", "oamlink.cli", "fig3", "--out", str(out),
                               "--threads", threads], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 22
