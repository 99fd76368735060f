"""Scenario schema validation and the batch command-line front end."""

import csv
import json
import math

import numpy as np
import pytest
import yaml

from twintrap import cli
from twintrap.model import ConfigError
from twintrap.scenario import (SCHEMA_VERSION, load_scenario, parse_scenario,
                               shipped_scenario)

SHIPPED = ("fig1_cw", "fig2_sum", "fig2_half", "fig3_nanosphere")


def base_doc():
    with open(shipped_scenario("fig1_cw")) as fh:
        return yaml.safe_load(fh)


# ---------------------------------------------------------------- schema

@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_scenarios_load(name):
    scenario = load_scenario(shipped_scenario(name))
    system = scenario.system()
    assert system.params.omega_mech[0] > 0


def test_unknown_top_level_key_rejected():
    doc = base_doc()
    doc["extra"] = 1
    with pytest.raises(ConfigError, match="unknown keys"):
        parse_scenario(doc)


def test_unknown_nested_key_rejected():
    doc = base_doc()
    doc["cavity"]["colour"] = "red"
    with pytest.raises(ConfigError, match="unknown keys"):
        parse_scenario(doc)


def test_schema_version_enforced():
    doc = base_doc()
    doc["schema_version"] = SCHEMA_VERSION + 1
    with pytest.raises(ConfigError, match="schema_version"):
        parse_scenario(doc)


def test_missing_section_rejected():
    doc = base_doc()
    del doc["environment"]
    with pytest.raises(ConfigError):
        parse_scenario(doc)


def test_power_and_amplitude_are_exclusive():
    doc = base_doc()
    doc["drive"]["trap_amplitude_rad_s"] = 1e11
    with pytest.raises(ConfigError, match="exactly one"):
        parse_scenario(doc)


def test_modulation_frequency_requires_modulation():
    doc = base_doc()
    doc["drive"]["modulation_frequency_sum_units"] = 1.0
    with pytest.raises(ConfigError):
        parse_scenario(doc)


def test_relative_detunings_resolve_against_trap_frequency():
    scenario = load_scenario(shipped_scenario("fig1_cw"))
    system = scenario.system()
    assert np.allclose(system.drive.detunings, system.params.omega_mech[0],
                       rtol=1e-12)


def test_relative_mod_frequency_resolves_to_sum(fig2_sum_scenario):
    system = fig2_sum_scenario.system()
    assert math.isclose(system.drive.mod_frequency,
                        float(system.params.omega_mech.sum()), rel_tol=1e-12)


def test_recoil_scale_override(fig3_scenario):
    assert fig3_scenario.objects[0].recoil_scale == 0.1
    system = fig3_scenario.system(recoil_scale=1.0)
    base = fig3_scenario.system()
    assert math.isclose(system.params.recoil[0], 10 * base.params.recoil[0],
                        rel_tol=1e-12)


def test_single_object_entry_duplicates(fig1_scenario):
    assert fig1_scenario.objects[0] == fig1_scenario.objects[1]


# ------------------------------------------------------------------- CLI

def write_scenario(tmp_path, doc, name="case.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return path


def test_validate_ok(capsys):
    code = cli.main(["validate", "--scenario",
                     str(shipped_scenario("fig1_cw"))])
    assert code == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"valid": True}


def test_validate_rejects_malformed(tmp_path, capsys):
    doc = base_doc()
    doc["drive"]["typo_key"] = 1
    path = write_scenario(tmp_path, doc)
    assert cli.main(["validate", "--scenario", str(path)]) == cli.EXIT_CONFIG
    assert "unknown keys" in capsys.readouterr().err


def test_missing_file_is_config_error(tmp_path, capsys):
    assert cli.main(["validate", "--scenario",
                     str(tmp_path / "nope.yaml")]) == cli.EXIT_CONFIG


def test_steady_report(tmp_path):
    code = cli.main(["steady", "--scenario", str(shipped_scenario("fig1_cw")),
                     "--out", str(tmp_path)])
    assert code == cli.EXIT_OK
    doc = json.loads((tmp_path / "steady.json").read_text())
    assert doc["stable"] is True
    assert 0.5 <= doc["eta_min"] <= 0.75
    cov = np.array(doc["covariance"])
    assert cov.shape == (8, 8)
    assert np.allclose(cov, cov.T)


def test_steady_unstable_exit_code(tmp_path, capsys):
    doc = base_doc()
    doc["drive"]["detunings_omega1_units"] = [-1.0, -1.0]
    path = write_scenario(tmp_path, doc)
    assert cli.main(["steady", "--scenario", str(path)]) == cli.EXIT_UNSTABLE


def test_evolve_csv_unmodulated_is_flat(tmp_path):
    # Without modulation the covariance starts at the CW steady state and
    # stays there: a flat series at the steady eta_min.
    doc = base_doc()
    doc["numerics"] = {"t_max_tau": 3.0}
    del doc["sweep"]
    path = write_scenario(tmp_path, doc)
    code = cli.main(["evolve", "--scenario", str(path), "--format", "csv",
                     "--out", str(tmp_path)])
    assert code == cli.EXIT_OK
    with open(tmp_path / "evolve.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(cli.SERIES_COLUMNS)
    eta = np.array([float(r[1]) for r in rows[1:]])
    assert np.ptp(eta) < 1e-6
    assert abs(eta[0] - 0.5234) < 5e-3


def test_sweep_deterministic_and_parallel(tmp_path):
    scenario_path = str(shipped_scenario("fig1_cw"))
    out1, out2, out3 = (tmp_path / s for s in ("a", "b", "c"))
    for out, threads in ((out1, 1), (out2, 1), (out3, 4)):
        code = cli.main(["sweep", "--scenario", scenario_path,
                         "--threads", str(threads), "--out", str(out)])
        assert code == cli.EXIT_OK
    text1 = (out1 / "sweep.csv").read_text()
    assert text1 == (out2 / "sweep.csv").read_text()   # byte-identical
    assert text1 == (out3 / "sweep.csv").read_text()   # thread-count free
    rows = list(csv.DictReader(text1.splitlines()))
    assert [float(r["detuning"]) for r in rows] == \
        list(load_scenario(scenario_path).sweep.values)


def test_sweep_minimum_occupancy_near_resonance(tmp_path):
    cli.main(["sweep", "--scenario", str(shipped_scenario("fig1_cw")),
              "--out", str(tmp_path)])
    rows = list(csv.DictReader((tmp_path / "sweep.csv").read_text()
                               .splitlines()))
    best = min(rows, key=lambda r: float(r["nbar1"]))
    assert 0.8 <= float(best["detuning"]) <= 1.2


def test_sweep_requires_sweep_section(tmp_path, capsys):
    doc = base_doc()
    del doc["sweep"]
    path = write_scenario(tmp_path, doc)
    assert cli.main(["sweep", "--scenario", str(path)]) == cli.EXIT_CONFIG


def test_effective_report_json(tmp_path):
    code = cli.main(["effective", "--scenario",
                     str(shipped_scenario("fig2_sum")), "--out",
                     str(tmp_path)])
    assert code == cli.EXIT_OK
    doc = json.loads((tmp_path / "effective.json").read_text())
    for key in ("j_dc", "j_first", "j_second", "omega_sum", "omega_half",
                "weak_coupling", "process_tags"):
        assert key in doc
    assert abs(doc["j_first"][0][1]) > abs(doc["j_second"][0][1])


def test_jformula_flag_changes_scale(tmp_path):
    outs = {}
    for tag, flag in (("p", "printed"), ("s", "single-power")):
        out = tmp_path / tag
        cli.main(["effective", "--scenario",
                  str(shipped_scenario("fig2_sum")), "--jformula", flag,
                  "--out", str(out)])
        outs[tag] = json.loads((out / "effective.json").read_text())
    # The two denominator conventions differ by one power of kappa^2+Delta^2
    # per term, so the summed coupling changes by orders of magnitude.
    printed = outs["p"]["j_dc"][0][1]
    single = outs["s"]["j_dc"][0][1]
    assert printed != 0 and single != 0
    assert not math.isclose(single, printed, rel_tol=1e-3)
