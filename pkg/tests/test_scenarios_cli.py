import json
import subprocess
import sys
from pathlib import Path

import pytest

from austere_eds import scenarios as sc
from austere_eds.cli import main

ROOT = Path(__file__).resolve().parents[1]
INPUTS = ROOT / "demos" / "inputs"


def test_registry_contents():
    listed = {name: cost for name, _, cost in sc.list_scenarios()}
    assert "lemma_prolong_bc" in listed and "typeC_char_variety" in listed
    assert listed["typeB_delta5_nonexistence"] == "slow"
    assert len(listed) == 21


def test_every_claim_is_tagged_and_anchored():
    for s in sc.SCENARIOS:
        for c in s.claims:
            assert c.tag in sc.TAGS and c.anchor


def test_run_lemma_prolong_bc():
    r = sc.run("lemma_prolong_bc")
    assert r.ok and [c.computed for c in r.claims] == ["0", "0", "8", "20"]


def test_unknown_scenario_and_bad_params():
    with pytest.raises(sc.UnknownScenario):
        sc.run("nope")
    with pytest.raises(sc.ParameterError):
        sc.run("typeA_highcodim", params={"r": "seven"})
    with pytest.raises(sc.ParameterError):
        sc.run("typeA_highcodim", params={"q": "1"})


def test_budget_exhaustion_marks_skipped():
    r = sc.run("k2_case_1a", budget=1)
    statuses = {c.label: c.status for c in r.claims}
    assert statuses["torsion (x^2+y^2 nonzero)"] == "skipped"
    assert r.status == "skipped" and not r.ok


def test_report_json_excludes_wall_time():
    r = sc.run("kmap_kahler")
    text = json.dumps(r.to_json())
    assert "wall" not in text and "time" not in r.to_json()


def test_json_reports_are_deterministic():
    a = [sc.run(n, seed=3).to_json() for n in ("austere_maximal_spaces", "helicoid_numeric")]
    b = [sc.run(n, seed=3).to_json() for n in ("austere_maximal_spaces", "helicoid_numeric")]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def _eds(*args):
    return subprocess.run([sys.executable, "-m", "austere_eds.cli", *args],
                          capture_output=True, text=True, cwd=ROOT)


def test_cli_list_and_verify():
    out = _eds("list-scenarios")
    assert out.returncode == 0 and "typeB_delta5_nonexistence" in out.stdout
    out = _eds("verify", "lemma_prolong_bc", "--json")
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert data["status"] == "pass"
    assert all(isinstance(c["computed"], str) for c in data["reports"][0]["claims"])


def test_cli_verify_json_byte_identical():
    a = _eds("verify", "so6_beta_structure", "--json", "--seed", "5")
    b = _eds("verify", "so6_beta_structure", "--json", "--seed", "5")
    assert a.stdout == b.stdout and a.returncode == b.returncode == 0


def test_cli_usage_errors():
    assert _eds("verify", "nope").returncode == 2
    assert _eds("verify", "typeA_highcodim", "--param", "r=x").returncode == 2
    assert _eds("verify", "typeA_highcodim", "--param", "r").returncode == 2
    assert _eds("frobnicate").returncode == 2


def test_cli_failure_exit_code():
    assert _eds("verify", "cmissing_identities").returncode == 1


def test_cli_user_inputs():
    out = _eds("prolong", "--input", str(INPUTS / "q_b.json"), "--json")
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["dimension"] == "0"
    out = _eds("austere", "--input", str(INPUTS / "identity_span.json"), "--json")
    res = json.loads(out.stdout)["result"]
    assert res["austere"] is False and res["certificate"]["name"] == "trace"
    out = _eds("classify", "--input", str(INPUTS / "pair_2a.json"), "--json")
    assert json.loads(out.stdout)["result"]["tag"] == "2.a"


def test_cli_user_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 4}')
    assert _eds("austere", "--input", str(bad)).returncode == 2
    bad.write_text("not json")
    assert _eds("austere", "--input", str(bad)).returncode == 2
    assert _eds("prolong", "--input", str(INPUTS / "bad_nonsymmetric.json")).returncode == 1


def test_cli_cartan():
    out = _eds("cartan", "--input", str(INPUTS / "type_c_system.json"), "--json")
    res = json.loads(out.stdout)["result"]
    assert res["characters"]["characters"][:2] == ["12", "5"]
    assert res["characters"]["involutive"] is False


def test_cli_check_austere():
    out = _eds("check-austere", "--surface", "helicoid", "--lambdas", "1,2,3", "--points", "10",
               "--tol", "1e-9", "--seed", "0")
    assert out.returncode == 0 and "PASS" in out.stdout and "seed 0" in out.stdout
    assert _eds("check-austere", "--surface", "quadric", "--points", "3").returncode == 1
    assert _eds("check-austere", "--lambdas", "a,b").returncode == 2


def test_main_in_process(capsys):
    assert main(["verify", "kmap_kahler"]) == 0
    assert "kmap_kahler: PASS" in capsys.readouterr().out
