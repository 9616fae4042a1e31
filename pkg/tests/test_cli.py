import json
import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from emtensor.cli import main

ROOT = Path(__file__).resolve().parents[1]
CONTROLS = json.loads((ROOT / "fixtures" / "negative" / "controls.json").read_text())


@pytest.fixture
def run(monkeypatch):
    monkeypatch.chdir(ROOT)
    runner = CliRunner()

    def go(*args):
        res = runner.invoke(main, list(args))
        out = json.loads(res.output) if res.output.strip().startswith("{") else None
        return res.exit_code, out

    return go


def test_version(run):
    res = CliRunner().invoke(main, ["--version"])
    assert res.exit_code == 0 and "0.1.0" in res.output


@pytest.mark.parametrize("monad", ["identity", "powerset", "vector_space"])
def test_laws(run, monad):
    code, out = run("laws", "--monad", monad, "--sizes", "1,1,1")
    assert code == 0 and out["status"] == "pass"
    assert out["timing"] is None


def test_kleisli(run):
    code, out = run("kleisli-roundtrip", "--monad", "powerset", "--sizes", "0,1")
    assert code == 0


def test_tensor_builtin(run):
    code, out = run("tensor", "--A", "D4", "--B", "D4")
    assert code == 0
    assert out["carriers"] == {"A": 4, "B": 4, "A⊠B": 16}


def test_tensor_files(run):
    code, out = run("tensor", "--A", "fixtures/c3.json", "--B", "fixtures/c2.json", "--alt")
    assert code == 0 and out["status"] == "pass"
    assert out["carriers"]["A⊠B"] == 3


def test_bimorphisms(run):
    code, out = run("bimorphisms", "--A", "C2", "--B", "C3", "--C", "C2")
    assert code == 0 and out["status"] == "pass"


def test_monoid_check(run):
    for name in ("v3", "f2xf2", "c2_quantale", "trivial_sup"):
        code, out = run("monoid-check", "--monoid", f"fixtures/{name}.json")
        assert code == 0, (name, out)


def test_action_monad(run):
    code, out = run("action-monad", "--monoid", "fixtures/v3.json", "--X", "1")
    assert code == 0


def test_timing_flag(run):
    code, out = run("laws", "--sizes", "1,0,0", "--timing")
    assert code == 0 and out["timing"]["seconds"] >= 0


def test_output_is_deterministic(monkeypatch):
    monkeypatch.chdir(ROOT)
    args = ["tensor", "--A", "fixtures/c3.json", "--B", "C3", "--json-indent", "2"]
    a = CliRunner().invoke(main, args).output
    b = CliRunner().invoke(main, args).output
    assert a == b


@pytest.mark.parametrize("control", CONTROLS, ids=[c["name"] for c in CONTROLS])
def test_negative_controls(run, control):
    code, out = run(*control["args"])
    assert code == control["exit"]
    assert out is not None
    if code == 1:
        assert out["status"] == "fail" and out["witnesses"]
    else:
        assert out["status"] == "error" and out["error"]["message"]


def test_console_script_exit_code():
    proc = subprocess.run([sys.executable, "-m", "emtensor.cli", "tensor", "--A", "D4", "--B", "D4",
                           "--guard", "8"], cwd=ROOT, capture_output=True, text=True)
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["error"]["kind"] == "resource"
