import json
import subprocess
import sys
from pathlib import Path

import pytest

from subdyn.cli import main
from subdyn.corpus import EXAMPLES

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def emitted(tmp_path_factory):
    root = tmp_path_factory.mktemp("docs")
    paths = {}
    for name in EXAMPLES:
        paths[name] = root / f"{name}.json"
        assert main(["examples", "emit", name, "--out", str(paths[name])]) == 0
    return paths


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0
    assert out.split() == sorted(EXAMPLES)


def test_emit_matches_golden(capsys):
    code, out, _ = run(capsys, "examples", "emit", "diamond")
    assert code == 0
    assert out == (GOLDEN / "diamond.json").read_text(encoding="utf-8")


def test_emit_unknown(capsys):
    code, _, err = run(capsys, "examples", "emit", "nope")
    assert code == 1 and "unknown example" in err


def test_validate(capsys, emitted, tmp_path):
    assert run(capsys, "validate", str(emitted["diamond"]))[:2] == (0, "ok\n")
    obj = json.loads(emitted["diamond"].read_text(encoding="utf-8"))
    obj["dynamics"]["diamond"]["states"]["U"].append("s")
    bad = tmp_path / "overlap.json"
    bad.write_text(json.dumps(obj), encoding="utf-8")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "disjointness" in out
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 1 and "malformed JSON" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err


def test_classify(capsys, emitted):
    assert run(capsys, "classify", str(emitted["diamond"]))[1] == "[π̇ δ 𝐂]\n"
    assert run(capsys, "classify", str(emitted["grid-source"]))[1] == "[π̇ δ̄ φ T_3]\n"
    assert run(capsys, "classify", str(emitted["grid-timeless"]))[1] == "[π̄ δ̣ φ̲ 1]\n"
    code, out, _ = run(capsys, "classify", str(emitted["grid-why"]), "--dynamic", "grid-why.W")
    assert out == "[π̄ δ̣ φ̲ 1]\n"
    code, _, err = run(capsys, "classify", str(emitted["grid-why"]))
    assert code == 1 and "name one" in err


def test_realizations(capsys, emitted):
    code, out, _ = run(capsys, "realizations", str(emitted["diamond"]))
    assert code == 0
    assert out == (GOLDEN / "diamond-realizations.txt").read_text(encoding="utf-8")
    assert "*\t∅" in out.splitlines()
    assert out.splitlines()[-1] == "# 10 realizations, 1 with full domain"
    code, _, err = run(capsys, "realizations", str(emitted["grid-source"]), "--limit", "5")
    assert code == 2 and "more than 5" in err
    code, _, _ = run(capsys, "realizations", str(emitted["diamond"]), "--param", "zz")
    assert code == 1


def test_limit_from_environment(capsys, emitted, monkeypatch):
    monkeypatch.setenv("SUBDYN_LIMIT", "3")
    assert run(capsys, "realizations", str(emitted["two-branch"]))[0] == 2


def test_interaction_reports(capsys, emitted):
    code, out, _ = run(capsys, "interaction-report", str(emitted["diamond"]), "--null")
    rep = json.loads(out)
    assert code == 0 and rep["operant"] is False and rep["normal"] is True
    rep = json.loads(run(capsys, "interaction-report", str(emitted["diagonal"]))[1])
    assert rep["normal"] is False and rep["operant"] is True
    assert ["1", "2"] in rep["connectivity"]["realizations"]
    rep = json.loads(run(capsys, "interaction-report", str(emitted["grid-why"]))[1])
    assert rep["concrete"] is True


def test_generate_mode_m_matches_golden(capsys):
    code, out, _ = run(capsys, "generate", str(GOLDEN / "diamond.json"), "--mode", "m")
    assert code == 0
    assert out == (GOLDEN / "diamond-m.json").read_text(encoding="utf-8")
    rows = json.loads(out)["dynamics"]["diamond[m]"]["transitions"]
    assert not [r for r in rows if r[0] == "SVT" and r[2] == '["s\'"]']
    assert ["SV", '["*"]', '["s\'"]', ['["v"]']] in rows


def test_generate_p_equals_f_on_single_component(capsys, emitted):
    outs = {}
    for mode in "pf":
        code, out, _ = run(capsys, "generate", str(emitted["grid-timeless"]), "--mode", mode,
                           "--name", "g")
        assert code == 0
        obj = json.loads(out)
        outs[mode] = obj["dynamics"], obj["open_dynamics"]
    assert outs["p"] == outs["f"]


def test_generate_errors(capsys, emitted, tmp_path):
    code, _, err = run(capsys, "generate", str(emitted["diamond"]), "--mode", "q")
    assert code == 1 and "unknown mode" in err
    code, _, err = run(capsys, "generate", str(emitted["diamond"]), "--mode", "heaps")
    assert code == 1
    heaps = tmp_path / "heaps.json"
    heaps.write_text('{"0": ["*"]}', encoding="utf-8")
    out = tmp_path / "g.json"
    code, _, _ = run(capsys, "generate", str(emitted["diamond"]), "--mode", "heaps",
                     "--heaps", str(heaps), "--out", str(out))
    assert code == 0 and json.loads(out.read_text(encoding="utf-8"))["provenance"]["mode"] == "heaps"
    heaps.write_text('{"zz": []}', encoding="utf-8")
    assert run(capsys, "generate", str(emitted["diamond"]), "--mode", "heaps",
               "--heaps", str(heaps))[0] == 1


def test_generate_is_a_fixed_point(capsys, emitted, tmp_path):
    first = tmp_path / "first.json"
    assert main(["generate", str(emitted["two-branch"]), "--mode", "p", "--out", str(first)]) == 0
    assert main(["validate", str(first)]) == 0
    capsys.readouterr()
    again = run(capsys, "generate", str(emitted["two-branch"]), "--mode", "p")[1]
    assert again == first.read_text(encoding="utf-8")


def test_check_suites(capsys, emitted):
    code, out, _ = run(capsys, "check", "--suite", "stability", "--cases", "200", "--seed", "7")
    assert code == 0 and "200 cases, 0 failures" in out
    assert run(capsys, "check", "--suite", "determinism", "--cases", "50")[0] == 0
    code, out, _ = run(capsys, "check", "--suite", "stability", "--cases", "40",
                       "--inject-fault")
    assert code == 2 and "FAILED" in out
    assert run(capsys, "check", str(emitted["grid-why"]))[0] == 0


def test_check_is_deterministic(capsys):
    a = run(capsys, "check", "--suite", "normality", "--cases", "20", "--seed", "3")
    b = run(capsys, "check", "--suite", "normality", "--cases", "20", "--seed", "3")
    assert a == b


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["check", "--suite", "nope"])
    assert exc.value.code == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "subdyn", "examples", "list"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "diamond" in res.stdout.split()
