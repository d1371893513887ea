import json
from pathlib import Path

import numpy as np
import pytest

from qvote.cli import main, rng_streams
from qvote.constitutions import qmr2
from qvote.scenario import ScenarioError, parse_complex, scenario_from_dict

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def assert_records_close(got, expect):
    assert len(got) == len(expect)
    for g, e in zip(got, expect):
        assert g.keys() == e.keys()
        for k in e:
            if isinstance(e[k], float):
                assert g[k] == pytest.approx(e[k], abs=1e-12)
            else:
                assert g[k] == e[k]


@pytest.mark.parametrize(
    "name, code",
    [("interference", 0), ("cancellation", 0), ("cyclic", 0), ("classical_cycle", 4), ("revote", 3)],
)
def test_run_golden(capsys, name, code):
    got_code, out, _ = run(capsys, "run", f"scenarios/{name}.yaml", "--format", "records")
    assert got_code == code
    assert_records_close(records(out), records((GOLDEN / f"run_{name}.jsonl").read_text()))


def test_sample_votes_golden(capsys):
    code, out, _ = run(capsys, "sample", "scenarios/opposition.yaml", "--votes", "--samples", "5", "--format", "records")
    assert code == 0
    assert records(out) == records((GOLDEN / "sample_opposition_votes.jsonl").read_text())


@pytest.mark.parametrize("scenario", sorted(p.name for p in (ROOT / "scenarios").glob("*.yaml")))
def test_every_shipped_scenario_runs(capsys, scenario):
    code, out, _ = run(capsys, "run", f"scenarios/{scenario}", "--format", "records")
    assert code in (0, 3, 4)
    assert records(out)[0]["record"] == "scenario"


def test_run_with_samples_is_deterministic(capsys):
    first = run(capsys, "run", "scenarios/split_voters.yaml", "--format", "records")
    second = run(capsys, "run", "scenarios/split_voters.yaml", "--format", "records")
    assert first == second
    freq = {r["order"]: r["frequency"] for r in records(first[1]) if r["record"] == "frequency"}
    assert abs(freq["c>b>a"] - 7 / 27) <= 0.014


def test_cycle_policy_override(capsys):
    code, out, _ = run(capsys, "run", "scenarios/classical_cycle.yaml", "--cycle-policy", "all_equal", "--format", "records")
    assert code == 0
    assert records(out)[-1] == {"record": "result", "order": "a=b=c"}


def test_check_random_is_reproducible(capsys):
    a = run(capsys, "check", "--random", "20", "--seed", "7", "--format", "records")
    b = run(capsys, "check", "--random", "20", "--seed", "7", "--format", "records")
    assert a == b
    recs = {r.get("property"): r for r in records(a[1])}
    assert recs["unanimity"]["passed"] and recs["qiia"]["passed"]


def test_check_budget_refusal(capsys):
    code, _, err = run(capsys, "check", "--exhaustive", "--voters", "5", "--mode", "weak")
    assert code == 2 and "budget" in err


def test_check_dictator_hook(capsys):
    code, out, _ = run(capsys, "check", "--constitution", "dictator", "--exhaustive", "--format", "records")
    assert code == 1
    recs = {r.get("property"): r for r in records(out)}
    assert recs["non-dictatorship"]["dictators"] == [1]


def test_check_constant_hook_reports_counterexample(capsys):
    code, out, _ = run(capsys, "check", "--constitution", "constant", "--exhaustive", "--format", "records")
    assert code == 1
    recs = {r.get("property"): r for r in records(out)}
    assert not recs["unanimity"]["passed"] and "counterexample" in recs["unanimity"]


def test_demo_list_and_unknown(capsys):
    code, out, _ = run(capsys, "demo", "list")
    assert code == 0 and "basis-term" in out
    assert run(capsys, "demo", "nope")[0] == 2


@pytest.mark.parametrize("name", ["majority-digraph", "basis-term", "interference", "cancellation", "revote", "party-line", "compare"])
def test_quick_demos_pass(capsys, name):
    assert run(capsys, "demo", name)[0] == 0


def test_bad_scenario_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("candidates: [a, b]\nvoters:\n  - order: a>c\n")
    code, _, err = run(capsys, "run", str(bad))
    assert code == 2 and "error" in err
    assert run(capsys, "run", str(tmp_path / "missing.yaml"))[0] == 2


def test_qmr2_on_mixed_scenario_is_input_error(capsys):
    assert run(capsys, "run", "scenarios/mixed.yaml", "--constitution", "qmr2")[0] == 2


@pytest.mark.parametrize(
    "text, value",
    [("0.7071", 0.7071), ("-0.7071", -0.7071), ("0+1i", 1j), ("1i", 1j), ("-i", -1j), (0.5, 0.5), ("0.6 - 0.8i", 0.6 - 0.8j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["x", "1ii", True, None, "1j"])
def test_parse_complex_rejects(text):
    with pytest.raises(ScenarioError):
        parse_complex(text)


def test_scenario_grammar_errors():
    with pytest.raises(ScenarioError, match="candidates"):
        scenario_from_dict({"voters": ["a>b"]})
    with pytest.raises(ScenarioError, match="exactly one"):
        scenario_from_dict({"candidates": ["a", "b"]})
    with pytest.raises(ScenarioError, match="unknown scenario keys"):
        scenario_from_dict({"candidates": ["a", "b"], "voters": ["a>b"], "colour": 1})
    with pytest.raises(ScenarioError, match="constitution"):
        scenario_from_dict({"candidates": ["a", "b"], "voters": ["a>b"], "constitution": "borda"})


def test_scenario_joint_amplitudes():
    sc = scenario_from_dict({
        "candidates": ["a", "b", "c"],
        "constitution": "qmr2",
        "joint": {"amplitudes": {"abc, cba": 1, "cba, abc": 1}},
    })
    assert sc.profile.n_voters == 2 and sc.profile.is_pure
    qmr2(sc.profile)


def test_rng_streams_are_independent_and_reproducible():
    a = [g.integers(1 << 30, size=4) for g in rng_streams(5, 3)]
    b = [g.integers(1 << 30, size=4) for g in rng_streams(5, 3)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], a[1])
