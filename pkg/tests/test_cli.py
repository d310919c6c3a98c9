import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from towercob.cli import build_parser, congruence_instances, main
from towercob.report import TSV_HEADER, Report, canonical, table_tsv


def _run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_bytes()


def test_subcommands_exist():
    ap = build_parser()
    for cmd in ("table", "verify-generators", "verify-congruences", "selftest"):
        assert ap.parse_args([cmd]).command == cmd
    assert ap.parse_args(["run", "x.tow"]).file == "x.tow"


def test_selftest_passes(tmp_path):
    code, data = _run(tmp_path, "selftest", "--no-timing")
    doc = json.loads(data)
    assert code == 0
    assert doc["schema_version"] == "1" and doc["command"] == "selftest"
    assert all(r["verdict"] == "pass" for r in doc["results"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "towercob", "selftest", "--no-timing"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert set(json.loads(out.stdout)) == {"schema_version", "command", "inputs", "results",
                                           "timing_ms"}


def test_table_tsv(tmp_path):
    code, data = _run(tmp_path, "table", "--max-degree", "8", "--format", "tsv")
    lines = data.decode().splitlines()
    assert code == 0
    assert lines[0] == TSV_HEADER == "i\tj\ta_closed\ta_engine"
    assert "3\t5\t-84\t-84" in lines
    assert "0\t2\t3\t" in lines  # engine diagnostics start at i = 1


def test_table_json_marks_first_row(tmp_path):
    code, data = _run(tmp_path, "table", "--max-degree", "5", "--no-timing")
    rows = {(r["i"], r["j"]): r for r in json.loads(data)["results"]}
    assert code == 0
    assert rows[("1", "2")]["diagnostic"] == "mismatch"
    assert rows[("1", "2")]["m_engine"] == "4" and rows[("1", "2")]["m_closed"] == "0"
    assert rows[("2", "3")]["verdict"] == "pass"


def test_verify_generators(tmp_path):
    code, data = _run(tmp_path, "verify-generators", "--max-degree", "10", "--no-timing")
    results = json.loads(data)["results"]
    assert code == 0
    assert [r["degree"] for r in results] == [str(n) for n in range(2, 11)]
    deg8 = results[6]
    assert deg8["gcd"] == "3" and deg8["verdict"] == "pass"


def test_verify_congruences_exit_codes(tmp_path):
    code, data = _run(tmp_path, "verify-congruences", "--primes", "3,5", "--max-s", "3")
    assert code == 0
    assert all(r["verdict"] == "pass" for r in json.loads(data)["results"])
    code, data = _run(tmp_path, "verify-congruences", "--primes", "2", "--max-s", "2")
    verdicts = {r["verdict"] for r in json.loads(data)["results"]}
    assert code == 1 and verdicts == {"pass", "unsupported"}


def test_congruence_instances_cover_all_lemmas():
    names = {name for name, _, _ in congruence_instances([3], 2)}
    assert names == {"eq12", "tech", "tech4", "ressq", "lm32", "lm31", "pmain"}


def test_run_script_file(tmp_path):
    src = tmp_path / "demo.tow"
    src.write_text("let b = BF(3);\nmilnor(b);\ntodd(X(2,2));\n", encoding="utf-8")
    code, data = _run(tmp_path, "run", str(src), "--no-timing")
    assert code == 0
    assert [r["value"] for r in json.loads(data)["results"]] == ["2", "1"]


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.tow"
    bad.write_text("milnor(q);", encoding="utf-8")
    assert main(["run", str(bad)]) == 2
    assert "1:8: unbound name" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.tow")]) == 2
    assert main(["table", "--max-degree", "1"]) == 2
    assert main(["selftest", "--format", "tsv"]) == 2
    assert main(["verify-congruences", "--primes", "4"]) == 2


@pytest.mark.parametrize("argv", [
    ["table", "--max-degree", "9"],
    ["verify-generators", "--max-degree", "12", "--engine-cap", "10"],
    ["verify-congruences", "--primes", "2,3,5,7", "--max-s", "3"],
])
def test_output_is_byte_identical_across_runs_and_jobs(tmp_path, argv):
    _, a = _run(tmp_path, *argv, "--no-timing", name="a")
    _, b = _run(tmp_path, *argv, "--no-timing", name="b")
    _, c = _run(tmp_path, *argv, "--no-timing", "--jobs", "4", name="c")
    assert a == b == c


# --- report serialization ---------------------------------------------------------

scalars = st.one_of(st.integers(-(1 << 200), 1 << 200), st.booleans(), st.none(),
                    st.text(max_size=5),
                    st.fractions(max_denominator=50).map(Fraction))
values = st.recursive(scalars, lambda kids: st.one_of(
    st.lists(kids, max_size=4),
    st.dictionaries(st.text(min_size=1, max_size=4), kids, max_size=4)), max_leaves=12)


@settings(max_examples=500)
@given(st.lists(st.dictionaries(st.text(min_size=1, max_size=6), values, max_size=5), max_size=5),
       st.randoms())
def test_report_serialization_is_deterministic(results, rnd):
    def shuffled(obj):
        if isinstance(obj, dict):
            items = list(obj.items())
            rnd.shuffle(items)
            return {k: shuffled(v) for k, v in items}
        if isinstance(obj, list):
            return [shuffled(x) for x in obj]
        return obj

    a = Report("cmd", {"n": 3}, results).to_json()
    b = Report("cmd", {"n": 3}, shuffled(results)).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["results"] == canonical(results)
    assert "e+" not in a and "." not in json.dumps(doc["timing_ms"])


def test_canonical_rendering():
    assert canonical({(1, 2): 1 << 70}) == {"1,2": str(1 << 70)}
    assert canonical([Fraction(3, 1), Fraction(-1, 6)]) == ["3", "-1/6"]
    with pytest.raises(TypeError):
        canonical(1.5)


def test_report_verdicts():
    assert Report("x", {}, [{"verdict": "pass"}, {"value": 1}]).ok
    assert not Report("x", {}, [{"verdict": "pass"}, {"verdict": "fail"}]).ok
    assert not Report("x", {}, [{"verdict": "unsupported"}]).ok


def test_table_tsv_blank_engine_cell():
    text = table_tsv([{"i": 0, "j": 2, "a_closed": 3, "a_engine": None}])
    assert text == TSV_HEADER + "\n0\t2\t3\t\n"
