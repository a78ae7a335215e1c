import json
import os

import pytest

from dgbrauer.classification import make_template
from dgbrauer.cli import main
from dgbrauer.graded import same_table
from dgbrauer.io import DocumentError, build_dg, document_from_dg, emit, load, parse_presentation
from dgbrauer.scalars import GF

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIX = os.path.join(ROOT, "fixtures")


def fx(name):
    return os.path.join(FIX, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


MINIMAL = '{ "mul": [{"out": [{"c": "1", "b": "1"}], "r": "1", "l": "1"}],\n  "one": "1", "basis": [["1", 0]], "field": "Q" }'


def test_minimal_document_round_trip():
    t = emit(parse_presentation(MINIMAL))
    assert t == '{"basis":[["1",0]],"field":"Q","mul":[{"l":"1","out":[{"b":"1","c":"1","u":0}],"r":"1"}],"one":"1"}\n'
    assert emit(parse_presentation(t)) == t


def test_shipped_fixtures_are_canonical():
    for name in sorted(os.listdir(FIX)):
        text = open(fx(name), encoding="utf-8").read()
        assert emit(parse_presentation(text)) == text, name


def test_case_three_fixture_matches_template():
    Ad = build_dg(load(fx("case3_f5.json")))
    T = make_template("3", GF(5))
    assert same_table(Ad.algebra, T.algebra)
    assert all(Ad.d[b] == T.d[b].rebind(Ad.algebra) for b in T.algebra.names)


def test_degree_diagnostic_names_entry():
    doc = {
        "field": "Q",
        "basis": [["1", 0], ["T", -1]],
        "one": "1",
        "mul": [
            {"l": "1", "r": "1", "out": [{"b": "1", "c": "1"}]},
            {"l": "1", "r": "T", "out": [{"b": "T", "c": "1"}]},
            {"l": "T", "r": "1", "out": [{"b": "T", "c": "1"}]},
            {"l": "T", "r": "T", "out": [{"b": "1", "u": 0, "c": "1"}]},
        ],
    }
    with pytest.raises(ValueError) as e:
        build_dg(parse_presentation(json.dumps(doc)))
    assert "$.mul[3]" in str(e.value) and "T*T" in str(e.value)


def test_unknown_keys_rejected():
    with pytest.raises(DocumentError, match="unknown key"):
        parse_presentation('{"field":"Q","basis":[["1",0]],"one":"1","mul":[],"colour":1}')


def test_bad_scalar_has_path():
    with pytest.raises(DocumentError, match=r"\$\.mul\[0\]\.out\[0\]\.c"):
        parse_presentation('{"field":"Q","basis":[["1",0]],"one":"1","mul":[{"l":"1","r":"1","out":[{"b":"1","c":"one"}]}]}')


def test_json_syntax_error_has_line():
    with pytest.raises(DocumentError, match="line 2"):
        parse_presentation('{"field": "Q",\n oops}')


def test_missing_products_are_linted(caplog):
    with caplog.at_level("WARNING", logger="dgbrauer"):
        parse_presentation('{"field":"Q","basis":[["1",0],["x",0]],"one":"1","mul":[]}')
    assert "lint" in caplog.text


def test_template_emission_is_byte_stable():
    texts = {emit(document_from_dg(make_template("5a", GF(3)))) for _ in range(3)}
    assert len(texts) == 1


def test_classify_example(capsys):
    code, out, _ = run(capsys, "classify", fx("case3_f5.json"))
    assert code == 0 and out.splitlines()[0] == "case 3, y = T"


def test_homology_example(capsys):
    code, out, _ = run(capsys, "homology", fx("case2_q.json"), "--window", "-4:4")
    assert code == 0
    rows = {int(l.split()[0][2:]): int(l.split()[2]) for l in out.splitlines() if l.startswith("H_")}
    assert rows == {n: (1 if n % 2 == 0 else 0) for n in range(-4, 5)}


def test_azumaya_example(capsys):
    code, out, _ = run(capsys, "azumaya", fx("qx2.json"), "--base", fx("q.json"))
    assert code == 1 and "mu not surjective in degree 0" in out.splitlines()


def test_unknown_command_exit_two(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "usage" in err


def test_invalid_input_exit_two(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"field":"Q"}')
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "missing key" in err


def test_json_report_is_canonical(capsys):
    code, out, _ = run(capsys, "--json", "classify", fx("case3_f5.json"))
    assert code == 0
    assert out == emit(json.loads(out))
    assert json.loads(out)["summary"] == "case 3, y = T"


def test_template_and_tensor_commands(capsys, tmp_path):
    t1 = tmp_path / "k.json"
    assert run(capsys, "template", "4a", "--field", "Fp:3", "-o", str(t1))[0] == 0
    out = tmp_path / "kk.json"
    code, text, _ = run(capsys, "tensor", str(t1), str(t1), "--base", str(t1), "-o", str(out))
    assert code == 0 and "rank 1" in text
    doc = load(str(out))
    assert doc.data["over"]["base"] == "k.json"
    code, text, _ = run(capsys, "validate", str(out))
    assert code == 0 and "free over base: rank 1" in text


def test_end_command(capsys, tmp_path):
    out = tmp_path / "end.json"
    code, text, _ = run(capsys, "end", fx("acyclic_module_q.json"), "-o", str(out))
    assert code == 0 and "rank 4" in text
    code, text, _ = run(capsys, "homology", str(out))
    assert code == 0 and "acyclic: yes" in text


def test_agr_and_structure_commands(capsys):
    code, text, _ = run(capsys, "agr", fx("case3_f5.json"))
    assert code == 0 and text.splitlines()[0] == "y = T"
    code, text, _ = run(capsys, "agr", fx("case2_q.json"))
    assert code == 1
    code, text, _ = run(capsys, "structure", fx("quaternions_q.json"))
    assert code == 0 and "graded-division: yes (anisotropic norm certificate)" in text


def test_mu_and_derivations_commands_with_figures(capsys, tmp_path):
    fig = tmp_path / "mu.png"
    code, text, _ = run(capsys, "mu", fx("quaternions_q.json"), "--base", fx("q.json"), "--figure", str(fig))
    assert code == 0 and "degree 0: rank 16 (source 16, target 16)" in text
    assert fig.stat().st_size > 0
    fig2 = tmp_path / "der.png"
    code, text, _ = run(capsys, "derivations", fx("qx2.json"), "--base", fx("q.json"), "--figure", str(fig2))
    assert code == 1 and "outer derivations exist" in text and fig2.exists()
    fig3 = tmp_path / "h.svg"
    assert run(capsys, "homology", fx("case2_q.json"), "--figure", str(fig3))[0] == 0 and fig3.exists()


def test_reports_are_deterministic(capsys):
    a = run(capsys, "--json", "azumaya", fx("qx2.json"), "--base", fx("q.json"))
    b = run(capsys, "--json", "azumaya", fx("qx2.json"), "--base", fx("q.json"))
    assert a == b
