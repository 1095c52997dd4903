from __future__ import annotations

import json

import pytest

from k0lattice import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def cls(n, basis, *coeffs):
    return json.dumps({"n": n, "basis": basis, "coeffs": [str(c) for c in coeffs]})


def test_gram(capsys):
    code, out, _ = run(capsys, "gram", "--n", "2", "--basis", "line_bundle")
    assert code == 0
    assert json.loads(out)["rows"] == [["1", "3", "6"], ["0", "1", "3"], ["0", "0", "1"]]

    code, out, _ = run(capsys, "gram", "--n", "0")
    assert json.loads(out)["rows"] == [["1"]]

    code, out, _ = run(capsys, "gram", "--n", "3")
    assert json.loads(out)["rows"][0][3] == "20"


def test_gram_pretty(capsys):
    code, out, _ = run(capsys, "--format", "pretty", "gram", "--n", "1")
    assert code == 0
    assert out.splitlines() == ["[1 2]", "[0 1]"]
    code, out2, _ = run(capsys, "gram", "--n", "1", "--format", "pretty")
    assert out2 == out


def test_gram_bad_arguments(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["gram", "--basis", "line_bundle"])
    assert info.value.code == 2
    code, _, err = run(capsys, "gram", "--n", "-1")
    assert code == 2
    assert err.startswith("error:")


def test_chi(capsys):
    code, out, _ = run(capsys, "chi", cls(2, "line_bundle", 1, 0, 0), cls(2, "line_bundle", 0, 1, 0))
    assert code == 0
    assert json.loads(out) == "3"


def test_chi_from_input_file(capsys, tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps([json.loads(cls(1, "line_bundle", 1, 0)), json.loads(cls(1, "line_bundle", 0, 1))]))
    code, out, _ = run(capsys, "chi", "--input", str(path))
    assert code == 0
    assert json.loads(out) == "2"


def test_chi_errors(capsys):
    code, _, err = run(capsys, "chi", "{not json", cls(1, "line_bundle", 1, 0))
    assert code == 2
    code, _, err = run(capsys, "chi", cls(1, "line_bundle", 1, 0), cls(2, "line_bundle", 1, 0, 0))
    assert code == 3
    assert "dimension mismatch" in err
    code, _, _ = run(capsys, "chi", cls(1, "line_bundle", 1, 0))
    assert code == 2


def test_convert(capsys):
    code, out, _ = run(capsys, "convert", cls(2, "line_bundle", 0, 0, 1), "--basis", "structure_sheaf")
    assert code == 0
    assert json.loads(out) == {"n": 2, "basis": "structure_sheaf", "coeffs": ["3", "2", "1"]}

    code, out, _ = run(capsys, "--format", "pretty", "convert", cls(2, "line_bundle", 0, 0, 1), "--basis", "structure_sheaf")
    assert out.strip() == "O_P2 + 2·O_P1 + 3·O_P0"


def test_tensor_with_structure_sheaf_is_identity(capsys):
    e = cls(3, "structure_sheaf", "1/2", -1, 4, 2)
    code, out, _ = run(capsys, "tensor", cls(3, "line_bundle", 1, 0, 0, 0), e)
    assert code == 0
    result = json.loads(out)
    assert result["basis"] == "line_bundle"
    code, out2, _ = run(capsys, "convert", out, "--basis", "structure_sheaf")
    assert json.loads(out2)["coeffs"] == ["1/2", "-1", "4", "2"]


def test_rank(capsys):
    code, out, _ = run(capsys, "rank", cls(3, "line_bundle", 0, 0, 1, 0))
    assert code == 0
    assert json.loads(out) == {"rank": 1, "c1": 2}
    code, _, _ = run(capsys, "rank", cls(3, "structure_sheaf", "1/2", 0, 0, 0))
    assert code == 3


def test_kappa(capsys):
    code, out, _ = run(capsys, "kappa", "--n", "1")
    assert code == 0
    doc = json.loads(out)
    # -exp(-2D) with D = [[0, 1], [0, 0]]
    assert doc["rows"] == [["-1", "2"], ["0", "-1"]]
    assert doc["repr"] == "matrix"


def test_isom_check_even_top_coefficient(capsys):
    code, out, _ = run(capsys, "isom-check", json.dumps({"n": 4, "sign": 1, "odd_coeffs": ["0", "1"]}))
    assert code == 1
    doc = json.loads(out)
    assert doc["lattice"] is False
    assert doc["reason"] == "top coefficient must be even"


def test_isom_check_minus_identity_matrix(capsys):
    matrix = {"repr": "matrix", "basis": "line_bundle", "rows": [["-1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]]}
    code, out, _ = run(capsys, "isom-check", json.dumps(matrix))
    assert code == 0
    doc = json.loads(out)
    assert doc["lattice"] is True
    assert doc["classification"]["sign"] == -1
    assert doc["classification"]["odd_coeffs"] == ["0"]


def test_isom_check_n5_generator(capsys):
    code, out, _ = run(capsys, "isom-check", "--n", "5", json.dumps({"sign": 1, "odd_coeffs": ["0", "2", "1/2"]}))
    assert code == 0
    assert json.loads(out)["lattice"] is True


def test_isom_check_not_an_isometry(capsys):
    matrix = {"repr": "matrix", "rows": [["2", "0"], ["0", "2"]]}
    code, _, err = run(capsys, "isom-check", json.dumps(matrix))
    assert code == 3
    assert err.startswith("error:")


def test_generators_n2(capsys):
    code, out, _ = run(capsys, "generators", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["generators"] == [{"sign": 1, "odd_coeffs": ["1"]}]
    assert doc["tensor_classes"][0]["coeffs"] == ["1", "1", "1"]


@pytest.mark.slow
def test_generators_n5(capsys):
    code, out, _ = run(capsys, "generators", "--n", "5")
    assert code == 0
    doc = json.loads(out)
    assert [g["odd_coeffs"] for g in doc["generators"]] == [["1", "0", "0"], ["0", "2", "1/2"], ["0", "0", "1"]]
    assert [c["coeffs"] for c in doc["tensor_classes"][1:]] == [
        ["4", "3", "2", "0", "0", "1"],
        ["1", "0", "0", "0", "0", "1"],
    ]


@pytest.mark.slow
def test_generators_pretty(capsys):
    code, out, _ = run(capsys, "--format", "pretty", "generators", "--n", "6")
    assert code == 0
    assert "O_P6 + 2·O_P3 + 3·O_P2 + 4·O_P1 + 7·O_P0" in out
    assert "O_P6 + 2·O_P1 + 5·O_P0" in out


def test_generators_budget(capsys):
    code, out, err = run(capsys, "generators", "--n", "5", "--budget", "1")
    assert code == 4
    doc = json.loads(out)
    assert doc["partial"] is True
    assert doc["table"]["n"] == 5
    assert "budget" in err


def test_mutate(capsys):
    code, out, _ = run(capsys, "mutate", "g0", "--n", "1")
    assert code == 0
    doc = json.loads(out)
    assert [c["coeffs"] for c in doc["result"]["classes"]] == [["-2", "1"], ["1", "0"]]
    assert doc["exceptional"] is True
    assert doc["word"] == "g0"


def test_mutate_empty_word_and_explicit_tuple(capsys):
    t = json.dumps({"n": 1, "classes": [json.loads(cls(1, "line_bundle", 1, 0)), json.loads(cls(1, "line_bundle", 0, 1))]})
    code, out, _ = run(capsys, "mutate", "", "--tuple", t)
    assert code == 0
    assert [c["coeffs"] for c in json.loads(out)["result"]["classes"]] == [["1", "0"], ["0", "1"]]


def test_mutate_braid_relation(capsys):
    _, a, _ = run(capsys, "mutate", "g0 g1 g0", "--n", "2")
    _, b, _ = run(capsys, "mutate", "g1 g0 g1", "--n", "2")
    assert json.loads(a)["result"] == json.loads(b)["result"]


def test_mutate_malformed_word(capsys):
    code, _, err = run(capsys, "mutate", "g0 x1", "--n", "2")
    assert code == 2
    code, _, _ = run(capsys, "mutate", "g2", "--n", "2")
    assert code == 2
    code, _, _ = run(capsys, "mutate", "g0")
    assert code == 2


def test_repl_session(capsys, monkeypatch):
    lines = iter(["g0", "undo", "bogus", "quit"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
    code, out, _ = run(capsys, "repl", "--n", "2")
    assert code == 0
    assert "error:" in out
    assert "exceptional: yes" in out


def test_repl_end_of_input(capsys, monkeypatch):
    def eof(prompt=""):
        raise EOFError

    monkeypatch.setattr("builtins.input", eof)
    code, _, _ = run(capsys, "repl", "--n", "1")
    assert code == 0
