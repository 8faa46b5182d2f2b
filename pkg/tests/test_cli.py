import json
from pathlib import Path

import pytest

from doldring.cli import (
    DEFAULT_FIXTURES,
    RequestError,
    batch,
    main,
    parse_request,
    pretty_name,
    pretty_poly,
    run,
)

CORPUS = DEFAULT_FIXTURES / "requests" / "corpus.json"
GOLDEN = Path(__file__).resolve().parent / "golden" / "corpus_report.json"


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_grassmann_example(capsys):
    code, out, _ = invoke(capsys, "--input", '{"kind":"grassmann","n":2,"k":1,"m":2,"checks":["hilbert"]}')
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "PASS"
    assert rep["hilbert"][:5] == [1, 1, 2, 1, 1] and not any(rep["hilbert"][5:])
    assert rep["presentation"]["relations"] == ["c1^2"]
    assert rep["presentation"]["truncation"] == {"var": "y", "power": 3}


def test_square_example(capsys):
    code, out, _ = invoke(capsys, "--input",
                          '{"kind":"torus","pair_file":"square.json","m":2,"checks":["hilbert","regular-sequence"]}')
    rep = json.loads(out)
    assert code == 0
    assert {k: v["verdict"] for k, v in rep["checks"].items()} == {"hilbert": "PASS", "regular-sequence": "PASS"}


def test_bad_lambda_fails_with_vertex(capsys):
    code, out, _ = invoke(capsys, "--input", '{"kind":"torus","pair_file":"bad_lambda.json","m":2}')
    rep = json.loads(out)
    assert code != 0 and rep["status"] == "FAIL"
    witness = rep["checks"]["validation"]["witness"]
    assert witness == [{"vertex": [1, 2], "facets": ["F2", "F3"], "det": -2}]


def test_every_fail_has_witness():
    docs = [
        {"kind": "torus", "pair_file": "bad_lambda.json", "m": 1, "checks": ["hilbert", "regular-sequence"]},
    ]
    for rep in batch(docs)["reports"]:
        for c in rep["checks"].values():
            assert c["verdict"] in ("PASS", "FAIL", "SKIPPED")
            if c["verdict"] == "FAIL":
                assert c["witness"]
            if c["verdict"] == "SKIPPED":
                assert c["reason"]


def test_parse_error_location(capsys):
    code, _, err = invoke(capsys, "--input", '{"kind": "grassmann",\n "n": 2,, }')
    assert code == 2 and "inline:2:9" in err


def test_field_error_location():
    with pytest.raises(RequestError) as exc:
        parse_request({"kind": "flag", "nu": [2, 1], "m": 1}, "input[3]")
    assert exc.value.location == "input[3].nu"
    with pytest.raises(RequestError) as exc:
        parse_request({"kind": "grassmann", "n": 4, "k": 2, "m": -1})
    assert exc.value.location == "request.m"
    with pytest.raises(RequestError):
        parse_request({"kind": "grassmann", "n": 4, "k": 2, "m": 1, "checks": ["bogus"]})
    with pytest.raises(RequestError):
        parse_request({"kind": "nope"})


def test_unknown_check_flag(capsys):
    code, _, err = invoke(capsys, "--input", '{"kind":"sphere","n":2,"m":1}', "--checks", "hilbert,bogus")
    assert code == 2 and "bogus" in err


def test_m_inf_and_default_degree():
    rep = run(parse_request({"kind": "sphere", "n": 2, "m": "inf"}))
    assert rep["max_degree"] == 20 and rep["hilbert"] == rep["oracle"]
    assert rep["presentation"]["truncation"] is None
    rep = run(parse_request({"kind": "sphere", "n": 2, "m": 3}))
    assert rep["max_degree"] == 2 + 3 + 2


def test_cw_crosscheck_skipped_for_infinite_base():
    rep = run(parse_request({"kind": "grassmann", "n": 3, "k": 1, "m": "inf", "checks": ["cw-crosscheck"]}))
    assert rep["checks"]["cw-crosscheck"]["verdict"] == "SKIPPED"
    assert rep["status"] == "PASS"


def test_batch_isolation(capsys):
    docs = [{"kind": "sphere", "n": 2, "m": 2}, {"kind": "grassmann", "n": 2, "k": 9, "m": 1}, 7,
            {"kind": "torus", "pair_file": "missing.json", "m": 1}, {"kind": "sphere", "n": 1, "m": 1}]
    code, out, _ = invoke(capsys, "--input", json.dumps(docs))
    result = json.loads(out)
    assert code == 1
    assert [r["status"] for r in result["summary"]] == ["PASS", "ERROR", "ERROR", "ERROR", "PASS"]
    assert "inline[1].k" in result["summary"][1]["error"]


def test_empty_batch(capsys):
    code, out, _ = invoke(capsys, "--input", "[]")
    assert code == 0 and json.loads(out)["summary"] == []


def test_corpus_all_pass(capsys):
    code, out, _ = invoke(capsys, "--input", str(CORPUS))
    result = json.loads(out)
    assert code == 0
    assert all(r["status"] == "PASS" for r in result["summary"])
    assert len(result["summary"]) == len(json.loads(CORPUS.read_text()))


def test_corpus_matches_golden(capsys):
    _, out, _ = invoke(capsys, "--input", str(CORPUS))
    assert json.loads(out) == json.loads(GOLDEN.read_text())


def test_parallel_batch_is_identical(capsys):
    _, serial, _ = invoke(capsys, "--input", str(CORPUS))
    _, parallel, _ = invoke(capsys, "--input", str(CORPUS), "--jobs", "3")
    assert serial == parallel


def test_timing_is_opt_in(capsys):
    _, out, _ = invoke(capsys, "--input", '{"kind":"sphere","n":2,"m":1}', "--timing")
    assert "elapsed_seconds" in json.loads(out)
    _, out, _ = invoke(capsys, "--input", '{"kind":"sphere","n":2,"m":1}')
    assert "elapsed_seconds" not in json.loads(out)


def test_text_format_uses_notation(capsys):
    code, out, _ = invoke(capsys, "--input", '{"kind":"flag","nu":[1,1,1],"m":2}', "--format", "text")
    assert code == 0
    assert "c̃_{1,1}" in out and "ŵ_{2,2}" in out and "y³" in out
    _, out, _ = invoke(capsys, "--input", '{"kind":"torus","pair_file":"square.json","m":1}', "--format", "text")
    assert "x̃₁ + x̃₃" in out


def test_pretty_helpers():
    assert pretty_name("x12") == "x̃₁₂"
    assert pretty_name("w4") == "ŵ₄"
    assert pretty_name("c2_3") == "c̃_{2,3}"
    assert pretty_name("y") == "y"
    assert pretty_poly("c1^2*y + c2") == "c̃₁²y + c̃₂"


def test_fixtures_dir_and_paths(tmp_path, capsys):
    pair = json.loads((DEFAULT_FIXTURES / "torus" / "triangle.json").read_text())
    (tmp_path / "torus").mkdir()
    (tmp_path / "torus" / "tri2.json").write_text(json.dumps(pair))
    code, out, _ = invoke(capsys, "--input", '{"kind":"torus","pair_file":"tri2.json","m":1}',
                          "--fixtures-dir", str(tmp_path))
    assert code == 0
    direct = tmp_path / "torus" / "tri2.json"
    code, _, _ = invoke(capsys, "--input", json.dumps({"kind": "torus", "pair_file": str(direct), "m": 1}))
    assert code == 0


def test_inline_pair_and_output_file(tmp_path, capsys):
    pair = json.loads((DEFAULT_FIXTURES / "torus" / "cube.json").read_text())
    target = tmp_path / "r.json"
    code, out, _ = invoke(capsys, "--input", json.dumps({"kind": "torus", "pair": pair, "m": 1}),
                          "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["status"] == "PASS"


def test_input_from_file(tmp_path, capsys):
    f = tmp_path / "req.json"
    f.write_text('{"kind":"cw","m":2,"x_file":"cp1.json","checks":["cw-crosscheck"]}')
    code, out, _ = invoke(capsys, "--input", str(f))
    assert code == 0 and json.loads(out)["betti"] == [1, 1, 2, 1, 1]
    code, _, err = invoke(capsys, "--input", str(tmp_path / "absent.json"))
    assert code == 2


def test_equivariant_request():
    rep = run(parse_request({"kind": "equivariant", "source": {"kind": "torus", "pair_file": "square.json"},
                             "max_degree": 5}))
    assert rep["hilbert"] == [1, 1, 3, 3, 4, 4]
