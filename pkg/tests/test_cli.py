import json
import os

import pytest

from superinv import (
    ANY,
    EVEN,
    GrassmannScalar,
    ODD,
    Queer,
    Standard,
    SuperMatrix,
)
from superinv.cli import main
from superinv.reduction import SpectralDecomposition

G = GrassmannScalar


def write_matrix(path, matrix):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(matrix.to_obj(), handle)
    return str(path)


@pytest.fixture
def q1_file(tmp_path):
    q = 1
    a = SuperMatrix(Queer(1), ANY, [[G.rational(q, 2) + G.generator(q, 1)]])
    return write_matrix(tmp_path / "q1.json", a)


@pytest.fixture
def odd_file(tmp_path):
    q = 2
    x1, x2 = G.generator(q, 1), G.generator(q, 2)
    a = SuperMatrix(Standard(1, 1), ODD, [[x1, G.rational(q, 2)], [G.rational(q, 3), x2]])
    return write_matrix(tmp_path / "odd.json", a)


def test_invariants_command_json(q1_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["invariants", q1_file, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    from fractions import Fraction

    assert G.from_obj(report["qtr"]) == G.generator(1, 1)
    assert G.from_obj(report["qet"]) == G.generator(1, 1) * Fraction(1, 2)
    taus = [G.from_obj(t) for t in report["tau"]]
    assert taus == [G.generator(1, 1), 2 * G.generator(1, 1)]


def test_invariants_rational_matrix_zero_taus(tmp_path):
    a = SuperMatrix.from_rationals(Queer(2), ANY, [[1, 2], [3, 4]], 2)
    path = write_matrix(tmp_path / "rational.json", a)
    out = tmp_path / "r.json"
    assert main(["invariants", path, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert all(G.from_obj(t).is_zero() for t in report["tau"])


def test_invariants_text_format(q1_file, capsys):
    assert main(["invariants", q1_file, "--format", "text"]) == 0
    text = capsys.readouterr().out
    assert "qtr = e1" in text
    assert "tau[2] = 2*e1" in text


def test_invariants_malformed_parity_exit_code(tmp_path, capsys):
    obj = SuperMatrix.from_rationals(Standard(1, 1), EVEN, [[1, 0], [0, 1]], 2).to_obj()
    obj["entries"][0][1] = {"q": 2, "terms": [{"idx": [], "coeff": "1"}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    assert main(["invariants", str(path)]) == 3
    err = capsys.readouterr().err
    assert "(1, 2)" in err


def test_reduce_modes_round_trip(odd_file, tmp_path):
    out = tmp_path / "dec.json"
    assert main(["reduce", odd_file, "--mode", "odd", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    dec = SpectralDecomposition.from_obj(obj)
    original = SuperMatrix.from_obj(json.loads(open(odd_file).read()))
    assert dec.verify(original)
    q = 2
    x1, x2 = G.generator(q, 1), G.generator(q, 2)
    blk = dec.blocks[0][1]
    assert blk.rows[0][0] == x1 + x2
    assert blk.rows[0][1] == G.rational(q, 6) - x1 * x2


def test_reduce_blockdiag_and_diagonalize(tmp_path):
    a = SuperMatrix(Queer(2), ANY,
                    [[G.one(1), G.generator(1, 1)], [G.zero(1), G.rational(1, 2)]])
    path = write_matrix(tmp_path / "upper.json", a)
    for mode in ("blockdiag", "diagonalize"):
        out = tmp_path / ("%s.json" % mode)
        assert main(["reduce", path, "--mode", mode, "--out", str(out)]) == 0
        dec = SpectralDecomposition.from_obj(json.loads(out.read_text()))
        assert dec.verify(a)


def test_reduce_antidiag(tmp_path):
    a = SuperMatrix(Standard(1, 1), ODD,
                    [[G.generator(1, 1), G.rational(1, 2)], [G.one(1), -G.generator(1, 1)]])
    path = write_matrix(tmp_path / "anti.json", a)
    out = tmp_path / "anti_dec.json"
    assert main(["reduce", path, "--mode", "antidiag", "--out", str(out)]) == 0
    dec = SpectralDecomposition.from_obj(json.loads(out.read_text()))
    assert dec.verify(a)
    reduced = dec.blocks[0][1]
    assert reduced.rows[0][0].is_zero()
    assert reduced.rows[1][0] == 1


def test_reduce_nonsplitting_exit_code(tmp_path):
    a = SuperMatrix.from_rationals(Queer(2), ANY, [[0, -1], [1, 0]], 2)
    path = write_matrix(tmp_path / "rot.json", a)
    assert main(["reduce", path, "--mode", "diagonalize"]) == 4


def test_verify_pass_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "report.ndjson"
    assert main(["verify", "thm-3.3", "--seed", "7", "--trials", "3",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    summary = json.loads(lines[-1])["summary"]
    assert summary["failures"] == 0
    records = [json.loads(line) for line in lines[:-1]]
    assert all(r["status"] == "pass" for r in records)
    assert all(r["suite"] == "thm-3.3" for r in records)


def test_verify_worked_command_line(tmp_path):
    out = tmp_path / "t33.ndjson"
    assert main(["verify", "thm-3.3", "--seed", "7", "--trials", "50",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert json.loads(lines[-1])["summary"]["failures"] == 0


def test_verify_unknown_suite_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "nonsense"])
    assert err.value.code == 2


def test_verify_deterministic_output(tmp_path):
    out1 = tmp_path / "a.ndjson"
    out2 = tmp_path / "b.ndjson"
    assert main(["verify", "lemma-3.2", "--seed", "3", "--trials", "4", "--out", str(out1)]) == 0
    assert main(["verify", "lemma-3.2", "--seed", "3", "--trials", "4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_verify_worker_pool_matches_sequential(tmp_path):
    out1 = tmp_path / "seq.ndjson"
    out2 = tmp_path / "par.ndjson"
    assert main(["verify", "all", "--seed", "1", "--trials", "1", "--out", str(out1)]) == 0
    os.environ["SUPERINV_WORKERS"] = "3"
    try:
        assert main(["verify", "all", "--seed", "1", "--trials", "1", "--out", str(out2)]) == 0
    finally:
        del os.environ["SUPERINV_WORKERS"]
    assert out1.read_bytes() == out2.read_bytes()


def test_env_q_cap_override(tmp_path, q1_file):
    os.environ["SUPERINV_MAX_Q"] = "1"
    try:
        assert main(["invariants", q1_file]) == 0
    finally:
        del os.environ["SUPERINV_MAX_Q"]
    from superinv.grassmann import generator_cap, set_generator_cap

    assert generator_cap() == 1
    set_generator_cap(16)


def test_missing_file_exit_code(capsys):
    assert main(["invariants", "/nonexistent/file.json"]) == 3
