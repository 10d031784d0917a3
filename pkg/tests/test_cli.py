import csv
import io
import json
import math

import pytest

from cvbell import cli, figures, gaussian
from cvbell.bell import bell_value_equal_settings


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_expand_full_chsh():
    code, text = run("expand", "--n", "2", "--full")
    assert code == 0
    doc = json.loads(text)
    signs = {t["selector_bits"]: t["num"] for t in doc["terms"]}
    assert signs == {0: 1, 1: 1, 2: 1, 3: -1}


def test_expand_five_classes():
    doc = json.loads(run("expand", "--n", "5")[1])
    nonzero = [(c["k"], c["num"] / 2 ** c["den_pow2"]) for c in doc["classes"] if c["num"]]
    assert nonzero == [(0, -0.5), (2, 0.5), (4, -0.5)]


def test_expand_invalid_n():
    assert run("expand", "--n", "1")[0] == 2


def test_eval_trivial():
    code, text = run("eval", "--n", "2", "--r", "0", "--j", "0")
    assert code == 0
    (row,) = rows(text)
    assert list(row) == ["n", "r", "j", "value", "cancellation_estimate"]
    assert float(row["value"]) == 2.0


def test_eval_asymptotic():
    (row,) = rows(run("eval", "--n", "2", "--asymptotic", "--a", "0.2310490602")[1])
    assert float(row["value"]) == pytest.approx(2.1905, abs=1e-4)
    assert "r" not in row


def test_eval_phases_cross_path():
    half_pi = repr(math.pi / 2)
    (row,) = rows(run("eval", "--n", "3", "--r", "1", "--j", "0.05", "--phases", ",".join([half_pi] * 3))[1])
    assert float(row["value"]) == pytest.approx(bell_value_equal_settings(3, 1.0, 0.05).value, abs=1e-12)
    (row,) = rows(run("eval", "--n", "3", "--r", "1", "--j", "0.05", "--phases", "1.5708,1.5708,1.5708")[1])
    assert float(row["value"]) == pytest.approx(bell_value_equal_settings(3, 1.0, 0.05).value, abs=1e-9)


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "--n", "2", "--asymptotic", "--a", "0.1", "--r", "1"),
        ("eval", "--n", "2", "--r", "1"),
        ("eval", "--n", "2", "--a", "0.1"),
        ("eval", "--n", "3", "--r", "1", "--j", "0.1", "--phases", "1,2"),
        ("eval", "--n", "2", "--r", "1", "--j", "-0.1"),
    ],
)
def test_eval_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["max", "--n", "3", "--r", "1", "--asymptotic"])
    assert exc.value.code == 2


def test_max_asymptotic():
    code, text = run("max", "--n", "5", "--asymptotic")
    assert code == 0
    table = rows(text)
    assert list(table[0]) == ["n", "mode", "arg", "value"]
    assert table[0]["mode"] == "global"
    assert float(table[0]["arg"]) == pytest.approx(0.14440, abs=1e-5)
    assert float(table[0]["value"]) == pytest.approx(2.48, abs=5e-3)


def test_max_nine_parties():
    table = rows(run("max", "--n", "9", "--asymptotic")[1])
    assert float(table[0]["value"]) == pytest.approx(2.6, abs=0.05)


def test_max_zero_squeezing():
    table = rows(run("max", "--n", "2", "--r", "0")[1])
    assert float(table[0]["arg"]) == 0.0 and float(table[0]["value"]) == 2.0


def test_csv_round_trip():
    text = run("max", "--n", "45", "--asymptotic")[1]
    for row in rows(text):
        for key in ("arg", "value"):
            assert cli.fmt(float(row[key])) == row[key]


def test_output_deterministic():
    assert run("max", "--n", "7", "--r", "0.8")[1] == run("max", "--n", "7", "--r", "0.8")[1]


def test_figure_unwritable(tmp_path):
    code = cli.main(["figure", "--which", "2", "--out", str(tmp_path / "missing" / "f.csv")])
    assert code == 3


def test_figure_help_documents_grids(capsys):
    with pytest.raises(SystemExit):
        cli.main(["figure", "--help"])
    assert "400 equal steps" in capsys.readouterr().out


def test_figure_one(tmp_path):
    path = tmp_path / "fig1.csv"
    assert cli.main(["figure", "--which", "1", "--out", str(path)]) == 0
    table = rows(path.read_text())
    assert len(table) == 4 * 101 * 201
    assert max(float(r["value"]) for r in table if float(r["r"]) == 0) <= 2 + 1e-12


def test_figure_three_small_displacements_for_large_n(tmp_path, monkeypatch):
    monkeypatch.setattr(figures, "FIG23_N", (5, 25))
    monkeypatch.setattr(figures, "FIG3_R", (0.1,))
    path = tmp_path / "fig3.csv"
    assert cli.main(["figure", "--which", "3", "--out", str(path)]) == 0
    table = rows(path.read_text())
    top = {n: max(float(r["j"]) for r in table if r["n"] == n) for n in ("5", "25")}
    assert top["25"] < top["5"]
    best = {n: max(float(r["value"]) for r in table if r["n"] == n) for n in ("5", "25")}
    assert all(2 < v < 2.1 for v in best.values())


def test_verify_passes():
    code, text = run("verify")
    assert code == 0
    assert "fock_oracle" in text and "FAIL" not in text


def test_verify_fast_skips_fock():
    code, text = run("verify", "--fast")
    assert code == 0
    assert "fock_oracle" not in text


def test_verify_detects_sign_flip(monkeypatch):
    real = gaussian.beamsplitter

    def flipped(i, j, theta, n):
        m = real(i, j, theta, n).matrix.copy()
        m[2 * j : 2 * j + 2, :] *= -1  # a_j -> -a_i sin + a_j cos
        return gaussian.SymplecticOp(m)

    monkeypatch.setattr(gaussian, "beamsplitter", flipped)
    code, text = run("verify", "--fast")
    assert code == 1
    assert any(line.startswith("quadratic_form") and "FAIL" in line for line in text.splitlines())
