import csv
import io
import json
import subprocess
import sys

import pytest

from classexpand.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(out):
    return [json.loads(line) for line in out.splitlines()]


def test_class_size(capsys):
    code, out, _ = run(capsys, "class-size", "--n", "5", "--type", "2^2 1", "--format", "jsonl")
    assert code == 0 and jsonl(out)[0]["sizes"] == [15]
    code, out, _ = run(capsys, "class-size", "--n", "5", "--type", "1^5", "--format", "jsonl")
    assert jsonl(out)[0]["sizes"] == [1]
    code, out, _ = run(capsys, "class-size", "--n", "5", "--type", "5", "--group", "alt")
    assert code == 0 and "split=True" in out and "sizes=[12, 12]" in out


def test_class_size_parse_error(capsys):
    code, _, err = run(capsys, "class-size", "--n", "5", "--type", "2 0^1")
    assert code == 2 and "position 2" in err


def test_star(capsys):
    code, out, _ = run(capsys, "star", "--n", "5", "--type1", "2", "--type2", "2", "--eps", "1/2", "--format", "jsonl")
    rec = jsonl(out)[0]
    assert code == 0 and rec["star_size"] == 15 and rec["verdict"] is True
    code, out, _ = run(capsys, "star", "--n", "6", "--type1", "3", "--type2", "1^6", "--format", "jsonl")
    rec = jsonl(out)[0]
    assert rec["star_size"] == rec["size1"]
    code, out, _ = run(capsys, "star", "--n", "100", "--type1", "2^2", "--type2", "2^2", "--eps", "1/10",
                       "--format", "jsonl")
    assert jsonl(out)[0]["star_size"] == 19539228901500


def test_decimal_epsilon_rejected(capsys):
    code, _, err = run(capsys, "star", "--n", "5", "--type1", "2", "--type2", "2", "--eps", "0.5")
    assert code == 2 and "p/q" in err


def test_sweep_threshold(capsys):
    code, out, _ = run(capsys, "sweep", "--mode", "threshold", "--n", "40..45", "--format", "jsonl")
    recs = jsonl(out)
    assert code == 0 and recs[-1]["violations"] == 0 and len(recs) == 7


def test_sweep_bounds(capsys):
    code, out, _ = run(capsys, "sweep", "--mode", "bounds", "--n", "2..30", "--format", "jsonl")
    assert code == 0 and jsonl(out)[-1]["violations"] == 0


def test_sweep_eta(capsys):
    code, out, _ = run(capsys, "sweep", "--mode", "eta", "--n", "1..20", "--s", "1", "--format", "jsonl")
    recs = jsonl(out)[:-1]
    assert code == 0 and [r["n"] for r in recs] == list(range(1, 21))
    assert recs[3]["eta"] == "43/24"
    code, out, _ = run(capsys, "sweep", "--mode", "eta", "--n", "3..4", "--s", "1/2", "--format", "jsonl")
    assert "eta_lo" in jsonl(out)[0]


def test_sweep_expansion_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--mode", "expansion", "--n", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows
    assert list(rows[0]) == ["n", "type1", "type2", "size1", "size2", "star_size", "epsilon", "verdict"]


def test_sweep_caps(capsys):
    assert run(capsys, "sweep", "--mode", "expansion", "--n", "10..17")[0] == 3
    assert run(capsys, "sweep", "--mode", "bounds", "--n", "41")[0] == 3


def test_sweep_jobs_do_not_change_output(capsys):
    args = ("sweep", "--mode", "bounds", "--n", "2..14", "--format", "jsonl")
    _, one, _ = run(capsys, *args, "--jobs", "1")
    _, three, _ = run(capsys, *args, "--jobs", "3")
    assert one == three


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--group", "A5", "--task", "covering", "--classes", "3^1 1^2", "--format", "jsonl")
    assert code == 0 and jsonl(out)[0]["covering_number"] == 2
    code, out, _ = run(capsys, "oracle", "--group", "S4", "--task", "classes", "--format", "jsonl")
    assert jsonl(out)[-1]["profile"] == {"1": 1, "3": 1, "6": 2, "8": 1}
    code, out, _ = run(capsys, "oracle", "--group", "PSL(3,2)", "--task", "classes", "--format", "jsonl")
    summary = jsonl(out)[-1]
    assert summary["classes"] == 6 and summary["order"] == 168
    code, out, _ = run(capsys, "oracle", "--group", "A5", "--task", "bigclass", "--classes", "3,2^2", "--eps", "1/4",
                       "--format", "jsonl")
    assert jsonl(out)[0]["verdict"] is True
    code, out, _ = run(capsys, "oracle", "--group", "S5", "--task", "star-contain", "--type1", "2", "--type2", "2",
                       "--format", "jsonl")
    assert code == 0 and jsonl(out)[0]["star_size_oracle"] == 15


def test_oracle_errors(capsys):
    assert run(capsys, "oracle", "--group", "S9", "--task", "classes")[0] == 3
    assert run(capsys, "oracle", "--group", "A5", "--task", "covering", "--classes", "2 1^3")[0] == 2
    assert run(capsys, "oracle", "--group", "Q8", "--task", "classes")[0] == 2


def test_classical(capsys):
    code, out, _ = run(capsys, "classical", "--spec", "L 3 2", "--s", "1", "--task", "bounds", "--format", "jsonl")
    rec = jsonl(out)[0]
    assert code == 0 and (rec["lo"], rec["hi"], rec["constant_caveat"]) == ("2", "6", True)
    code, out, _ = run(capsys, "classical", "--blocks", "2^1 1^1", "--task", "exponents", "--format", "jsonl")
    rec = jsonl(out)[0]
    assert (rec["f"], rec["g"], rec["h"]) == (5, 6, 4)
    d1 = "Sp 8 3 | +1 | 2^1 1^6 | 0"
    d2 = "Sp 8 3 | -1 | 2^1 1^6 | 0"
    code, out, _ = run(capsys, "classical", "--desc", d1, "--task", "star", "--with", d2, "--format", "jsonl")
    rec = jsonl(out)[0]
    assert code == 0 and rec["nu_y"] == rec["nu1"] + rec["nu2"] == 2
    assert rec["y"] == "Sp 8 3 | -1 | 2^2 1^4 | 0"
    code, out, _ = run(capsys, "classical", "--spec", "Sp 6 2", "--s", "2", "--task", "dims", "--format", "jsonl")
    rec = jsonl(out)[0]
    assert (rec["lo"], rec["hi"]) == ("6", "11")


def test_classical_errors(capsys):
    assert run(capsys, "classical", "--desc", "Sp 8 3 | +1 | 2^1 1^5 | 0", "--task", "star", "--with", "x")[0] == 2
    assert run(capsys, "classical", "--spec", "L 4 2", "--s", "2", "--task", "bounds")[0] == 2


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "2,8", "--format", "jsonl")
    recs = jsonl(out)
    assert code == 0 and recs[-1]["criteria"] == {"2": "pass", "8": "pass"}


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["sweep", "--mode", "nope", "--n", "3"])
    assert info.value.code == 2
    capsys.readouterr()
    assert run(capsys, "sweep", "--mode", "eta", "--n", "5..3")[0] == 2
    assert run(capsys, "sweep", "--mode", "eta", "--n", "3", "--precision", "8")[0] == 2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("sweep", {}, precision_bits=15)
    with pytest.raises(ValueError):
        RunConfig("sweep", {}, output_format="json")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "classexpand", "class-size", "--n", "4", "--type", "2 1^2"],
                          capture_output=True, text=True, check=True)
    assert "sizes=[6]" in proc.stdout
