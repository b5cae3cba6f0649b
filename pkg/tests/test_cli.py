import csv
import io
import json

import pytest

from hybridgnfs.cli import main, parse_int


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_int():
    assert parse_int("0xB039") == 45113
    assert parse_int(" 45113 ") == 45113


def test_factor_text(capsys):
    code, out, _ = run(capsys, "factor", "45113")
    assert code == 0
    assert "197 * 229" in out
    assert "dependencies" in out and "M1" in out


def test_factor_hex_json(capsys):
    code, out, _ = run(capsys, "factor", "0xB039", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == 1
    assert doc["result"]["factors"] == [197, 229]
    assert "timings" not in doc["result"]["splits"][0]


def test_factor_hybrid_reports_offload(capsys):
    code, out, _ = run(capsys, "factor", "45113", "--mode", "hybrid", "--seed", "7", "--format", "json")
    split = json.loads(out)["result"]["splits"][0]
    assert code == 0 and json.loads(out)["result"]["factors"] == [197, 229]
    assert split["offload"]["tiles_dispatched"] > 0


def test_factor_prime(capsys):
    code, out, _ = run(capsys, "factor", "17")
    assert code == 0 and "prime" in out


def test_malformed_input_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["factor", "12x"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 1


def test_pipeline_failure_exit_2(capsys):
    code, out, err = run(capsys, "factor", "1022117", "--M", "3", "--B", "30", "--format", "json")
    assert code == 2
    assert "failed" in err


def test_estimate_csv_header(capsys):
    code, out, _ = run(capsys, "estimate", "--bits", "2048", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "algorithm,n,log_time_natural,qubits,notes"
    rows = list(csv.DictReader(io.StringIO(out)))
    shor = next(r for r in rows if r["algorithm"] == "shor")
    assert float(shor["qubits"]) == 4096
    assert any(r["algorithm"].startswith("crossover") for r in rows)


def test_estimate_rejects_small_n(capsys):
    code, _, err = run(capsys, "estimate", "--bits", "4")
    assert code == 1


def test_estimate_parallel_grover(capsys):
    code, out, _ = run(
        capsys, "estimate", "--parallel-grover", "--space", "128", "--machines", "1000", "--latency-ns", "1",
        "--format", "json",
    )
    row = json.loads(out)["result"]["parallel_grover"][0]
    assert code == 0
    assert 15 < row["wall_time_years"] < 20


def test_tiles_too_small_region(capsys):
    code, _, err = run(capsys, "tiles", "--region", "-20", "20", "1500", "1505", "--samples", "2000")
    assert code == 1
    assert "region" in err


def test_shor_sim(capsys):
    code, out, _ = run(capsys, "shor-sim", "15", "--seed", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["factors"] == [3, 5]


@pytest.mark.parametrize("N", ["33", "16", "13"])
def test_shor_sim_rejections(capsys, N):
    code, _, _ = run(capsys, "shor-sim", N)
    assert code == 1


def test_grover_sim_probability_format(capsys):
    code, out, _ = run(capsys, "grover-sim", "--T", "256", "--k", "2", "--trials", "500", "--format", "json")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["found_rate"] == round(res["found_rate"], 4)
    assert 0 <= res["closed_form"] <= 1


def test_bench_rows(capsys):
    code, out, _ = run(capsys, "bench", "--N", "45113", "10403", "--no-timing", "--workers", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert len(rows) == 4
    assert {r["mode"] for r in rows} == {"classical", "hybrid"}


def test_bench_larger_b_more_relations_per_area(capsys):
    dens = []
    for B in ("100", "300"):
        _, out, _ = run(capsys, "bench", "--N", "45113", "--modes", "classical", "--B", B, "--no-timing")
        dens.append(float(next(csv.DictReader(io.StringIO(out)))["relations_per_kpair"]))
    assert dens[1] > dens[0]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "shor-sim", "21", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "shor-sim"


@pytest.mark.parametrize(
    "argv",
    [
        ["factor", "1022117", "--mode", "hybrid", "--format", "json"],
        ["grover-sim", "--trials", "300", "--format", "json"],
        ["shor-sim", "21", "--format", "json"],
    ],
)
def test_byte_identical_reruns(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
