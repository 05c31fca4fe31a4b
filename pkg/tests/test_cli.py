"""End-to-end CLI behaviour: envelopes, exit codes, formats, determinism."""
from __future__ import annotations

import csv
import io
import json

import pytest

from growthlab import bell

from conftest import DATA, cli_json, run_cli

E_REL = str(DATA / "e_rel.expr")
SOMEGA = str(DATA / "somega.expr")
B110 = str(DATA / "b000110.txt")
B258 = str(DATA / "b000258.txt")
B849 = str(DATA / "b059849.txt")
PAIR9 = str(DATA / "pairing9.rel")
LESS10 = str(DATA / "less10.rel")
EMPTY64 = str(DATA / "empty64.rel")
FORBID_K2 = str(DATA / "forbid_k2.classes")
P3_K3 = str(DATA / "p3_k3.classes")


def assert_all_numbers_are_strings(node):
    """Every numeric leaf in the JSON envelope must be a decimal string."""
    if isinstance(node, dict):
        for v in node.values():
            assert_all_numbers_are_strings(v)
    elif isinstance(node, list):
        for v in node:
            assert_all_numbers_are_strings(v)
    else:
        assert not isinstance(node, float)
        assert isinstance(node, (str, bool)) or node is None


def rows_by_name(env, name):
    return [r for r in env["results"] if r.get("name") == name]


# ---------------------------------------------------------------------------
# seq


def test_seq_emits_bell_prefix():
    code, env = cli_json("seq", E_REL, "--max-n", "10")
    assert code == 0
    assert env["command"] == "seq"
    got = {int(r["n"]): int(r["value"]) for r in rows_by_name(env, "l")}
    assert got == {n: bell(n) for n in range(11)}
    assert_all_numbers_are_strings(env)


def test_seq_emits_stirling_transform_rows():
    code, env = cli_json("seq", E_REL, "--max-n", "6")
    assert code == 0
    got = {int(r["n"]): int(r["value"]) for r in rows_by_name(env, "s")}
    assert got[6] == 2471  # second-order bell number


def test_seq_reports_classification():
    code, env = cli_json("seq", E_REL, "--max-n", "5")
    assert code == 0
    rows = rows_by_name(env, "classification")
    assert len(rows) == 1 and rows[0]["verdict"] == "msnc"


def test_seq_oracle_check_agrees():
    code, env = cli_json(
        "seq", E_REL, "--max-n", "4", "--oracle-check", "--budget-tuples", "10000000"
    )
    assert code == 0
    oracle_rows = [r for r in env["results"] if r["name"].startswith("oracle")]
    assert oracle_rows
    assert all(r["verdict"] == "match" for r in oracle_rows)


def test_seq_missing_file_is_input_error():
    proc = run_cli("seq", "/nonexistent/y.expr")
    assert proc.returncode == 2
    assert proc.stderr.strip()


def test_seq_bad_expression_is_input_error(tmp_path):
    bad = tmp_path / "bad.expr"
    bad.write_text("(wr (finite 0))\n")
    proc = run_cli("seq", str(bad))
    assert proc.returncode == 2


def test_seq_capacity_exit(tmp_path):
    proc = run_cli("seq", E_REL, "--max-n", "4", "--oracle-check", "--budget-tuples", "5")
    assert proc.returncode == 3
    env = json.loads(proc.stdout)
    assert "capacity" in env["telemetry"]


# ---------------------------------------------------------------------------
# bounds


def test_bounds_msnc_passes_at_50():
    code, env = cli_json("bounds", E_REL, "--max-n", "50")
    assert code == 0
    fact = rows_by_name(env, "factorial-upper")
    assert len(fact) == 1
    assert fact[0]["verdict"] == "pass"
    assert fact[0]["n0"] == "35"


def test_bounds_msnc_fails_at_20():
    proc = run_cli("bounds", E_REL, "--max-n", "20")
    assert proc.returncode == 1
    env = json.loads(proc.stdout)
    fact = rows_by_name(env, "factorial-upper")
    assert fact and fact[0]["verdict"] == "fail"


def test_bounds_finite_has_no_bounds(tmp_path):
    f = tmp_path / "fin.expr"
    f.write_text("(finite 4)\n")
    code, env = cli_json("bounds", str(f))
    assert code == 0
    assert rows_by_name(env, "classification")[0]["verdict"] == "finite"


def test_bounds_cellular_grid_flag(tmp_path):
    f = tmp_path / "cell.expr"
    f.write_text("(wr (finite 2 full-sym))\n")
    code, env = cli_json("bounds", str(f), "--max-n", "30", "--grid", "1:1/2,2:2/3")
    assert code == 0
    cell = rows_by_name(env, "cellular-bound")
    assert cell and cell[0]["verdict"] == "pass"


def test_bounds_bad_grid_is_input_error(tmp_path):
    f = tmp_path / "cell.expr"
    f.write_text("(wr (finite 2 full-sym))\n")
    proc = run_cli("bounds", str(f), "--grid", "1:nonsense")
    assert proc.returncode == 2


# ---------------------------------------------------------------------------
# oeis


@pytest.mark.parametrize(
    "seq_name,bfile,max_n",
    [("bell", B110, "20"), ("bell2", B258, "15"), ("meet-trivial-pairs", B849, "8")],
)
def test_oeis_named_sequences_match(seq_name, bfile, max_n):
    code, env = cli_json("oeis", "--seq", seq_name, "--bfile", bfile, "--max-n", max_n)
    assert code == 0
    terms = rows_by_name(env, "term")
    assert len(terms) == int(max_n) + 1
    assert all(r["verdict"] == "match" for r in terms)


def test_oeis_expression_sequence():
    code, env = cli_json(
        "oeis", "--expr", E_REL, "--use-s", "--bfile", B258, "--max-n", "12"
    )
    assert code == 0


def test_oeis_mismatch_is_expected_negative():
    proc = run_cli("oeis", "--seq", "bell", "--bfile", B258, "--max-n", "10")
    assert proc.returncode == 1
    env = json.loads(proc.stdout)
    assert any(r["verdict"] == "mismatch" for r in rows_by_name(env, "term"))


def test_oeis_disjoint_ranges_are_input_error():
    proc = run_cli("oeis", "--seq", "bell", "--bfile", B110, "--offset", "900")
    assert proc.returncode == 2


def test_oeis_capacity_keeps_partial_rows(tmp_path):
    lines = [f"{n} {v}" for n, v in enumerate([1, 1, 3, 15, 113, 1153, 15125, 245829, 4815403])]
    lines += ["11 1", "12 1"]
    deep = tmp_path / "deep.txt"
    deep.write_text("\n".join(lines) + "\n")
    proc = run_cli("oeis", "--seq", "meet-trivial-pairs", "--bfile", str(deep), "--max-n", "12")
    assert proc.returncode == 3
    env = json.loads(proc.stdout)
    assert len(rows_by_name(env, "term")) == 9  # 0..8 compared before the cap


def test_oeis_requires_seq_or_expr():
    proc = run_cli("oeis", "--bfile", B110)
    assert proc.returncode == 2


# ---------------------------------------------------------------------------
# graphs


def test_graphs_count_forbidden():
    code, env = cli_json(
        "graphs", "count", "--class-file", FORBID_K2, "--mode", "forbidden", "--n", "4"
    )
    assert code == 0
    assert env["command"] == "graphs count"
    assert rows_by_name(env, "count_labelled")[0]["value"] == "1"


def test_graphs_count_generators():
    code, env = cli_json(
        "graphs", "count", "--class-file", P3_K3, "--mode", "generators", "--n", "3"
    )
    assert code == 0
    assert rows_by_name(env, "count_labelled")[0]["value"] == "4"


def test_graphs_count_capacity():
    proc = run_cli(
        "graphs", "count", "--class-file", FORBID_K2, "--mode", "forbidden", "--n", "9"
    )
    assert proc.returncode == 3


def test_graphs_semiinduced(tmp_path):
    gfile = tmp_path / "h4.graph"
    lines = ["v=8"] + [f"{i} {4 + j}" for i in range(4) for j in range(4) if i <= j]
    gfile.write_text("\n".join(lines) + "\n")
    code, env = cli_json("graphs", "semiinduced", "--graph-file", str(gfile))
    assert code == 0
    assert rows_by_name(env, "semi_induced_order")[0]["value"] == "4"


def test_graphs_fliproundtrip_random():
    code, env = cli_json("graphs", "fliproundtrip", "--k", "5", "--seeds", "10")
    assert code == 0
    summary = rows_by_name(env, "summary")
    assert summary and summary[0]["value"] == "0"


def test_graphs_fliproundtrip_exhaustive():
    code, env = cli_json("graphs", "fliproundtrip", "--k", "3", "--exhaustive")
    assert code == 0
    assert rows_by_name(env, "summary")[0]["value"] == "0"


# ---------------------------------------------------------------------------
# witness


def test_witness_order_found():
    code, env = cli_json("witness", "order", LESS10, "--size", "10")
    assert code == 0
    search = rows_by_name(env, "search")
    assert search and search[0]["verdict"] == "found"
    assert_all_numbers_are_strings(env)


def test_witness_order_none():
    proc = run_cli("witness", "order", LESS10, "--size", "11")
    assert proc.returncode == 1


def test_witness_coding_found():
    code, env = cli_json("witness", "coding", PAIR9, "--size", "3")
    assert code == 0
    assert rows_by_name(env, "search")[0]["verdict"] == "found"


def test_witness_coding_none_on_empty():
    proc = run_cli("witness", "coding", EMPTY64, "--size", "1")
    assert proc.returncode == 1


def test_witness_indeterminate_exit():
    proc = run_cli("witness", "order", LESS10, "--size", "5", "--budget-nodes", "2")
    assert proc.returncode == 4


def test_witness_tuplecoding_requires_k():
    proc = run_cli("witness", "tuplecoding", PAIR9, "--size", "2")
    assert proc.returncode == 2


# ---------------------------------------------------------------------------
# formats and determinism


def test_csv_output_shape():
    proc = run_cli("seq", E_REL, "--max-n", "4", "--format", "csv")
    assert proc.returncode == 0
    reader = csv.reader(io.StringIO(proc.stdout))
    rows = list(reader)
    assert rows[0] == ["name", "n", "value", "verdict", "detail"]
    l_rows = [r for r in rows if r[0] == "l"]
    assert [int(r[2]) for r in l_rows] == [bell(n) for n in range(5)]


@pytest.mark.parametrize(
    "args",
    [
        ("seq", E_REL, "--max-n", "6"),
        ("bounds", E_REL, "--max-n", "40"),
        ("witness", "coding", PAIR9, "--size", "2"),
    ],
)
def test_deterministic_runs_are_byte_identical(args):
    a = run_cli(*args, "--deterministic", "--seed", "7")
    b = run_cli(*args, "--deterministic", "--seed", "7")
    assert a.returncode == b.returncode
    assert a.stdout == b.stdout


def test_deterministic_omits_wall_time():
    _, env = cli_json("seq", E_REL, "--max-n", "4", "--deterministic")
    assert "wall_ms" not in env["telemetry"]
    _, env2 = cli_json("seq", E_REL, "--max-n", "4")
    assert "wall_ms" in env2["telemetry"]


def test_envelope_structure():
    _, env = cli_json("seq", E_REL, "--max-n", "3")
    assert set(env) == {"command", "config", "results", "telemetry"}
    assert env["telemetry"]["backend"] in {"numba", "numpy"}


def test_unknown_command_is_input_error():
    proc = run_cli("frobnicate")
    assert proc.returncode == 2


def test_module_entry_point():
    proc = run_cli("--help")
    assert proc.returncode == 0
    assert "seq" in proc.stdout
