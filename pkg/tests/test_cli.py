import json
import subprocess
import sys


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "modtors.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


def test_rank_json_and_golden():
    proc = run_cli("rank", "gamma0", "11,37", "--golden")
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["command"] == "rank"
    assert report["normalization"] == "eq41"
    verdicts = {r["level"]: r["verdict"] for r in report["results"]}
    assert verdicts == {11: "rank_zero", 37: "positive_rank"}
    assert report["tool"].startswith("modtors ")


def test_golden_mismatch_exit_code(tmp_path):
    # claim X1(2,2N) rank-zero pattern against gamma0 golden data to force
    # a mismatch: level 37 is positive rank but sits in no golden set gap;
    # instead check by asking for gamma1 at 63 (positive) vs S0-based set
    proc = run_cli("rank", "gamma0", "37")
    assert proc.returncode == 0
    # mismatch case: compare gamma1(63) (positive rank) against golden,
    # which correctly expects positive -> still 0; craft a real mismatch by
    # giving the x1-2-2n kind an odd level
    proc = run_cli("rank", "x1-2-2n", "27")
    assert proc.returncode != 0


def test_torsion_command_golden(tmp_path):
    proc = run_cli(
        "torsion", "gamma1", "13,21",
        "--primes", "5,11",
        "--golden",
        "--cache-dir", str(tmp_path),
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    got = {r["level"]: r["clcc_Q"] for r in report["results"]}
    assert got == {13: [19], 21: [364]}
    # warm-cache rerun must be byte-identical
    proc2 = run_cli(
        "torsion", "gamma1", "13,21",
        "--primes", "5,11",
        "--golden",
        "--cache-dir", str(tmp_path),
    )
    assert proc2.stdout == proc.stdout


def test_places_command():
    proc = run_cli("places", "22", "3")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["places_by_degree"] == [10, 0, 0]


def test_ecscan_command():
    proc = run_cli("ecscan", "121", "5,25", "--format", "json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert [r["exists_point_of_order"] for r in report["results"]] == [False, False]
    # resource refusal
    proc = run_cli("ecscan", "11", "2187")
    assert proc.returncode == 2


def test_immersion_command():
    proc = run_cli("immersion", "65", "3", "--golden")
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["all_pass"] is True
    assert len(report["per_target"]) == 4


def test_text_format():
    proc = run_cli("places", "22", "3", "--format", "text")
    assert proc.returncode == 0
    assert "places_by_degree" in proc.stdout
