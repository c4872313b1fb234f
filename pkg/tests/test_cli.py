import json

import pytest
from click.testing import CliRunner

from qtl import cli
from qtl import towerlogic as tl


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args, **kw):
    return runner.invoke(cli.main, [str(a) for a in args], catch_exceptions=False, **kw)


# --- fixtures -----------------------------------------------------------------------


def test_fixture_roundtrip():
    text = cli.FIXTURES_PATH.read_text()
    rows, errors = cli.parse_fixtures(text)
    assert not errors and len(rows) == 176
    assert cli.serialize_fixtures(rows) == text


def test_fixture_checksum():
    assert cli.fixture_checksum() == cli.CHECKSUM_PATH.read_text().split()[0]
    assert len(cli.load_fixtures()) == 176


def test_checksum_mismatch_detected(tmp_path, monkeypatch):
    bad = tmp_path / "fixtures.sha256"
    bad.write_text("0" * 64 + "  fixtures.csv\n")
    monkeypatch.setattr(cli, "CHECKSUM_PATH", bad)
    with pytest.raises(cli.FixtureError, match="checksum"):
        cli.load_fixtures()


def test_fixture_parse_errors_carry_line_numbers():
    lines = cli.FIXTURES_PATH.read_text().splitlines()
    lines[3] = lines[3][:-1] + "z"  # unknown case letter
    lines[5] = "4;1;257"  # too few fields
    f = lines[7].split(";")
    f[2] = "25"  # multiple of 5
    lines[7] = ";".join(f)
    rows, errors = cli.parse_fixtures("\n".join(lines))
    assert [e.lineno for e in errors] == [4, 6, 8]
    assert len(rows) == 173
    rows, errors = cli.parse_fixtures("nonsense\n")
    assert errors[0].lineno == 1


def test_fixture_rows_reflect_observation():
    row = next(r for r in cli.load_fixtures() if r.d == -114303)
    o = row.observation()
    assert o.signature == "real" and o.rank_tuple() == (1, 0, 1, 0)
    assert o.tau == tl.TauPattern.parse("(1^3)^2,(21)^4")


def test_bad_fixture_file_reports_errors(runner, tmp_path):
    lines = cli.FIXTURES_PATH.read_text().splitlines()
    lines[2] = "garbage"
    p = tmp_path / "f.csv"
    p.write_text("\n".join(lines) + "\n")
    res = runner.invoke(cli.main, ["identify", "--fixtures", str(p)])
    assert "line 3" in res.stderr
    assert "175/175" in res.stdout and res.exit_code == 0


# --- table1 ----------------------------------------------------------------------------


def test_table1_single_group(runner):
    res = run(runner, "table1", "--group", "5^5#11", "--json")
    assert res.exit_code == 0
    (row,) = json.loads(res.output)["rows"]
    assert row["group"] == "5^5#11" and row["pattern"] == row["expected_pattern"] and row["f"] == 1 and row["ok"]


def test_table1_unknown_group(runner):
    res = runner.invoke(cli.main, ["table1", "--group", "5^5#2"])
    assert res.exit_code != 0


def test_table1_corrupted_presentation(runner, tmp_path):
    text = (cli.DATA_DIR / "presentations.txt").read_text()
    head, tail = text.split("group 5^5#14", 1)
    tail = tail.replace("g1^5 = g4^1", "g1^5 = g2^1", 1)
    p = tmp_path / "pres.txt"
    p.write_text(head + "group 5^5#14" + tail)
    res = runner.invoke(cli.main, ["table1", "--group", "5^5#14", "--presentations", str(p)])
    assert res.exit_code == 1 and "inconsistent" in res.output


def test_table1_unparseable_presentation(runner, tmp_path):
    p = tmp_path / "pres.txt"
    p.write_text("group 5^5#14 order=5^5 mingens=2\ng1^5 = h2\n")
    res = runner.invoke(cli.main, ["table1", "--presentations", str(p)])
    assert res.exit_code != 0


# --- scan -------------------------------------------------------------------------------


@pytest.mark.parametrize("lo,hi,n", [(0, 10**4, 83), (-2 * 10**5, 0, 93), (10**4, 10**4 + 1, 0)])
def test_scan_counts(runner, tmp_path, lo, hi, n):
    res = run(runner, "scan", "--min", lo, "--max", hi, "--cache", tmp_path / "c.txt", "--json")
    assert res.exit_code == 0
    s = json.loads(res.output)["summary"]
    assert s == {"rows": n, "rank_matches": n, "reflection_ok": n, "case_matches": n}


def test_scan_bounds_are_exclusive(runner, tmp_path):
    res = run(runner, "scan", "--min", 257, "--max", 457, "--no-cache", "--json")
    ds = [r["d"] for r in json.loads(res.output)["results"]]
    assert 257 not in ds and 457 not in ds


def test_scan_cache_is_transparent(runner, tmp_path):
    cache = tmp_path / "c.txt"
    args = ("scan", "--min", 0, "--max", 3000)
    cold = run(runner, *args, "--cache", cache)
    assert cache.exists() and cache.read_text()
    warm = run(runner, *args, "--cache", cache)
    uncached = run(runner, *args, "--no-cache")
    assert cold.output == warm.output == uncached.output


def test_scan_parallel_matches_serial(runner):
    a = run(runner, "scan", "--min", 0, "--max", 3000, "--no-cache")
    b = run(runner, "scan", "--min", 0, "--max", 3000, "--no-cache", "--jobs", 2)
    assert a.output == b.output


def test_scan_uses_env_cache(runner, tmp_path, monkeypatch):
    cache = tmp_path / "env.txt"
    monkeypatch.setenv("QTL_CACHE", str(cache))
    res = run(runner, "scan", "--min", 0, "--max", 1000)
    assert res.exit_code == 0 and cache.exists()


def test_scan_flags_wrong_ranks(runner, tmp_path):
    text = cli.FIXTURES_PATH.read_text().replace("4;29;4357;prime;(000000);abelian;5^2#2;1;1;0;0;1;a", "4;29;4357;prime;(000000);abelian;5^2#2;1;0;0;0;1;a")
    p = tmp_path / "f.csv"
    p.write_text(text)
    res = runner.invoke(cli.main, ["scan", "--min", 4000, "--max", 5000, "--fixtures", str(p), "--no-cache"])
    assert res.exit_code == 1


# --- identify ----------------------------------------------------------------------------


def test_identify_all_rows(runner):
    res = run(runner, "identify", "--json")
    out = json.loads(res.output)
    assert res.exit_code == 0 and out["matches"] == out["rows"] == 176
    by_d = {r["d"]: r for r in out["results"]}
    assert by_d[-114303]["group"] == "5^5#11" and by_d[-114303]["ell5"] == "2"
    assert by_d[4357]["group"] == "5^2#2" and by_d[4357]["ell5"] == "1"


def test_identify_text_summary(runner):
    res = run(runner, "identify")
    assert res.output.strip().splitlines()[-1] == "176/176 rows reproduce group and tower length"


# --- family, frobenius, classify -------------------------------------------------------------


def test_family(runner):
    res = run(runner, "family", "--count", 2)
    lines = res.output.strip().splitlines()
    assert len(lines) == 2 and lines[0].startswith("0;")
    members = json.loads(run(runner, "family", "--count", 3, "--json").output)
    assert [m["k"] for m in members] == [0, 1, 2]
    assert run(runner, "family", "--count", 0).output == ""


def test_frobenius(runner):
    out = json.loads(run(runner, "frobenius", "--poly", "1,0,0,0,0,-2", "--primes", 100, "--chebotarev").output)
    assert out["status"] == "F20_certified" and out["primes_used"] == 100
    assert {c["pattern"] for c in out["chebotarev"]} == {"11111", "5", "14", "122"}
    out = json.loads(run(runner, "frobenius", "--poly", "1,0,0,0,0,-1").output)
    assert out["status"] == "reducible"


def test_frobenius_rejects_bad_poly(runner):
    assert runner.invoke(cli.main, ["frobenius", "--poly", "1,0,1"]).exit_code != 0
    assert runner.invoke(cli.main, ["frobenius", "--poly", "a,b"]).exit_code != 0


def test_classify(runner):
    res = run(runner, "classify", "--r1", 2, "--r2", 0, "--d1", 1, "--d2", 1, "--sign", "pos", "--json")
    out = json.loads(res.output)
    assert out["case"] == "g" and out["uniform"] and out["signature"] == "imaginary"
    res = run(runner, "classify", "--r1", 1, "--r2", 1, "--d1", 0, "--d2", 0, "--sign", "neg")
    assert res.output.startswith("case (c), real") and "E3 = E4" in res.output
    res = run(runner, "classify", "--r1", 1, "--r2", 1, "--d1", 0, "--d2", 0, "--sign", "pos")
    assert res.exit_code == 1 and "inconsistent" in res.output
