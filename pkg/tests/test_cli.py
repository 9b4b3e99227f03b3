import json
import os

import pytest

from gpquiver import cli

FIXTURES = cli.fixtures_dir()


def fix(name):
    return os.path.join(FIXTURES, name)


def run(argv, capsys):
    status = cli.main(argv)
    out = capsys.readouterr()
    return status, out.out, out.err


def run_json(argv, capsys):
    status, out, err = run(argv, capsys)
    assert err == ""
    return status, json.loads(out)


def test_cat_info(capsys):
    status, report = run_json(["cat-info", fix("ka2.cat")], capsys)
    assert status == 0
    r = report["result"]
    assert r["objects"] == ["1", "2"]
    assert r["hom_dims"] == {"1->1": 1, "1->2": 1, "2->2": 1}
    assert r["hom_bases"]["1->2"] == ["a"]


def test_gdim_square_is_two(capsys):
    status, report = run_json(["gdim", fix("square.cat")], capsys)
    assert status == 0
    assert report["result"]["value"] == 2
    assert report["result"]["status"] == "finite"


def test_gdim_unknown_exits_inconclusive(capsys):
    status, report = run_json(["gdim", fix("ex322.cat"), "--cutoff", "6"], capsys)
    assert status == 2
    assert report["result"]["value"] is None


def test_resolve_and_nakayama(capsys):
    status, report = run_json(["resolve", fix("a2_zero.rep")], capsys)
    assert status == 0
    assert report["result"]["completed"] is True
    status, report = run_json(["nakayama", fix("a2_mono.rep")], capsys)
    assert status == 0
    assert report["result"]["nu_dims"] == {"1": 1, "2": 0}
    assert report["result"]["lambda_iso"] is True


def test_derived_functor_dims(capsys):
    status, report = run_json(
        ["derived", fix("a2_zero.rep"), "--functor", "l_nu", "--degree", "1"],
        capsys)
    assert status == 0
    dims = report["result"]["dims"]
    assert dims["1"] == {"dim": 0, "conclusive": True}
    assert dims["2"] == {"dim": 1, "conclusive": True}


def test_tor_and_ext(capsys):
    status, report = run_json(
        ["tor", fix("a2_zero.rep"), "--object", "2", "--degree", "1"], capsys)
    assert status == 0
    assert report["result"]["dim"] == 1
    status, report = run_json(
        ["ext", fix("a2_mono.rep"), "--object", "1", "--degree", "1"], capsys)
    assert status == 0
    assert report["result"]["dim"] == 0


def test_check_monic_reports_kernel_witness(capsys):
    status, report = run_json(["check", "monic", fix("a2_zero.rep")], capsys)
    assert status == 0
    v = report["result"]["verdict"]
    assert v["member"] == "no"
    assert v["certificate"]["object"] == "2"
    assert v["certificate"]["kernel_dim"] == 1
    assert "a" in v["certificate"]["witness"]


def test_check_gproj_p_agrees_with_monicity(capsys):
    for name, expect in [("a2_mono.rep", "yes"), ("a2_incl.rep", "yes"),
                         ("a2_zero.rep", "no")]:
        status, report = run_json(["check", "gproj-p", fix(name)], capsys)
        assert status == 0
        assert report["result"]["verdict"]["member"] == expect


def test_check_gp_depends_on_factorization(capsys):
    status, report = run_json(
        ["check", "gp", fix("m322.rep"), "--factor", "right"], capsys)
    assert status == 0
    assert report["result"]["verdict"]["member"] == "yes"
    status, report = run_json(
        ["check", "gp", fix("m322.rep"), "--factor", "left"], capsys)
    assert status == 0
    assert report["result"]["verdict"]["member"] == "no"


def test_check_discrepancy(capsys):
    status, report = run_json(["check", "discrepancy", fix("m322.rep")], capsys)
    assert status == 0
    r = report["result"]
    assert r["discrepancy"] is True
    assert r["first"]["verdict"]["member"] == "yes"
    assert r["second"]["verdict"]["member"] == "no"
    rows = r["second"]["restriction_exactness"]
    bad = [row for row in rows if not row["exact"]]
    assert bad and bad[0]["image_rank"] != bad[0]["kernel_dim"]


def test_check_lifted(capsys):
    status, report = run_json(
        ["check", "lifted", fix("a2_incl.rep"), "--x", "gproj_P", "--f", "proj"],
        capsys)
    assert status == 0
    assert report["result"]["verdict"]["member"] == "yes"


def test_check_lifted_missing_flags_is_input_error(capsys):
    status, out, err = run(["check", "lifted", fix("a2_incl.rep")], capsys)
    assert status == 1
    assert "error" in err


def test_profile_base(capsys):
    status, report = run_json(["profile-base", fix("ka2.cat")], capsys)
    assert status == 0
    assert report["result"]["g"] == 1
    status, report = run_json(["profile-base", fix("ex322.cat")], capsys)
    assert status == 2
    assert report["result"]["status"] == "unknown"


def test_enumerate(capsys):
    status, report = run_json(
        ["enumerate", fix("ka2.cat"), "--field", "F2", "--dims", "1"], capsys)
    assert status == 0
    assert report["result"]["count"] == 5
    status, report = run_json(
        ["enumerate", fix("ka2.cat"), "--field", "F2", "--dims", "1,0"], capsys)
    assert status == 0
    assert report["result"]["count"] == 2


def test_enumerate_rejects_rationals(capsys):
    status, out, err = run(
        ["enumerate", fix("ka2.cat"), "--dims", "1"], capsys)
    assert status == 1
    assert "error" in err


def test_fixtures_listing(capsys):
    status, report = run_json(["fixtures"], capsys)
    assert status == 0
    files = report["result"]["files"]
    assert "ka2.cat" in files and "m322.rep" in files
    assert all(len(d) == 64 for d in files.values())


def test_parse_error_exit_code_and_message(tmp_path, capsys):
    p = tmp_path / "broken.cat"
    p.write_text("[category]\nobjects = 1\narrow = oops\n")
    status, out, err = run(["cat-info", str(p)], capsys)
    assert status == 1
    assert "broken.cat:3" in err


def test_missing_file_exit_code(capsys):
    status, out, err = run(["gdim", "/no/such/file.cat"], capsys)
    assert status == 1
    assert err.startswith("error:")


def test_out_flag_writes_report(tmp_path, capsys):
    dest = tmp_path / "r.json"
    status, out, err = run(["gdim", fix("ka2.cat"), "--out", str(dest)], capsys)
    assert status == 0
    assert out == ""
    report = json.loads(dest.read_text())
    assert report["result"]["value"] == 1


def test_reports_are_byte_identical_across_runs(tmp_path, capsys):
    texts = []
    for i in range(2):
        dest = tmp_path / f"r{i}.json"
        status, _, _ = run(
            ["check", "gp", fix("m322.rep"), "--factor", "right",
             "--out", str(dest)], capsys)
        assert status == 0
        texts.append(dest.read_bytes())
    assert texts[0] == texts[1]
