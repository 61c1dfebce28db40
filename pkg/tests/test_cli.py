"""Exit codes, report schema, and determinism of the batch front end."""

import json

import pytest

import heckeklr.cli as cli
from heckeklr.errors import InternalError


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def run_json(capsys, argv):
    code, out = run(capsys, argv)
    return code, json.loads(out)


def test_relations_degenerate_passes(capsys):
    code, rep = run_json(
        capsys, ["verify-relations", "--variant", "degenerate", "--d", "2"]
    )
    assert code == 0
    assert all(c["status"] == "pass" for c in rep["checks"])
    ids = [c["check_id"] for c in rep["checks"]]
    assert ids == sorted(ids)
    assert any(i.startswith("hecke:") for i in ids)
    assert any(i.startswith("klr:") for i in ids)


def test_relations_rejects_unit_q(capsys):
    code, _out = run(capsys, ["verify-relations", "--variant", "q", "--d", "2", "--q", "1"])
    assert code == 2


def test_relations_q_passes(capsys):
    code, _rep = run_json(
        capsys,
        ["verify-relations", "--variant", "q", "--d", "2", "--q", "2", "--max-deg", "2"],
    )
    assert code == 0


def test_differential_command(capsys):
    code, rep = run_json(
        capsys,
        ["verify-differential", "--variant", "degenerate", "--d", "2", "--Q", "0,1"],
    )
    assert code == 0
    ids = [c["check_id"] for c in rep["checks"]]
    assert ids == ["dsquare_hecke", "dsquare_klr", "theta_braid_compat"]


def test_differential_single_strand_skips_braid(capsys):
    code, rep = run_json(
        capsys, ["verify-differential", "--variant", "degenerate", "--d", "1"]
    )
    assert code == 0
    ids = [c["check_id"] for c in rep["checks"]]
    assert "theta_braid_compat" not in ids


def test_bkr_command_schema(capsys):
    code, rep = run_json(
        capsys,
        [
            "verify-bkr", "--variant", "degenerate",
            "--a", "0,1", "--Q", "0", "--I", "0,1", "--trunc", "3",
        ],
    )
    assert code == 0
    assert set(rep) == {"tool_version", "params", "checks", "canonical_hash"}
    ids = [c["check_id"] for c in rep["checks"]]
    assert ids == ["dg-compat", "intertwining", "relations", "sd-invariance", "triangular"]
    for c in rep["checks"]:
        assert set(c) == {"check_id", "status", "witness", "ms"}
    assert rep["params"]["variant"] == "degenerate"
    assert rep["params"]["trunc"] == 3


def test_bkr_requires_q_scalar(capsys):
    code, _out = run(
        capsys,
        ["verify-bkr", "--variant", "q", "--a", "1,2", "--Q", "1", "--I", "1,2"],
    )
    assert code == 2


def test_bkr_requires_a(capsys):
    code, _out = run(capsys, ["verify-bkr", "--variant", "degenerate", "--Q", "0"])
    assert code == 2


def test_homology_filtration_level_two(capsys):
    code, rep = run_json(
        capsys,
        [
            "homology", "--variant", "degenerate", "--d", "1",
            "--Q", "0,0", "--route", "filtration", "--Dmax", "8",
        ],
    )
    assert code == 0
    by_id = {c["check_id"]: c for c in rep["checks"]}
    assert "H^0 = 2" in by_id["h0_oracle"]["witness"]
    assert rep["params"]["D_list"] == [4, 8]


def test_homology_tower_q(capsys):
    code, rep = run_json(
        capsys,
        [
            "homology", "--variant", "q", "--q", "2", "--d", "1",
            "--Q", "2", "--a", "2", "--route", "tower", "--Nmax", "4",
        ],
    )
    assert code == 0
    assert rep["params"]["N_list"] == [2, 3, 4]
    assert any(c["check_id"].startswith("tower_vanish") for c in rep["checks"])


def test_dims_command(capsys):
    code, rep = run_json(
        capsys, ["dims", "--variant", "degenerate", "--d", "1", "--Q", "0,1", "--a", "0"]
    )
    assert code == 0
    by_id = {c["check_id"]: c for c in rep["checks"]}
    assert by_id["hecke_total"]["witness"].startswith("dim 2")
    assert by_id["hecke_block_0"]["witness"] == "dim 1"
    assert by_id["hecke_block_1"]["witness"] == "dim 1"
    assert by_id["block_matches_klr"]["status"] == "pass"


def test_fraction_scalars_parse(capsys):
    code, rep = run_json(
        capsys, ["dims", "--variant", "degenerate", "--d", "1", "--Q", "1/2", "--a", "1/2"]
    )
    assert code == 0
    assert rep["params"]["Q"] == ["1/2"]


def test_bad_scalar_is_usage_error(capsys):
    code, _out = run(capsys, ["dims", "--variant", "degenerate", "--d", "1", "--Q", "x"])
    assert code == 2


def test_missing_flags_are_usage_errors(capsys):
    assert cli.main(["verify-relations", "--variant", "degenerate"]) == 2
    capsys.readouterr()
    assert cli.main(["nonsense"]) == 2
    capsys.readouterr()
    assert cli.main([]) == 2
    capsys.readouterr()


def test_report_determinism(capsys):
    argv = [
        "verify-bkr", "--variant", "degenerate",
        "--a", "0,1", "--Q", "0", "--I", "0,1", "--trunc", "3",
    ]
    _code, rep1 = run_json(capsys, argv)
    _code, rep2 = run_json(capsys, argv)
    assert rep1["canonical_hash"] == rep2["canonical_hash"]
    strip = lambda rep: [
        {k: v for k, v in c.items() if k != "ms"} for c in rep["checks"]
    ]
    assert strip(rep1) == strip(rep2)


def test_hash_excludes_timing(capsys):
    argv = ["verify-relations", "--variant", "degenerate", "--d", "1"]
    _code, rep = run_json(capsys, argv)
    recomputed = cli.Report(
        params=rep["params"],
        checks=[
            cli.CheckRecord(c["check_id"], c["status"], c["witness"], 999999)
            for c in rep["checks"]
        ],
        tool_version=rep["tool_version"],
    )
    assert recomputed.canonical_hash() == rep["canonical_hash"]


def test_failing_check_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(
        cli, "verify_bkr", lambda ps, N, samples, seed: [("broken", False, "boom")]
    )
    code, rep = run_json(
        capsys,
        ["verify-bkr", "--variant", "degenerate", "--a", "0", "--Q", "0", "--trunc", "2"],
    )
    assert code == 1
    assert rep["checks"][0]["status"] == "fail"
    assert rep["checks"][0]["witness"] == "boom"


def test_internal_error_exits_three(capsys, monkeypatch):
    def explode(ps, N, samples, seed):
        raise InternalError("rank contract violated")

    monkeypatch.setattr(cli, "verify_bkr", explode)
    code = cli.main(
        ["verify-bkr", "--variant", "degenerate", "--a", "0", "--Q", "0", "--trunc", "2"]
    )
    capsys.readouterr()
    assert code == 3


def test_out_flag_writes_report(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out = run(
        capsys,
        [
            "--out", str(target),
            "verify-relations", "--variant", "degenerate", "--d", "1",
        ],
    )
    assert code == 0
    on_disk = json.loads(target.read_text())
    assert on_disk == json.loads(out)
