import json

import pytest

from wordmap.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_threshold_command(capsys):
    code, out, _ = run(capsys, "threshold", "--k1", "2", "--k2", "2")
    assert code == 0
    data = json.loads(out)
    assert data["threshold"] == 256
    assert data["schema"] == "wordmap/1"


def test_solve_comm_m4_f2(capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "Fp:2", "--word", "comm:m=4",
        "--matrix", '{"rows":2,"cols":2,"entries":[[1,0],[0,1]]}')
    assert code == 0
    data = json.loads(out)
    assert data["verified"] is True
    assert len(data["witnesses"]) == 4


def test_solve_then_verify_round_trip(tmp_path, capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "Fp:5", "--word", "diag:d=1,k=2;d=1,k=2",
        "--matrix", '{"rows":2,"cols":2,"entries":[[0,1],[0,0]]}')
    assert code == 0
    wit = tmp_path / "wit.json"
    wit.write_text(out)
    code, out2, _ = run(capsys, "verify", "--witness", str(wit))
    assert code == 0
    assert json.loads(out2)["verified"] is True


def test_verify_detects_bad_witness(tmp_path, capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "Fp:5", "--word", "diag:d=1,k=2;d=1,k=2",
        "--matrix", '{"rows":2,"cols":2,"entries":[[0,1],[0,0]]}')
    data = json.loads(out)
    data["witnesses"][0]["entries"][0][0] = 3  # corrupt
    wit = tmp_path / "bad.json"
    wit.write_text(json.dumps(data))
    code, out2, _ = run(capsys, "verify", "--witness", str(wit))
    assert code == 2
    assert json.loads(out2)["verified"] is False


def test_solve_nonzero_trace_exits_2(capsys):
    code, _, err = run(
        capsys, "solve", "--field", "Q", "--word", "comm:m=2",
        "--matrix", '{"rows":2,"cols":2,"entries":[[1,0],[0,1]]}')
    assert code == 2
    assert "nonzero trace" in err


def test_solve_seed_determinism(capsys):
    argv = ["solve", "--field", "Fp:101", "--word", "diag:d=1,k=2;d=1,k=2",
            "--matrix", '{"rows":3,"cols":3,"entries":[[1,2,3],[4,5,6],[7,8,10]]}',
            "--seed", "7"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2  # byte identical


def test_count_csv(capsys):
    code, out, _ = run(
        capsys, "count", "--field", "Fp:5", "--word", "diag:d=1,k=2;d=1,k=2",
        "--gamma", "1", "--out", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.startswith("q,m,")
    assert row.split(",")[5] == "4"  # S = 4 exactly


def test_enumerate_image(capsys):
    code, out, _ = run(
        capsys, "enumerate-image", "--field", "Fp:2", "--word", "comm:m=2",
        "--n", "2")
    assert code == 0
    data = json.loads(out)
    assert data["image_size"] == 8 and data["total"] == 16
    assert data["surjective"] is False
    assert len(data["missing"]) == 8


def test_malformed_input_exits_1(capsys):
    code, _, err = run(capsys, "solve", "--field", "Fp:6", "--word", "comm:m=4",
                       "--matrix", '{"entries":[[1]]}')
    assert code == 1
    code, _, err = run(capsys, "solve", "--field", "Fp:5", "--word", "bogus",
                       "--matrix", '{"entries":[[1]]}')
    assert code == 1
    code, _, _ = run(capsys, "count", "--field", "Fp:5", "--word", "comm:m=2")
    assert code == 1


def test_real_field_solve(capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "R:tol=1e-9", "--word", "diag:d=1,k=2;d=1,k=2",
        "--matrix", '{"rows":2,"cols":2,"entries":[[0.0,1.0],[0.0,0.0]]}')
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_extension_field_cli(capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "Fq:p=2,d=2,mod=[1,1,1]", "--word", "comm:m=4",
        "--matrix", '{"rows":2,"cols":2,"entries":[[[0,1],[0,0]],[[1,1],[1,0]]]}')
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_verify_with_target_override(tmp_path, capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "Fp:7", "--word", "comm:m=4",
        "--matrix", '{"rows":2,"cols":2,"entries":[[1,2],[3,4]]}')
    assert code == 0
    wit = tmp_path / "w.json"
    wit.write_text(out)
    code, out2, _ = run(capsys, "verify", "--witness", str(wit),
                        "--matrix", '{"rows":2,"cols":2,"entries":[[1,2],[3,4]]}')
    assert code == 0
    code, out3, _ = run(capsys, "verify", "--witness", str(wit),
                        "--matrix", '{"rows":2,"cols":2,"entries":[[0,2],[3,4]]}')
    assert code == 2


def test_enumerate_image_cap_exit(capsys):
    code, _, err = run(capsys, "enumerate-image", "--field", "Fp:7",
                       "--word", "comm:m=2", "--n", "3", "--cap", "1000")
    assert code == 1  # cap violations are usage-level, not math negatives


def test_count_extension_field(capsys):
    code, out, _ = run(
        capsys, "count", "--field", "Fq:p=2,d=2,mod=[1,1,1]",
        "--word", "diag:d=1,k=2;d=1,k=2", "--gamma", "1")
    assert code == 0
    data = json.loads(out)
    assert data["expected"] == 4


def test_solve_text_output(capsys):
    code, out, _ = run(
        capsys, "solve", "--field", "Fp:5", "--word", "diag:d=1,k=2;d=1,k=2",
        "--matrix", '{"rows":2,"cols":2,"entries":[[0,1],[0,0]]}', "--out", "text")
    assert code == 0
    assert "verified: True" in out
