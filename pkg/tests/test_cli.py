import io
import json
import subprocess
import sys


from kirbylab.cli import run
from kirbylab.exactfield import FieldDescriptor
from kirbylab.links import hopf_link


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def exact(obj, field):
    return FieldDescriptor.from_json(field).parse(obj["exact"])


def test_kirby_check_table():
    code, out = call("kirby", "check", "--algebra", "hn:3", "--z", "zd:1", "--format", "table")
    assert code == 0
    assert "in I(H)^norm: true" in out


def test_kirby_check_json_fields():
    code, out = call("kirby", "check", "--algebra", "hn:3", "--z", "1")
    obj = json.loads(out)
    assert code == 0
    assert obj["in_L"] is False and obj["normalized"] is False
    for key in ("cond_a", "cond_b", "theta_plus", "theta_minus"):
        assert key in obj


def test_invariant_s3():
    code, out = call("invariant", "--algebra", "hn:3", "--z", "zd:3", "--link", "unknot:+1")
    assert code == 0
    assert json.loads(out)["value"]["exact"] == ["1", "0"]


def test_invariant_refuses_then_labels_forced(capsys):
    code, _ = call("invariant", "--algebra", "hn:3", "--z", "basis:ax", "--link", "unknot:1")
    assert code == 1
    assert "NotNormalizedKirby" in capsys.readouterr().err
    code, out = call("invariant", "--algebra", "hn:3", "--z", "basis:ax", "--link", "unknot:1", "--force")
    assert code == 0
    assert json.loads(out)["label"] == "not an invariant"


def test_verify_cyclic():
    code, out = call("verify", "--algebra", "cyclic:5:q=1")
    assert code == 0
    obj = json.loads(out)
    assert obj["ok"] and all(r["ok"] for r in obj["reports"])


def test_integrals_traces_fusion_rt():
    assert call("integrals", "--algebra", "sweedler")[0] == 0
    assert call("traces", "--algebra", "hn:3")[0] == 0
    code, out = call("fusion", "--data", "pointed:6")
    assert code == 0
    assert [r["subset"] for r in json.loads(out)["closed_subsets"]] == [[0], [0, 3], [0, 2, 4], [0, 1, 2, 3, 4, 5]]
    code, out = call("rt", "--algebra", "cyclic:5", "--link", "hopf:1,2", "--compare")
    assert code == 0 and json.loads(out)["agree"] is True
    code, out = call("kirby", "subspaces", "--algebra", "hn:3")
    assert json.loads(out)["dims"] == {"L": 6, "Z": 3, "N": 3, "V2": 45}


def test_usage_errors(capsys):
    assert call("verify", "--algebra", "hn:3", "--bogus")[0] == 2
    assert "--bogus" in capsys.readouterr().err
    assert call("invariant", "--algebra", "cyclic:5", "--z", "zd:1", "--link", "unknot:1")[0] == 2
    assert call("nonsense")[0] == 2


def test_domain_error_exit_code():
    assert call("verify", "--algebra", "hn:4")[0] == 1


def test_byte_stable_output():
    a = call("kirby", "check", "--algebra", "hn:3", "--z", "zd:3")[1]
    b = call("kirby", "check", "--algebra", "hn:3", "--z", "zd:3")[1]
    assert a == b


def test_batch_lens_spaces(tmp_path):
    rows = [{"algebra": "hn:3", "z": "zd:1", "link": f"unknot:{p}"} for p in range(-3, 4)]
    m = tmp_path / "m.json"
    m.write_text(json.dumps(rows))
    code, out = call("batch", str(m))
    table = json.loads(out)["rows"]
    assert code == 0
    assert len(table) == 7
    assert all(r["status"] == "ok" and r["value"]["exact"] == ["1", "0"] for r in table)


def test_batch_empty_and_malformed(tmp_path):
    e = tmp_path / "e.json"
    e.write_text("[]")
    code, out = call("batch", str(e))
    assert code == 0 and json.loads(out) == {"rows": []}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([
        {"algebra": "hn:3", "z": "zd:1", "link": "unknot:1"},
        {"algebra": "hn:3"},
        {"algebra": "hn:3", "z": "zd:1", "link": "cup 0"},
    ]))
    code, out = call("batch", str(bad))
    rows = json.loads(out)["rows"]
    assert code == 1
    assert [r["status"] for r in rows] == ["ok", "error", "error"]


def test_link_file_and_out(tmp_path):
    f = tmp_path / "hopf.json"
    f.write_text(json.dumps(hopf_link(1, -1).to_json()))
    out = tmp_path / "report.json"
    code, text = call("invariant", "--algebra", "hn:3", "--z", "zd:3", "--link", f"@{f}", "--out", str(out))
    assert code == 0 and text == ""
    assert json.loads(out.read_text())["value"]["exact"] == ["-1", "0"]


def test_algebra_file(tmp_path):
    from kirbylab.examples import sweedler

    H, rib = sweedler()
    obj = H.to_json()
    obj["R"] = [[c.to_json() for c in [rib.Rarr.element((i, j)) for j in range(H.dim)]] for i in range(H.dim)]
    obj["theta"] = rib.theta.to_json()
    f = tmp_path / "sw.json"
    f.write_text(json.dumps(obj))
    code, out = call("kirby", "check", "--algebra", f"@{f}", "--z", "slambda")
    assert code == 0 and json.loads(out)["normalized"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kirbylab", "invariant", "--algebra", "hn:1", "--z", "zd:1",
                           "--link", "unknot:-1", "--format", "table"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "value: 1" in proc.stdout
