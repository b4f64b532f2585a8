import json
from pathlib import Path

import pytest

from fdzx import ZW, Cap, Diagram, ZWCap, dump, load, serialize
from fdzx import builders as B
from fdzx.cli import main
from fdzx.rules import find_sites, instantiate

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, d):
        path = tmp_path / name
        dump(d, path)
        return path

    return write


def rounded(obj):
    """Deviations may move in the last bits between kernel backends."""
    if isinstance(obj, dict):
        return {k: (round(v, 12) if k in ("deviation", "max_deviation") and v is not None else rounded(v))
                for k, v in obj.items()}
    if isinstance(obj, list):
        return [rounded(v) for v in obj]
    return obj


def test_eval_identity(capsys, files):
    code, out, _ = run(capsys, "eval", files("id.json", B.wire(2)))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "shape [2, 2]"
    assert lines[1] == "[0, 0] 1+0j" and lines[4] == "[1, 1] 1+0j"


def test_eval_basis(capsys, files):
    code, out, _ = run(capsys, "eval", files("x.json", B.x_spider(2, 2, 1)), "--basis", "1,1", "--json")
    assert code == 0
    assert json.loads(out) == {"shape": [2], "data": [[1.0, 0.0], [0.0, 0.0]]}


def test_eval_golden(capsys, files):
    code, out, _ = run(capsys, "eval", files("x.json", B.x_spider(2, 2, 1)), "--json")
    assert code == 0
    assert out == (GOLDEN / "eval_x21.json").read_text()


def test_eval_dim_one(capsys, tmp_path):
    obj = json.loads(serialize(B.wire(2)))
    obj["inputs"] = obj["outputs"] = [1]
    for w in obj["wires"]:
        w["dim"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, _, err = run(capsys, "eval", path)
    assert code == 2 and "error" in err


def test_eval_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = run(capsys, "eval", path)
    assert code == 2 and "line 1" in err


def test_equal_transpose_twice(capsys, files):
    from fdzx import transpose

    d = B.fourier(3) >> B.x_spider(3, 1, 2)
    code, out, _ = run(capsys, "equal", files("a.json", d), files("b.json", transpose(transpose(d))))
    assert code == 0 and "equal true" in out


def test_equal_fused_pair(capsys, files):
    inst = instantiate("S1", {"a": 3, "p": (1, 2, 3), "q": (1, 1j, 2)})
    code, _, _ = run(capsys, "equal", files("l.json", inst.lhs), files("r.json", inst.rhs))
    assert code == 0


def test_equal_up_to_scalar(capsys, files):
    a = files("a.json", B.z(1, 1, 2, (1, 2)))
    b = files("b.json", B.scalar(2) @ B.z(1, 1, 2, (1, 2)))
    code, out, _ = run(capsys, "equal", a, b)
    assert code == 1 and "equal false" in out
    code, out, _ = run(capsys, "equal", a, b, "--up-to-scalar", "--json")
    verdict = json.loads(out)
    assert code == 0 and verdict["equal"] and verdict["scalar"] == [0.5, 0.0]


def test_equal_signature_mismatch(capsys, files):
    code, _, err = run(capsys, "equal", files("a.json", B.wire(2)), files("b.json", B.wire(3)))
    assert code == 2 and "signature" in err


def test_translate(capsys, files, tmp_path):
    out_path = tmp_path / "out.json"
    code, _, _ = run(capsys, "translate", files("id.json", B.wire(3) >> B.z(1, 1, 3)), "--to", "zw",
                     "-o", out_path, "--provenance")
    assert code == 0
    d = load(out_path)
    assert d.calculus == ZW and d.inputs == (2,)
    side = json.loads(out_path.with_suffix(".provenance.json").read_text())
    assert side["target_calculus"] == "zw"


def test_translate_cap(capsys, files):
    code, out, _ = run(capsys, "translate", files("cap.json", Diagram.from_node(ZWCap(2))), "--to", "zx")
    assert code == 0
    d = json.loads(out)
    assert d["nodes"][0]["kind"] == Cap.kind and d["outputs"] == [3, 3]


def test_translate_same_calculus(capsys, files):
    code, _, err = run(capsys, "translate", files("id.json", B.wire(2)), "--to", "zx")
    assert code == 2


def test_verify_golden(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "zw-axioms", "--trials", 2, "--dims", "2,3", "--no-timing", "--json")
    assert code == 0
    want = json.loads((GOLDEN / "verify_zw_small.json").read_text())
    assert rounded(json.loads(out)) == rounded(want)


def test_verify_corrupt_fails(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "zx-axioms", "--trials", 3, "--corrupt", "K0", "--no-timing")
    assert code == 1
    assert "3 failed" in out


def test_verify_translate_offset(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "translate-xw", "--count", 5, "--offset", 0,
                     "--max-generators", 3, "--no-timing")
    assert code == 1


def test_verify_bad_flags(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nope"])
    assert info.value.code == 2
    code, _, _ = run(capsys, "verify", "--suite", "a1", "--dims", "1,2")
    assert code == 2


def test_verify_untranscribed_policy(capsys, monkeypatch):
    from fdzx.verify import fixtures

    monkeypatch.setitem(fixtures.A1_FIXTURES, "snake", None)
    code, _, err = run(capsys, "verify", "--suite", "a1", "--dims", "2", "--no-timing")
    assert code == 1 and "snake" in err
    code, _, _ = run(capsys, "verify", "--suite", "a1", "--dims", "2", "--no-timing", "--allow-untranscribed")
    assert code == 0


def test_verify_deterministic(capsys):
    argv = ("verify", "--suite", "translate-wx", "--count", 5, "--seed", 3, "--no-timing", "--json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def s1_script(tmp_path, host):
    inst = instantiate("S1", {"a": 3, "m1": 0, "n2": 0, "p": (1, 2, 3), "q": (1, 1j, 2)})
    (site,) = find_sites(host, inst.lhs)
    step = {
        "rule": "S1",
        "params": {"a": 3, "m1": 0, "n2": 0, "p": [[1, 0], [2, 0], [3, 0]], "q": [[1, 0], [0, 1], [2, 0]]},
        "site": {str(k): v for k, v in site.items()},
        "direction": "lr",
    }
    return inst, step


def test_apply_empty_script(capsys, files, tmp_path):
    src = files("d.json", B.fourier(3))
    script = tmp_path / "s.json"
    script.write_text("[]")
    out_path = tmp_path / "o.json"
    code, _, _ = run(capsys, "apply", src, "--script", script, "-o", out_path)
    assert code == 0
    assert out_path.read_text() == src.read_text()


def test_apply_s1(capsys, files, tmp_path):
    host = B.z(1, 1, 3, (1, 2, 3)) >> B.z(1, 1, 3, (1, 1j, 2))
    _, step = s1_script(tmp_path, host)
    script = tmp_path / "s.json"
    script.write_text(json.dumps([step]))
    out_path, log_path = tmp_path / "o.json", tmp_path / "log.json"
    code, _, _ = run(capsys, "apply", files("d.json", host), "--script", script, "-o", out_path, "--log", log_path)
    assert code == 0
    d = load(out_path)
    (n,) = d.nodes.values()
    assert n.phase == (1, 2j, 6)
    assert json.loads(log_path.read_text())[0]["ok"] is True


def test_apply_missing_node(capsys, files, tmp_path):
    host = B.z(1, 1, 3, (1, 2, 3)) >> B.z(1, 1, 3, (1, 1j, 2))
    _, step = s1_script(tmp_path, host)
    step["site"] = {k: 99 + i for i, k in enumerate(step["site"])}
    script = tmp_path / "s.json"
    script.write_text(json.dumps([step]))
    code, _, err = run(capsys, "apply", files("d.json", host), "--script", script, "-o", tmp_path / "o.json")
    assert code == 2 and "99" in err


def test_apply_malformed_script(capsys, files, tmp_path):
    script = tmp_path / "s.json"
    script.write_text('[{"rule": "S1"}]')
    code, _, _ = run(capsys, "apply", files("d.json", B.wire(2)), "--script", script)
    assert code == 2
