import io
import json

import pytest

from chanmaj import __version__
from chanmaj.cli import dumps, lorenz_svg, main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return write


def test_maj_vec(files):
    a, b = files("a.json", [1, 0, 0]), files("b.json", [1 / 3, 1 / 3, 1 / 3])
    code, out, _ = run(["maj", "vec", a, b])
    env = json.loads(out)
    assert code == 0 and env["ok"] and env["version"] == __version__
    assert env["result"] == {"majorizes": True, "reverse": False}
    code, out, _ = run(["maj", "vec", a, b, "--witness"])
    assert len(json.loads(out)["certificate"]["doubly_stochastic"]) == 3


def test_maj_chan_witness(files):
    n = files("n.json", {"cols": [[0.7, 0.15, 0.15], [0.05, 0.45, 0.5]]})
    m = files("m.json", {"cols": [[0.6, 0.3, 0.1]]})
    code, out, _ = run(["maj", "chan", n, m, "--witness", "--jobs", "2"])
    env = json.loads(out)
    assert code == 0 and env["result"]["majorizes"]
    assert env["certificate"]["weights"][0] == pytest.approx([0.5, 0.5], abs=1e-12)
    code, out, _ = run(["maj", "chan", m, n])
    env = json.loads(out)
    assert not env["result"]["majorizes"] and "refuter" in env["certificate"]
    code, out, _ = run(["maj", "chan", n, m, "--unsorted"])
    assert not json.loads(out)["result"]["majorizes"]


def test_entropy_command(files):
    c = files("c.json", {"cols": [[1, 0], [0.5, 0.5]]})
    code, out, _ = run(["entropy", "--spec", "min", "--ext", "max", c])
    assert code == 0 and json.loads(out)["result"]["value_bits"] == 0.0
    code, out, _ = run(["entropy", "--ext", "choi", c])
    assert json.loads(out)["result"]["value_bits"] == 0.5


def test_rel_with_svg(files, tmp_path):
    x = files("x.json", {"p": [0.9, 0.1, 0], "q": [0.1, 0.8, 0.1]})
    y = files("y.json", {"p": [0.2, 0.8], "q": [0.1, 0.9]})
    svg = tmp_path / "l.svg"
    code, out, _ = run(["maj", "rel", x, y, "--lorenz", str(svg)])
    env = json.loads(out)
    assert code == 0 and env["result"]["majorizes"]
    assert env["result"]["lorenz_x"] == [[0, 0], [0.9, 0.1], [1, 0.9], [1, 1]]
    text = svg.read_text()
    assert 'viewBox="0 0 600 600"' in text and text.count("<polyline") == 1 and text.count("<line") == 2


def test_cond_game_bounds(files):
    p = files("p.json", {"n": 3, "m": 3, "w": [1 / 3, 0, 0, 0, 1 / 3, 0, 0, 0, 1 / 3]})
    q = files("q.json", [[0.2, 0.1], [0.3, 0.1], [0.2, 0.1]])
    code, out, _ = run(["maj", "cond", p, q])
    assert json.loads(out)["result"]["majorizes"] and "R" in json.loads(out)["certificate"]
    code, out, _ = run(["maj", "cond", q, p])
    assert "S" in json.loads(out)["certificate"]
    T = files("T.json", [1, 0, 0])
    code, out, _ = run(["game", "cond", p, "--T", T])
    assert json.loads(out)["result"]["payoff"] == pytest.approx(1.0)
    n = files("n.json", {"cols": [[0.7, 0.15, 0.15], [0.05, 0.45, 0.5]]})
    t = files("t.json", [[1, 0, 0]])
    code, out, _ = run(["game", "chan", n, "--t", t])
    assert json.loads(out)["result"]["payoff"] == pytest.approx(0.7)
    a1, a2 = files("a1.json", [0.4, 0.2, 0.2, 0.2]), files("a2.json", {"p": [0.3, 0.3, 0.3, 0.1]})
    code, out, _ = run(["bounds", a1, a2])
    res = json.loads(out)["result"]
    assert res["upper"] == pytest.approx([0.4, 0.25, 0.25, 0.1]) and res["lower"] == pytest.approx([0.3, 0.3, 0.2, 0.2])


def test_std_form_roundtrip(files, tmp_path):
    n = files("n.json", {"cols": [[0.2, 0.8], [0.5, 0.5], [0.9, 0.1]], "name": "demo"})
    code, out, _ = run(["std-form", n])
    first = json.loads(out)["result"]
    again = files("again.json", first)
    code, out2, _ = run(["std-form", again])
    assert json.loads(out2)["result"] == first
    assert first["cols"] == [[0.9, 0.1]]


def test_errors_and_exit_codes(files):
    bad = files("bad.json", '{"cols": [[1, 0],\n [0.5,')
    code, out, err = run(["std-form", bad])
    assert code == 1 and "line 2" in err and not json.loads(out)["ok"]
    off = files("off.json", {"cols": [[1, 0], [0.5, 0.4]]})
    code, _, err = run(["std-form", off])
    assert code == 1 and "column 1" in err
    code, _, _ = run(["nonsense"])
    assert code == 1
    code, _, _ = run([])
    assert code == 1
    code, _, err = run(["std-form", "/nonexistent/file.json"])
    assert code == 1 and "cannot read" in err


def test_determinism_and_options_after_command(files):
    n = files("n.json", {"cols": [[0.7, 0.15, 0.15], [0.05, 0.45, 0.5]]})
    m = files("m.json", {"cols": [[0.6, 0.3, 0.1]]})
    a = run(["--seed", "5", "maj", "chan", n, m, "--witness"])[1]
    b = run(["maj", "chan", n, m, "--witness", "--seed", "5"])[1]
    assert a == b and json.loads(a)["seed"] == 5
    pretty = run(["maj", "chan", n, m, "--pretty"])[1]
    assert "\n  " in pretty and json.loads(pretty) == json.loads(run(["maj", "chan", n, m])[1])


def test_float_format():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(1.0) == "1.0"
    assert dumps(float("inf")) == '"inf"'
    assert dumps({"a": [True, None, 2]}) == '{"a":[true,null,2]}'
    assert dumps(-0.0) == "0.0"


def test_lorenz_svg_shape():
    svg = lorenz_svg([[0, 0], [1, 1]])
    assert svg.startswith("<svg") and "20,580 580,20" in svg


def test_selftest_fast():
    code, out, _ = run(["selftest", "--fast"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 10 and all(l.startswith(("PASS", "FAIL")) for l in lines)
