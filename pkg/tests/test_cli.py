import json

import pytest

from minklen.cli import InputError, dump_polytope, main, parse_polytope
from minklen.polytope import hull

TETRA = {"dim": 3, "vertices": [[-1, -1, -1], [1, 0, 0], [0, 1, 0], [0, 0, 1]]}
SIMPLEX4 = {"dim": 3, "vertices": [[0, 0, 0], [1, 3, 0], [0, 2, 3], [4, 1, 3]]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, data in [("tetra.json", TETRA), ("simplex4.json", SIMPLEX4)]:
        p = tmp_path / name
        p.write_text(json.dumps(data))
        out[name] = str(p)
    t0 = tmp_path / "t0.txt"
    t0.write_text("# T0\n1 0\n0 1\n2 2\n")
    out["t0.txt"] = str(t0)
    l2 = tmp_path / "l2.txt"
    l2.write_text("0 0\n2 0\n0 2\n")
    out["l2.txt"] = str(l2)
    empty = tmp_path / "empty.json"
    empty.write_text('{"dim": 3, "vertices": []}')
    out["empty.json"] = str(empty)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_parse_formats():
    assert parse_polytope("1 0\n0 1\n2 2\n") == (2, [(1, 0), (0, 1), (2, 2)])
    assert parse_polytope(json.dumps(TETRA))[0] == 3
    for bad in ["", "1 x\n", '{"dim": 4, "vertices": [[1,2,3,4]]}', '{"vertices": [[1, 2], [1, 2, 3]]}', "{oops"]:
        with pytest.raises(InputError):
            parse_polytope(bad)


def test_round_trip():
    P = hull([tuple(v) for v in SIMPLEX4["vertices"]])
    _, verts = parse_polytope(dump_polytope(P))
    assert hull(verts).canonical_form() == P.canonical_form()


def test_length(capsys, files):
    code, out = run(capsys, "length", files["t0.txt"])
    assert code == 0 and out.out.strip() == "L = 1"
    code, out = run(capsys, "length", files["simplex4.json"], "--check", "--witness")
    assert code == 0 and out.out.startswith("L = 1")
    assert "anchor" in out.out


def test_length_json(capsys, files):
    code, out = run(capsys, "length", files["tetra.json"], "--json", "--witness")
    data = json.loads(out.out)
    assert code == 0
    assert data["schema"] == "minklen.report/1"
    assert data["result"]["length"] == 1
    assert "timings" not in data


def test_input_errors(capsys, files):
    assert run(capsys, "length", files["empty.json"])[0] == 2
    assert run(capsys, "length", "/nonexistent/file")[0] == 2
    assert run(capsys, "sum", files["t0.txt"])[0] == 2
    assert run(capsys, "sum", files["t0.txt"], files["tetra.json"])[0] == 2
    assert run(capsys, "random", "--count", "1", "--box", "0")[0] == 2
    assert run(capsys, "random", "--count", "0")[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_budget_exit(capsys, files):
    code, out = run(capsys, "length", files["simplex4.json"], "--oracle", "--oracle-budget", "1")
    assert code == 3
    assert "budget" in out.err


def test_classify(capsys, files):
    code, out = run(capsys, "classify", files["tetra.json"])
    assert code == 0
    assert "5 lattice points" in out.out
    assert "all 5-subsets: (10)" in out.out
    code, out = run(capsys, "classify", files["t0.txt"])
    assert out.out.strip().endswith("T0")
    code, out = run(capsys, "classify", files["l2.txt"])
    assert code == 0
    assert "L = 2" in out.out and "no polygon classification" in out.out


def test_sum(capsys, files):
    code, out = run(capsys, "sum", files["tetra.json"], files["tetra.json"])
    assert code == 0 and "L(P)=1, L(Q)=1, L(P+Q)=2" in out.out
    code, out = run(capsys, "sum", files["t0.txt"], files["t0.txt"], "--oracle")
    assert code == 0 and "L(P+Q)=3" in out.out


def test_random_diff(capsys):
    code, out = run(capsys, "random", "--count", "6", "--box", "3", "--seed", "7", "--diff")
    assert code == 0
    assert "6 instances, 0 mismatches" in out.out


def test_random_deterministic(capsys):
    args = ["random", "--count", "4", "--box", "4", "--seed", "5", "--json", "--diff"]
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a.out == b.out
    assert json.loads(a.out)["seed"] == 5


def test_verify(capsys):
    code, out = run(capsys, "verify")
    assert code == 0
    assert "FAIL" not in out.out
    assert "interior ledger total 4" in out.out
