import json
import subprocess
import sys

import pytest

from ncmorita import cli, local_orders as lo, lattices_global as lg
from ncmorita.exact_core import QQ, DvrLattice

from algebras import upper_triangular
from ncc_helpers import INF, at


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(*argv):
    return cli.run([str(a) for a in argv])


def p1(points, parts=(1, 1)):
    return {"curve": "P1", "rank": sum(parts), "marked": [{"point": p, "type": list(parts)} for p in points]}


def test_exit_codes():
    assert cli.EXIT == {"ok": 0, "yes": 0, "no": 1, "undecided": 2, "error": 3}


def test_hnf_and_dvr(tmp_path):
    code, v = run("hnf", write(tmp_path, "h.json", {"basis": [[[0, 1], [0, 1]], [[], [1]]]}))
    assert code == 0 and v["payload"]["hnf"] == [[[0, 1], []], [[], [1]]]
    code, v = run("dvr-canonical", write(tmp_path, "d.json",
                                         {"basis": [[{"floor": 0, "prec": 12, "coeffs": [1]}, {"floor": -1, "prec": 12, "coeffs": [1]}],
                                                    [{"floor": 0, "prec": 12, "coeffs": []}, {"floor": 1, "prec": 12, "coeffs": [1]}]]}))
    assert code == 0
    B = v["payload"]["basis"]
    # [[1, t^-1], [0, t]]: the valuations of the canonical entries
    assert [[e["floor"] if any(e["coeffs"]) else None for e in r] for r in B] == [[0, -1], [None, 1]]


def test_algebra_commands(tmp_path):
    f = write(tmp_path, "a.json", upper_triangular(QQ).to_json())
    assert run("center", f)[1]["payload"]["dim"] == 1
    assert run("radical", f)[1]["payload"]["dim"] == 1
    assert len(run("blocks", f)[1]["payload"]["idempotents"]) == 1  # connected
    E = run("ext1", f)[1]["payload"]["ext1"]
    assert sorted(sum(E, [])) == [0, 0, 0, 1]


def test_local_order_commands(tmp_path):
    h = write(tmp_path, "h.json", {"field": {"kind": "Q"}, "hereditary": {"parts": [2, 1, 3]}})
    m = write(tmp_path, "m.json", {"field": {"kind": "Q"}, "hereditary": {"parts": [3]}})
    code, v = run("order-type", h)
    assert code == 0 and v["payload"] == {"t": 3, "canonical": [1, 3, 2]}
    assert run("is-maximal", m)[0] == 0
    assert run("is-maximal", h)[0] == 1
    code, v = run("basic-progenerator", h)
    assert code == 0 and v["payload"]["verified"]
    bim = write(tmp_path, "b.json", v["payload"]["bimodule"])
    assert run("verify-bimodule", bim)[0] == 0
    assert run("centrally-equivalent", h, m)[0] == 1
    h2 = write(tmp_path, "h2.json", {"field": {"kind": "Q"}, "hereditary": {"parts": [1, 3, 2]}})
    code, v = run("centrally-equivalent", h, h2)
    assert code == 0 and all(s["pass"] for s in v["transcript"])


def test_conjugate_command(tmp_path):
    m = write(tmp_path, "m.json", {"field": {"kind": "Q"}, "hereditary": {"parts": [2]}})
    u = write(tmp_path, "u.json", [[{"floor": 1, "prec": 12, "coeffs": [1]}, {"floor": 0, "prec": 12, "coeffs": []}],
                                   [{"floor": 0, "prec": 12, "coeffs": []}, {"floor": 0, "prec": 12, "coeffs": [1]}]])
    code, v = run("conjugate", m, "--by", u)
    assert code == 0 and v["payload"]["verified"]
    B = lo.LocalOrder.from_json(v["payload"]["order"])
    assert B.valuation_pattern() == [[0, 1], [-1, 0]]


def test_lattice_commands(tmp_path):
    L = lg.GlobalLattice.standard(QQ, 1)
    f = write(tmp_path, "L.json", L.to_json())
    N = write(tmp_path, "N.json", {"basis": [[{"floor": 2, "prec": 12, "coeffs": [1]}]]})
    empty = write(tmp_path, "E.json", "")
    code, v = run("local-modify", f, "--at", f"(x):{empty}")
    assert code == 0 and lg.GlobalLattice.from_json(v["payload"]) == L
    code, v = run("local-modify", f, "--at", f"(x):{N}")
    out = lg.GlobalLattice.from_json(v["payload"])
    code2, v2 = run("intersect-oracle", f, "--at", f"(x):{N}")
    assert code == code2 == 0 and lg.GlobalLattice.from_json(v2["payload"]) == out
    code, v = run("complete-at", write(tmp_path, "O.json", out.to_json()), "--point", "(x)")
    assert code == 0
    rows = v["payload"]["basis"]
    assert rows == [[{"floor": 2, "prec": 12, "coeffs": [1] + [0] * 9}]]


def test_order_modification_commands(tmp_path):
    A = lg.GlobalOrder.matrix_algebra(QQ, 2)
    fa_ = write(tmp_path, "A.json", A.to_json())
    H = write(tmp_path, "H.json", {"hereditary": {"parts": [1, 1]}})
    code, v = run("local-modify-order", fa_, "--at", f"(x):{H}")
    assert code == 0
    B = lg.GlobalOrder.from_json(v["payload"])
    assert B.complete_at(lg.ClosedPoint.rational(QQ, 0)).valuation_pattern() == [[0, 1], [0, 0]]
    col = write(tmp_path, "C.json", lg.GlobalLattice.standard(QQ, 2).to_json())
    N = write(tmp_path, "N.json", {"basis": [[{"floor": 1, "prec": 12, "coeffs": [1]}, {"floor": 0, "prec": 12, "coeffs": []}],
                                             [{"floor": 0, "prec": 12, "coeffs": []}, {"floor": 1, "prec": 12, "coeffs": [1]}]]})
    code, v = run("local-modify-module", col, "--order", fa_, "--at", f"(x):{N}")
    assert code == 0
    x = QQ.gen()
    assert lg.GlobalLattice.from_json(v["payload"]) == lg.GlobalLattice.diagonal(QQ, [x, x])
    code, v = run("center-basis", fa_, "--degree", 2)
    assert code == 0 and v["payload"]["basis"] == [[1], [0, 1], [0, 0, 1]]
    code, v = run("fiber", fa_, "--point", "(x-1)")
    assert code == 0 and v["payload"]["blocks"] == [{"block": 0, "size": 2}]


def test_morita_roundtrip(tmp_path):
    X = write(tmp_path, "X.json", p1([at(0), at(1), INF]))
    Y = write(tmp_path, "Y.json", p1([at(0), at(2), INF]))
    code, v = run("morita-check", X, Y)
    assert code == 0 and v["status"] == "yes"
    cert = write(tmp_path, "cert.json", v)
    code, w = run("verify-certificate", X, Y, cert)
    assert code == 0 and w["payload"]["verified"]
    Z = write(tmp_path, "Z.json", p1([at(0), at(1), at(2), INF]))
    W = write(tmp_path, "W.json", p1([at(0), at(1), at(3), INF]))
    assert run("morita-check", Z, W)[0] == 1


def test_morita_undecided(tmp_path):
    X = write(tmp_path, "X.json", p1([{"poly": [1, 0, 1]}]))
    code, v = run("morita-check", X, X)
    assert code == 2 and v["status"] == "undecided"


def test_nodal_and_locus(tmp_path):
    code, v = run("example-nodal", "--l1", 2, "--l2", 3)
    assert code == 0
    for name in ("plus", "minus"):
        assert len(v["payload"][name]["locus"]) == 3
    d = write(tmp_path, "plus.json", {"curve": "A1", "field": {"kind": "Q"}, "rank": 3,
                                      "global_order": v["payload"]["plus"]["order"]})
    code, w = run("non-regular-locus", d)
    assert code == 0 and w["payload"]["locus"] == v["payload"]["plus"]["locus"]
    code, w = run("center-basis", d, "--degree", 4)
    assert w["payload"]["basis"] == [[1], [0, 0, 1], [0, -1, 0, 1], [0, 0, 0, 0, 1]]
    assert run("example-nodal", "--l1", 1, "--l2", 3)[0] == 3


def test_errors(tmp_path):
    bad = write(tmp_path, "bad.json", "{ not json")
    code, v = run("order-type", bad)
    assert code == 3 and v["status"] == "error"
    assert v["payload"]["code"] == "SchemaError" and v["payload"]["path"] == "$"
    code, v = run("order-type", str(tmp_path / "missing.json"))
    assert code == 3 and v["payload"]["code"] == "InputError"
    wrong = write(tmp_path, "w.json", {"field": {"kind": "Q"}, "hereditary": {"parts": [0]}})
    code, v = run("order-type", wrong)
    assert code == 3 and v["payload"]["path"] == "$.hereditary"
    code, v = run("--precision", 0, "order-type", wrong)
    assert code == 3


def test_precision_flag(tmp_path):
    h = write(tmp_path, "h.json", {"field": {"kind": "Q"}, "hereditary": {"parts": [1, 2]}})
    a = run("basic-progenerator", h)[1]
    b = run("--precision", 24, "basic-progenerator", h)[1]
    assert a["status"] == b["status"] == "ok"
    assert b["payload"]["basic_order"]["prec"] == 24
    assert a["payload"]["basic_order"]["prec"] == 12


def test_console_script_is_deterministic(tmp_path):
    X = write(tmp_path, "X.json", p1([at(0), at(1), INF]))
    Y = write(tmp_path, "Y.json", p1([at(0), at(2), INF]))
    cmd = [sys.executable, "-m", "ncmorita.cli", "morita-check", X, Y]
    r1 = subprocess.run(cmd, capture_output=True, text=True)
    r2 = subprocess.run(cmd, capture_output=True, text=True)
    assert r1.returncode == 0 and r1.stdout == r2.stdout
    assert json.loads(r1.stdout)["status"] == "yes"
