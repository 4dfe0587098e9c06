"""Command-line interface: JSON files in, one JSON verdict out.

Every command prints {"status", "payload", "transcript"} and exits with
0 (ok/yes), 1 (no), 2 (undecided) or 3 (error).
"""
import argparse
import json
import re
import sys
from fractions import Fraction

from .errors import NcmError, SchemaError, NotHereditary, NonRationalPoint
from .exact_core import dense, polys
from .exact_core.dvr import DvrLattice, matrix_from_json
from .exact_core.field import FieldSpec
from .exact_core.hnf import hnf_to_json, poly_hnf
from .exact_core.points import ClosedPoint
from . import findim_algebra as fa
from . import lattices_global as lg
from . import local_orders as lo
from . import ncc_model as nm

EXIT = {"ok": 0, "yes": 0, "no": 1, "undecided": 2, "error": 3}


class InputError(NcmError):
    code = "InputError"


# -- input helpers -----------------------------------------------------
def load_json(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", "$")
    if not text.strip():
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno} column {exc.colno})", "$")


def _obj(path):
    data = load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object", "$")
    return data


def _field(obj):
    return FieldSpec.from_json(obj.get("field") if isinstance(obj, dict) else None, "$.field")


_TERM = re.compile(r"^([+-]?)([0-9/]*)\*?(x(?:\^([0-9]+)|\*\*([0-9]+))?)?$")


def parse_poly(F, text):
    """Polynomials like 'x^2 - 1', '3*x + 1/2' or 'x'."""
    s = text.replace(" ", "")
    if not s:
        raise SchemaError(f"empty polynomial {text!r}")
    terms = re.findall(r"[+-]?[^+-]+", s)
    coeffs = {}
    for term in terms:
        m = _TERM.match(term)
        if not m or (not m.group(2) and not m.group(3)):
            raise SchemaError(f"cannot parse polynomial term {term!r}")
        sign, c, xs, e1, e2 = m.groups()
        c = Fraction(c) if c else Fraction(1)
        if sign == "-":
            c = -c
        e = 0 if not xs else int(e1 or e2 or 1)
        coeffs[e] = coeffs.get(e, Fraction(0)) + c
    top = max(coeffs)
    return F.poly([F(coeffs.get(i, Fraction(0))) for i in range(top + 1)])


def parse_point(F, text):
    """'(x)', '(x-1)', '(x^2+1)', 'inf' or a JSON point object."""
    s = text.strip()
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed point JSON ({exc.msg})", "$")
        return ClosedPoint.from_json(F, obj)
    if s.lower() in ("inf", "infinity", "(inf)", "(infinity)"):
        return ClosedPoint.infinity(F)
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return ClosedPoint(F, polys.monic(parse_poly(F, s)))


def _split_at(spec):
    if ":" not in spec:
        raise SchemaError(f"--at expects POINT:FILE, got {spec!r}")
    pt, path = spec.rsplit(":", 1)
    return pt, path


def _cols_lattice(F, obj, prec, path="$"):
    rows = matrix_from_json(F, obj["basis"], path + ".basis", default_prec=prec)
    n = len(rows)
    return DvrLattice.from_vectors(F, n, [[rows[i][j] for i in range(n)] for j in range(len(rows[0]))])


def _assignments(F, specs, prec):
    out = []
    for spec in specs or []:
        pt, path = _split_at(spec)
        m = parse_point(F, pt)
        data = load_json(path)
        if data is None or data == [] or data == {}:
            continue
        if not isinstance(data, dict) or "basis" not in data:
            raise SchemaError(f"{path}: assignment needs 'basis'", "$")
        p = data.get("prec", prec)
        out.append(lg.CompletionAssignment(m, _cols_lattice(F, data, p), p))
    return out


def _local_orders(F, specs, prec):
    out = []
    for spec in specs or []:
        pt, path = _split_at(spec)
        m = parse_point(F, pt)
        data = load_json(path)
        if data is None or data == [] or data == {}:
            continue
        out.append((m, lo.LocalOrder.from_json(data, F, prec)))
    return out


def _lattice_list(F, specs, prec):
    out = []
    for spec in specs or []:
        pt, path = _split_at(spec)
        m = parse_point(F, pt)
        data = load_json(path)
        if data is None or data == [] or data == {}:
            continue
        out.append((m, _cols_lattice(F, data, data.get("prec", prec))))
    return out


def _rows_json(F, R):
    return [[F.to_json_scalar(c) for c in dense.to_scalars(F, r)] for r in R]


def _poly_json(F, p):
    return polys.poly_to_json(F, p)


# -- commands ----------------------------------------------------------
def cmd_hnf(a):
    obj = _obj(a.file)
    F = _field(obj)
    rows = obj.get("basis")
    if not isinstance(rows, list) or not rows:
        raise SchemaError("'basis' must be a nonempty matrix", "$.basis")
    P = [[polys.poly_from_json(F, e, f"$.basis[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(rows)]
    H = poly_hnf(F, P, obj.get("n", len(P)))
    return "ok", {"hnf": hnf_to_json(F, H)}, []


def cmd_dvr_canonical(a):
    obj = _obj(a.file)
    F = _field(obj)
    p = obj.get("prec", a.precision)
    lat = _cols_lattice(F, obj, p)
    return "ok", {"prec": p, "basis": lat.to_json(p)}, []


def _algebra(path):
    obj = _obj(path)
    return fa.StructAlgebra.from_json(obj)


def cmd_center(a):
    A = _algebra(a.file)
    Z = fa.center_basis(A)
    return "ok", {"dim": int(Z.shape[0]), "basis": _rows_json(A.F, Z)}, []


def cmd_radical(a):
    A = _algebra(a.file)
    J = fa.jacobson_radical(A)
    return "ok", {"dim": int(J.shape[0]), "basis": _rows_json(A.F, J)}, []


def cmd_blocks(a):
    A = _algebra(a.file)
    E = fa.block_decompose(A)
    payload = {"idempotents": _rows_json(A.F, E)}
    if fa.jacobson_radical(A).shape[0] == 0:
        payload["sizes"] = fa.wedderburn_sizes(A)
    return "ok", payload, []


def cmd_ext1(a):
    A = _algebra(a.file)
    return "ok", {"ext1": [[int(v) for v in r] for r in fa.ext1_matrix(A)]}, []


def cmd_fiber(a):
    obj = _obj(a.file)
    F = _field(obj)
    if "generators" in obj or "matrix_algebra" in obj:
        S = nm.structure_order(lg.GlobalOrder.from_json(obj, F))
    else:
        S = fa.PolyStructOrder.from_json(F, obj)
    m = parse_point(F, a.point)
    A = S.specialize(m)
    blocks = fa.maximal_ideals_over_point(S, m)
    return "ok", {"algebra": A.to_json(), "blocks": [{"block": i, "size": s} for i, s in blocks]}, []


def _order(path, prec):
    return lo.LocalOrder.from_json(_obj(path), None, prec)


def cmd_order_type(a):
    L = _order(a.file, a.precision)
    t, can = lo.order_type(L)
    return "ok", {"t": t, "canonical": list(can) if can is not None else None}, []


def cmd_is_maximal(a):
    L = _order(a.file, a.precision)
    ok = lo.is_maximal(L)
    return ("yes" if ok else "no"), {"maximal": ok, "ext1": lo.ext1_lattice(L)}, []


def _verify(P):
    ok, tr = lo.verify_morita_bimodule(P)
    return ok, [{"check": s["check"], "pass": s["pass"], "detail": s["detail"]} for s in tr]


def cmd_conjugate(a):
    L = _order(a.file, a.precision)
    u = matrix_from_json(L.F, load_json(a.by), "$", default_prec=L.prec)
    B, P = lo.conjugate(L, u)
    ok, tr = _verify(P)
    return ("ok" if ok else "no"), {"order": B.to_json(), "bimodule": P.to_json(), "verified": ok}, tr


def cmd_basic_progenerator(a):
    L = _order(a.file, a.precision)
    P, B = lo.basic_progenerator(L)
    ok, tr = _verify(P)
    return ("ok" if ok else "no"), {"bimodule": P.to_json(), "basic_order": B.to_json(), "verified": ok}, tr


def cmd_verify_bimodule(a):
    P = lo.LocalBimodule.from_json(_obj(a.file), None, a.precision)
    ok, tr = _verify(P)
    return ("yes" if ok else "no"), {"verified": ok}, tr


def cmd_centrally_equivalent(a):
    L1, L2 = _order(a.first, a.precision), _order(a.second, a.precision)
    status, info = lo.centrally_equivalent(L1, L2)
    tr = []
    if "chain" in info:
        steps = []
        for s in info.pop("chain"):
            steps.append({"step": s["step"], "bimodule": s["bimodule"].to_json(), "verified": s["verified"]})
            tr.extend({"check": f"{s['step']}.{c['check']}", "pass": c["pass"], "detail": c["detail"]}
                      for c in s["transcript"])
        info["chain"] = steps
    return status, info, tr


def _global_lattice(path):
    return lg.GlobalLattice.from_json(_obj(path))


def cmd_complete_at(a):
    L = _global_lattice(a.file)
    m = parse_point(L.F, a.point)
    lat = lg.complete_at(L, m)
    return "ok", {"point": m.to_json(), "prec": a.precision, "basis": lat.to_json(a.precision)}, []


def cmd_local_modify(a):
    L = _global_lattice(a.file)
    out = lg.local_modification(L, _assignments(L.F, a.at, a.precision))
    return "ok", out.to_json(), []


def cmd_intersect_oracle(a):
    L = _global_lattice(a.file)
    out = lg.intersect_from_completions(L, _assignments(L.F, a.at, a.precision))
    return "ok", out.to_json(), []


def cmd_local_modify_order(a):
    obj = _obj(a.file)
    A = lg.GlobalOrder.from_json(obj)
    out = lg.local_modification_order(A, _local_orders(A.F, a.at, a.precision))
    return "ok", out.to_json(), [{"check": "closure", "pass": True, "detail": "unit and basis products verified"}]


def cmd_local_modify_module(a):
    A = lg.GlobalOrder.from_json(_obj(a.order))
    L = lg.GlobalLattice.from_json(_obj(a.file), A.F)
    out = lg.local_modification_module(A, L, _lattice_list(A.F, a.at, a.precision))
    return "ok", out.to_json(), [{"check": "stability", "pass": True, "detail": "A N inside N verified"}]


def _descriptor(path, prec):
    return nm.NccDescriptor.from_json(_obj(path), prec)


def cmd_non_regular_locus(a):
    X = _descriptor(a.file, a.precision)
    return "ok", {"locus": [e.to_json() for e in nm.non_regular_locus(X)]}, []


def cmd_morita_check(a):
    X, Y = _descriptor(a.first, a.precision), _descriptor(a.second, a.precision)
    try:
        status, info = nm.hereditary_morita_equivalent(X, Y)
    except (NotHereditary, NonRationalPoint) as exc:
        payload = {"reason": exc.message, "code": exc.code}
        if hasattr(exc, "points"):
            payload["points"] = exc.points
        return "undecided", payload, []
    tr = info.pop("transcript", [])
    return status, info, tr


def cmd_verify_certificate(a):
    X, Y = _descriptor(a.first, a.precision), _descriptor(a.second, a.precision)
    cert = load_json(a.certificate)
    if isinstance(cert, dict) and "payload" in cert and "status" in cert:
        cert = cert["payload"]
    ok, tr = nm.verify_morita_certificate(X, Y, cert, a.precision)
    return ("yes" if ok else "no"), {"verified": ok}, tr


def cmd_center_basis(a):
    obj = _obj(a.file)
    F = _field(obj)
    if "curve" in obj:
        A = nm.NccDescriptor.from_json(obj, a.precision).global_order
        if A is None:
            raise SchemaError("descriptor has no global order", "$.global_order")
    else:
        A = nm.global_order_from_json(obj, F)
    B = nm.global_center_basis(A, a.degree)
    return "ok", {"degree": a.degree, "basis": [_poly_json(F, p) for p in B]}, []


def cmd_example_nodal(a):
    F = FieldSpec.from_json(json.loads(a.field)) if a.field else None
    ex = nm.nodal_example(Fraction(a.l1), Fraction(a.l2), F)
    F = ex.plus.F
    tr, payload = [], {"lambda1": F.to_json_scalar(ex.lambda1), "lambda2": F.to_json_scalar(ex.lambda2),
                       "center_generators": [_poly_json(F, g) for g in ex.center_generators]}
    for name, A in (("plus", ex.plus), ("minus", ex.minus)):
        ok, diag = A.verify()
        tr.append({"check": f"{name}.closure", "pass": ok,
                   "detail": ", ".join(f"{k}={v}" for k, v in diag.items())})
        locus = nm.non_regular_locus(ex.descriptor(name))
        payload[name] = {"order": A.to_json(), "locus": [e.to_json() for e in locus],
                         "center_basis": [_poly_json(F, p) for p in nm.global_center_basis(A, a.degree)]}
    return ("ok" if all(s["pass"] for s in tr) else "no"), payload, tr


# -- parser ------------------------------------------------------------
def build_parser():
    p = argparse.ArgumentParser(prog="ncmorita", description="Exact orders, lattices and Morita checks on curves.")
    p.add_argument("--precision", type=int, default=lo.DEFAULT_PRECISION,
                   help="working precision for completed local data (default 12)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *args, **opts):
        sp = sub.add_parser(name)
        for arg in args:
            sp.add_argument(arg)
        sp.set_defaults(fn=fn)
        for k, kw in opts.items():
            sp.add_argument("--" + k.replace("_", "-"), **kw)
        return sp

    add("hnf", cmd_hnf, "file")
    add("dvr-canonical", cmd_dvr_canonical, "file")
    add("center", cmd_center, "file")
    add("radical", cmd_radical, "file")
    add("blocks", cmd_blocks, "file")
    add("ext1", cmd_ext1, "file")
    add("fiber", cmd_fiber, "file", point=dict(required=True))
    add("order-type", cmd_order_type, "file")
    add("is-maximal", cmd_is_maximal, "file")
    add("conjugate", cmd_conjugate, "file", by=dict(required=True, help="JSON matrix of series"))
    add("basic-progenerator", cmd_basic_progenerator, "file")
    add("verify-bimodule", cmd_verify_bimodule, "file")
    add("centrally-equivalent", cmd_centrally_equivalent, "first", "second")
    add("complete-at", cmd_complete_at, "file", point=dict(required=True))
    at = dict(action="append", default=[], help="POINT:FILE, repeatable")
    add("local-modify", cmd_local_modify, "file", at=at)
    add("local-modify-order", cmd_local_modify_order, "file", at=at)
    add("local-modify-module", cmd_local_modify_module, "file", order=dict(required=True), at=at)
    add("intersect-oracle", cmd_intersect_oracle, "file", at=at)
    add("non-regular-locus", cmd_non_regular_locus, "file")
    add("morita-check", cmd_morita_check, "first", "second")
    add("verify-certificate", cmd_verify_certificate, "first", "second", "certificate")
    add("center-basis", cmd_center_basis, "file", degree=dict(type=int, default=8))
    add("example-nodal", cmd_example_nodal, l1=dict(required=True), l2=dict(required=True),
        field=dict(default=None, help='field JSON, e.g. {"kind":"Fp","p":7}'), degree=dict(type=int, default=8))
    return p


def run(argv=None):
    """(exit code, verdict dict)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision < 1:
            raise SchemaError("--precision must be positive", "$")
        status, payload, transcript = args.fn(args)
    except NcmError as exc:
        status, payload, transcript = "error", exc.to_json(), []
        if "path" not in payload:
            payload["path"] = "$"
    except (ValueError, ZeroDivisionError, KeyError, TypeError, IndexError) as exc:
        status, payload, transcript = "error", {"code": "SchemaError", "message": f"{type(exc).__name__}: {exc}",
                                                "path": "$"}, []
    return EXIT[status], {"status": status, "payload": payload, "transcript": transcript}


def main(argv=None):
    code, verdict = run(argv)
    sys.stdout.write(json.dumps(verdict, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
