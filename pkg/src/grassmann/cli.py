"""Command line front end.

Exit status: 0 on success, 1 on evaluation errors, 2 on parse/usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import geometry, grades, spaces
from .expr import (EvalError, Evaluator, ParseError, SessionConfig, parse,
                   parse_with_warnings)
from .fock import supercommutator_closed
from .multiindex import bits_to_indices, check_dim, indices_to_bits
from .multivector import Multivector, contract_left, format_basis, format_mv, format_number, from_vector

EXIT_OK, EXIT_EVAL, EXIT_PARSE = 0, 1, 2


# ---------------------------------------------------------------------------
# serialisation

def mv_to_json(M: Multivector, field: str) -> dict:
    terms = sorted(M.terms.items(), key=lambda t: bits_to_indices(t[0]))
    return {
        "dimension": M.n,
        "field": field,
        "terms": [{"indices": list(bits_to_indices(b)), "re": c.real, "im": c.imag}
                  for b, c in terms],
    }


def mv_from_json(doc: dict) -> Multivector:
    n = doc["dimension"]
    return Multivector(n, {indices_to_bits(t["indices"]): complex(t["re"], t["im"])
                           for t in doc["terms"]})


def _vec_json(v: np.ndarray) -> list:
    return [{"re": float(x.real), "im": float(x.imag)} for x in v]


def subspace_to_json(S: spaces.SubspaceBasis) -> dict:
    return {"dim": S.dim, "basis": [_vec_json(v) for v in S.vectors()]}


def _vec_text(v: np.ndarray) -> str:
    return format_mv(from_vector(v))


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


# ---------------------------------------------------------------------------

def _read_expr(text: str) -> str:
    return sys.stdin.read().strip() if text == "-" else text


def _config(args) -> SessionConfig:
    check_dim(args.n)
    if args.n < 1:
        raise EvalError("dimension must be at least 1")
    unit = 1.0
    if args.orient is not None:
        cfg0 = SessionConfig(args.n, True)
        val = Evaluator(cfg0)(parse(args.orient, args.n))
        if not isinstance(val, Multivector) or val.grades() not in ([], [0]):
            raise EvalError("--orient needs a unit scalar")
        unit = val.scalar_part()
    return SessionConfig(args.n, args.complex, unit, output="json" if args.json else "text")


def _value(src: str, cfg: SessionConfig, err) -> object:
    node, warns = parse_with_warnings(_read_expr(src), cfg.n)
    for w in warns:
        print(f"warning: {w}", file=err)
    value = Evaluator(cfg)(node)
    if isinstance(value, Multivector):
        cfg.space.check(value)
    return value


def _multivector(src: str, cfg: SessionConfig, err) -> Multivector:
    v = _value(src, cfg, err)
    if not isinstance(v, Multivector):
        raise EvalError("expression must evaluate to a multivector")
    return v


def cmd_eval(args, cfg, out, err):
    v = _value(args.expr, cfg, err)
    field = cfg.space.field
    if cfg.output == "json":
        if isinstance(v, Multivector):
            doc = mv_to_json(v, field)
        elif isinstance(v, spaces.SubspaceBasis):
            doc = {"dimension": cfg.n, "field": field, "subspace": subspace_to_json(v)}
        else:
            doc = {"dimension": cfg.n, "field": field, "value": v}
        print(json.dumps(doc), file=out)
        return
    if isinstance(v, Multivector):
        print(format_mv(v), file=out)
    elif isinstance(v, spaces.SubspaceBasis):
        print(f"dim {v.dim}", file=out)
        for vec in v.vectors():
            print("  " + _vec_text(vec), file=out)
    else:
        print("true" if v else "false", file=out)


def cmd_spaces(args, cfg, out, err):
    M = _multivector(args.expr, cfg, err)
    I, O = spaces.inner_space(M), spaces.outer_space(M)
    prof = grades.grade_profile(M)
    if cfg.output == "json":
        print(json.dumps({"dimension": cfg.n, "field": cfg.space.field,
                          "isp": subspace_to_json(I), "osp": subspace_to_json(O),
                          "grades": vars(prof)}), file=out)
        return
    for label, S in (("isp", I), ("osp", O)):
        print(f"{label} dim {S.dim}", file=out)
        for vec in S.vectors():
            print("  " + _vec_text(vec), file=out)
    print(f"grades: inner {prof.inner}, bottom {prof.bottom}, top {prof.top}, outer {prof.outer}",
          file=out)


def _report_split(res, cfg, out, label):
    if cfg.output == "json":
        print(json.dumps({"dimension": cfg.n, "field": cfg.space.field, "kind": res.kind,
                          "B": mv_to_json(res.B.mv, cfg.space.field),
                          "N": mv_to_json(res.N, cfg.space.field),
                          "flags": res.flags, "residual": res.residual}), file=out)
        return
    print(f"B = {format_mv(res.B.mv)}", file=out)
    print(f"N = {format_mv(res.N)}", file=out)
    print(f"{label}: {res.kind}", file=out)
    print("flags: " + " ".join(f"{k}={_yes(v)}" for k, v in res.flags.items()), file=out)
    print(f"residual: {format_number(res.residual, 3)}", file=out)


def cmd_factorize(args, cfg, out, err):
    M = _multivector(args.expr, cfg, err)
    _report_split(spaces.factorize_maximal(M), cfg, out, "factorization")


def cmd_carve(args, cfg, out, err):
    M = _multivector(args.expr, cfg, err)
    _report_split(spaces.carve_minimal(M), cfg, out, "carving")


def cmd_angles(args, cfg, out, err):
    A = _multivector(args.expr_a, cfg, err)
    B = _multivector(args.expr_b, cfg, err)
    for X, what in ((A, "A"), (B, "B")):
        if X.is_zero() or not grades.is_simple(X):
            raise EvalError(f"{what} must be a nonzero blade")
    pd = geometry.principal_data_of_blades(A, B)
    oriented, unoriented = geometry.asym_angle_cos(A, B)
    C = contract_left(A, B)
    na, nb, nc = A.norm(), B.norm(), C.norm()
    if cfg.output == "json":
        print(json.dumps({
            "dimension": cfg.n, "field": cfg.space.field,
            "cosines": [float(s) for s in pd.cosines],
            "cos_oriented": {"re": oriented.real, "im": oriented.imag},
            "cos_unoriented": unoriented,
            "norm_A": na, "norm_B": nb, "norm_contraction": nc,
            "contraction": mv_to_json(C, cfg.space.field)}), file=out)
        return
    fmt = lambda x: format_number(float(x), 12)
    print("principal cosines: " + " ".join(fmt(s) for s in pd.cosines), file=out)
    print("principal angles (deg): " + " ".join(fmt(np.degrees(t)) for t in pd.angles), file=out)
    print(f"cos Theta oriented: {format_mv(Multivector.scalar(cfg.n, oriented))}", file=out)
    print(f"cos Theta unoriented: {fmt(unoriented)}", file=out)
    print(f"A<<B = {format_mv(C)}", file=out)
    print(f"|A<<B| = {fmt(nc)} = |A| |B| cos Theta = {fmt(na)} * {fmt(nb)} * {fmt(unoriented)}",
          file=out)


def cmd_simple(args, cfg, out, err):
    M = _multivector(args.expr, cfg, err)
    verdict = "simple" if grades.is_simple(M) else "non-simple"
    if M.is_homogeneous():
        pl = format_number(grades.plucker_max(M), 12)
        ca = format_number(grades.cartan_residual(M), 12)
        print(f"{verdict}; plucker residual {pl}; cartan residual {ca}", file=out)
    else:
        print(f"{verdict}; inhomogeneous (grades {M.grades()})", file=out)


def _index_arg(text: str, n: int) -> int:
    text = text.strip()
    if text in ("0", "", "{}"):
        return 0
    try:
        if "," in text:
            idx = [int(x) for x in text.strip("{}").split(",")]
        else:
            idx = [int(c) for c in text]
    except ValueError:
        raise ParseError(f"malformed multi-index {text!r}") from None
    if any(i < 1 or i > n for i in idx):
        raise ParseError(f"multi-index {text!r} out of range for n={n}")
    if len(set(idx)) != len(idx):
        raise ParseError(f"multi-index {text!r} repeats an index")
    return indices_to_bits(idx)


def _scom_text(sign: int, bits: int, n: int) -> str:
    if sign == 0:
        return "0"
    return ("+" if sign > 0 else "-") + (format_basis(bits, n) if bits else "1")


def cmd_scom(args, cfg, out, err):
    n = cfg.n
    i, j = _index_arg(args.i, n), _index_arg(args.j, n)
    ks = [_index_arg(args.k, n)] if args.k is not None else range(1 << n)
    rows = []
    for k in ks:
        s, b = supercommutator_closed(i, j, k, n)
        rows.append((k, s, b))
    if cfg.output == "json":
        print(json.dumps({"dimension": n, "i": list(bits_to_indices(i)),
                          "j": list(bits_to_indices(j)),
                          "results": [{"k": list(bits_to_indices(k)), "sign": s,
                                       "indices": list(bits_to_indices(b))}
                                      for k, s, b in rows]}), file=out)
        return
    if args.k is not None:
        print(_scom_text(rows[0][1], rows[0][2], n), file=out)
        return
    for k, s, b in sorted(rows, key=lambda r: (bin(r[0]).count("1"), bits_to_indices(r[0]))):
        print(f"{format_basis(k, n) if k else '1'}: {_scom_text(s, b, n)}", file=out)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=int, required=True, help="ambient dimension")
    common.add_argument("--complex", action="store_true", help="complex scalars")
    common.add_argument("--orient", metavar="PHASE", default=None,
                        help="unit scalar multiplying e1...n (default 1)")
    common.add_argument("--json", action="store_true", help="JSON output")

    ap = argparse.ArgumentParser(prog="grassmann", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    p.add_argument("expr", help="expression, or - for stdin")
    p.set_defaults(func=cmd_eval)
    for name, func, help_ in (("spaces", cmd_spaces, "inner/outer spaces and grades"),
                              ("factorize", cmd_factorize, "optimal blade factorization"),
                              ("carve", cmd_carve, "optimal blade carving"),
                              ("simple", cmd_simple, "simplicity test")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("expr")
        p.set_defaults(func=func)
    p = sub.add_parser("angles", parents=[common], help="angles between two blades")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    p.set_defaults(func=cmd_angles)
    p = sub.add_parser("scom", parents=[common],
                       help="closed-form supercommutator of a_I^dagger and a_J")
    p.add_argument("i")
    p.add_argument("j")
    p.add_argument("k", nargs="?")
    p.set_defaults(func=cmd_scom)
    return ap


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        args.func(args, cfg, out, err)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except (EvalError, ValueError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"evaluation error: {exc}", file=err)
        return EXIT_EVAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
