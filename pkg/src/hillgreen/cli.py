"""Command-line front end: ``hillgreen <command> [options]``.

Exit codes: 0 all checks pass, 1 a check failed, 2 resonant or degenerate,
3 hypothesis violated, 4 eigenvalue not found, 5 I/O error, 64 usage.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as hio
from .errors import HillGreenError, PotentialDomain
from .greens import (
    BasisKind,
    BCKind,
    basis_green_identity_check,
    basis_solution,
    build_green,
    check_green_definition,
    eval_green,
    green_partials,
    write_kernel_csv,
)
from .identities import (
    ALL_IDENTITIES,
    IdentityId,
    decomposition_residual,
    example_comparability,
    matrix_green_boundary_check,
    remark_residuals,
    residual_or_status,
    sign_comparison_report,
)
from .nonlinear import (
    PicardConfig,
    bound_constants,
    distance_bound_check,
    example_spec,
    picard_solve,
    reproduce_paper_example,
)
from .ode_core import GridSpec, Potential, fundamental_pair
from .spectral import (
    EigenSearchConfig,
    characteristic_value,
    count_zeros,
    first_eigenvalue,
    ordering_check,
)

EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_USAGE = 0, 1, 5, 64
SAMPLED_DEMO = "inline:sin:-2:-1:1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_potential(text):
    """inline:constant:<v>, inline:sin:<c0>:<amp>:<freq>, or a path to a JSON file."""
    if text.startswith("inline:"):
        parts = text.split(":")[1:]
        try:
            if parts[0] == "constant" and len(parts) == 2:
                return Potential.constant(float(parts[1]))
            if parts[0] == "sin" and len(parts) == 4:
                return Potential.closed_form("sin", *map(float, parts[1:]))
        except ValueError as exc:
            raise PotentialDomain(f"bad inline potential {text!r}: {exc}") from None
        raise PotentialDomain(f"bad inline potential {text!r}")
    with open(text) as fh:
        raw = fh.read()
    try:
        return Potential.from_json(raw)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise PotentialDomain(f"invalid potential file {text!r}: {exc}") from None


def sampled_demo_potential(n=101):
    """a(t) = -2 - sin(2 pi t) sampled at n points, linear interpolation."""
    t = np.linspace(0.0, 1.0, n)
    return Potential.sampled(t, -2.0 - np.sin(2 * np.pi * t))


def _common(p):
    p.add_argument("--potential", default="inline:constant:-1",
                   help="inline:constant:<v>, inline:sin:<c0>:<amp>:<freq>, or a JSON file")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=101, help="evaluation grid size")
    p.add_argument("--nodes", type=int, default=1001, help="integration grid size")
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.add_argument("--tol", type=float, default=None)


def _bc_arg(p, required=True, default=None):
    p.add_argument("--bc", type=BCKind.parse, required=required, default=default,
                   help="dirichlet | neumann | periodic | mixed1 | mixed2")


def _nonlinear_args(p):
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--bc-a", type=BCKind.parse, default=BCKind.DIRICHLET)
    p.add_argument("--bc-b", type=BCKind.parse, default=BCKind.PERIODIC)
    p.add_argument("--quad-nodes", type=int, default=64)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--sup-grid", type=int, default=501)
    p.add_argument("--force", action="store_true", help="iterate even when P >= 1")


def build_parser():
    common = _Parser(add_help=False)
    _common(common)
    top = _Parser(prog="hillgreen", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("fundamental", parents=[common], help="fundamental pair and Wronskian")

    g = sub.add_parser("green", help="Green's kernels").add_subparsers(dest="action", required=True,
                                                                       parser_class=_Parser)
    for name in ("build", "eval", "table"):
        sp = g.add_parser(name, parents=[common])
        _bc_arg(sp)
        if name == "eval":
            sp.add_argument("--t", type=float, required=True)
            sp.add_argument("--s", type=float, required=True)
            sp.add_argument("--side", choices=("lower", "upper"), default=None)

    v = sub.add_parser("verify", help="identity and definition checks").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    sp = v.add_parser("identity", parents=[common])
    sp.add_argument("--id", action="append", dest="ids", choices=[i.value for i in IdentityId])
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--route", choices=("basis", "trace"), default="basis")
    sp = v.add_parser("matrix", parents=[common])
    _bc_arg(sp, required=False)
    v.add_parser("signs", parents=[common])
    v.add_parser("basis", parents=[common])
    sp = v.add_parser("definition", parents=[common])
    _bc_arg(sp, required=False)
    v.add_parser("remarks", parents=[common])
    v.add_parser("comparability", parents=[common])

    sp = sub.add_parser("eigen", parents=[common], help="first eigenvalue")
    _bc_arg(sp, required=False)
    sp.add_argument("--lambda-min", type=float, default=-100.0)
    sp.add_argument("--lambda-max", type=float, default=150.0)
    sp.add_argument("--scan-step", type=float, default=0.25)

    sp = sub.add_parser("zeros", parents=[common], help="interior zeros of a basis function")
    sp.add_argument("--basis", type=BasisKind.parse, default=BasisKind.R1)

    nl = sub.add_parser("nonlinear", help="fixed-point program").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    for name in ("constants", "solve", "distance", "example"):
        sp = nl.add_parser(name, parents=[common])
        _nonlinear_args(sp)
        if name == "solve":
            _bc_arg(sp, required=False, default=BCKind.DIRICHLET)

    sub.add_parser("reproduce-all", parents=[common], help="run every check and summarise")
    return top


def _ctx(args):
    pot = parse_potential(args.potential)
    grid = GridSpec(args.grid)
    nodes = GridSpec(args.nodes)
    return pot, grid, nodes


def _pair(args):
    pot, grid, nodes = _ctx(args)
    return fundamental_pair(pot, args.lam, nodes), grid


def _tol(args, default):
    return default if args.tol is None else args.tol


def _picard_cfg(args):
    return PicardConfig(quad_nodes=args.quad_nodes, sup_grid=args.sup_grid, tol=_tol(args, 1e-10),
                        max_iter=args.max_iter)


def cmd_fundamental(args):
    pair, grid = _pair(args)
    if args.out == "csv":
        t = grid.nodes
        a, da, b, db = pair(t)
        return EXIT_OK, ("csv", hio.csv_lines(["t", "phi1", "dphi1", "phi2", "dphi2"], zip(t, a, da, b, db)))
    p1, dp1, p2, dp2 = pair.end
    tol = _tol(args, 1e-8)
    out = {
        "potential": pair.potential.to_dict(),
        "lambda": pair.lam,
        "phi1_1": p1, "dphi1_1": dp1, "phi2_1": p2, "dphi2_1": dp2,
        "discriminant": p1 + dp2,
        "wronskian_defect": pair.wronskian_defect,
        "passed": pair.wronskian_defect <= tol,
    }
    return (EXIT_OK if out["passed"] else EXIT_FAIL), out


def cmd_green(args):
    pair, grid = _pair(args)
    k = build_green(args.bc, pair)
    if args.action == "build":
        rep = check_green_definition(k, grid)
        tol = _tol(args, 1e-6)
        out = {"bc": k.bc.value, "det": k.det, "N": k.N.tolist(), "definition": rep.to_dict(tol)}
        return (EXIT_OK if rep.passed(tol) else EXIT_FAIL), out
    if args.action == "eval":
        g = eval_green(k, args.t, args.s)
        dt, ds, dts = green_partials(k, args.t, args.s, args.side)
        return EXIT_OK, {"bc": k.bc.value, "t": args.t, "s": args.s, "G": g, "dGdt": dt, "dGds": ds, "d2Gdtds": dts}
    import io as _io
    buf = _io.StringIO()
    write_kernel_csv(k, grid, buf)
    if args.out == "csv":
        return EXIT_OK, ("csv", buf.getvalue())
    T, S, G, dt, ds = k.table(grid)
    return EXIT_OK, {"bc": k.bc.value, "t": grid.nodes, "G": G, "dGdt": dt, "dGds": ds}


def _status_exit(rows, ok_key="passed"):
    if any(r.get("status") in ("resonant", "degenerate") for r in rows):
        return 2
    return EXIT_OK if all(r.get(ok_key) for r in rows) else EXIT_FAIL


def cmd_verify(args):
    pair, grid = _pair(args)
    tol = _tol(args, 1e-6)
    if args.action == "identity":
        if args.all or not args.ids:
            rows = [residual_or_status(i, pair, grid, args.route).to_dict(tol) for i in ALL_IDENTITIES]
            return _status_exit(rows), rows
        rows = [decomposition_residual(i, pair, grid, args.route).to_dict(tol) for i in args.ids]
        return _status_exit(rows), rows
    if args.action == "matrix":
        bcs = [args.bc] if args.bc else list(BCKind)
        rows = []
        for bc in bcs:
            r = matrix_green_boundary_check(build_green(bc, pair))
            r["passed"] = r["deviation"] <= tol
            rows.append(r)
        return _status_exit(rows), rows
    if args.action == "signs":
        rows = sign_comparison_report(pair, grid)
        return _status_exit(rows, "holds"), rows
    if args.action == "basis":
        rows = basis_green_identity_check(pair, grid, tol)
        return _status_exit(rows), rows
    if args.action == "definition":
        bcs = [args.bc] if args.bc else list(BCKind)
        rows = [check_green_definition(build_green(bc, pair), grid).to_dict(tol) for bc in bcs]
        return _status_exit(rows), rows
    if args.action == "remarks":
        out = remark_residuals(pair, grid)
        out["passed"] = max(out.values()) <= _tol(args, 1e-5)
        return (EXIT_OK if out["passed"] else EXIT_FAIL), out
    rows = [c.to_dict() for c in example_comparability(grid, GridSpec(args.nodes))]
    ok = _comparability_ok(rows)
    return (EXIT_OK if ok else EXIT_FAIL), {"cases": rows, "passed": ok}


def _comparability_ok(rows):
    """m = 1 comparable for both mixed problems; m = 2 incomparable for M1 and m = 3 for M2."""
    want = {(1.0, "P vs M1"): True, (1.0, "P vs M2"): True, (2.0, "P vs M1"): False, (3.0, "P vs M2"): False}
    got = {(r["m"], r["pair"]): r for r in rows}
    ok = True
    for key, comparable in want.items():
        r = got[key]
        if comparable:
            ok &= r["comparable"]
        else:
            ok &= (not r["comparable"]) and r["witness_negative"] is not None and r["witness_positive"] is not None
    return bool(ok)


def cmd_eigen(args):
    pot, grid, nodes = _ctx(args)
    cfg = EigenSearchConfig(args.lambda_min, args.lambda_max, args.scan_step, _tol(args, 1e-9))
    bcs = [args.bc] if args.bc else list(BCKind)
    rows = []
    for bc in bcs:
        lam0 = first_eigenvalue(bc, pot, cfg, nodes)
        rows.append({"bc": bc.value, "lambda0": lam0, "char_residual": characteristic_value(bc, pot, lam0, nodes)})
    if args.bc:
        return EXIT_OK, rows[0]
    order = ordering_check(pot, cfg, nodes)
    return (EXIT_OK if order["passed"] else EXIT_FAIL), {"eigenvalues": rows, "flags": order["flags"]}


def cmd_zeros(args):
    pair, _ = _pair(args)
    r = basis_solution(args.basis, pair)
    return EXIT_OK, {"basis": args.basis.value, "lambda": pair.lam, "zeros": count_zeros(r)}


def cmd_nonlinear(args):
    cfg = _picard_cfg(args)
    if args.action == "example":
        rep = reproduce_paper_example(cfg)
        if args.out == "csv":
            rows = [(r["quantity"], r["computed"], r["paper"], r["rel_err"]) for r in rep["rows"]]
            return (EXIT_OK if rep["passed"] else EXIT_FAIL), (
                "csv", hio.csv_lines(["quantity", "computed", "paper", "rel_err"], rows))
        return (EXIT_OK if rep["passed"] else EXIT_FAIL), rep
    pair, _ = _pair(args)
    spec = example_spec(args.c)
    if args.action == "constants":
        k = bound_constants(build_green(args.bc_a, pair), build_green(args.bc_b, pair), spec, cfg)
        out = k.to_dict()
        out.update(c=args.c, bc_a=args.bc_a.value, bc_b=args.bc_b.value, contractive=k.P < 1, K1_below_one=k.K1 < 1)
        return EXIT_OK, out
    if args.action == "solve":
        res = picard_solve(build_green(args.bc, pair), spec, cfg, force=args.force)
        out = res.to_dict(include_solution=args.out == "json" and args.output is not None)
        out["bc"] = args.bc.value
        out["c"] = args.c
        out["within_apriori_bound"] = res.sup_norm <= res.bound + cfg.tol
        out["passed"] = bool(res.converged and out["within_apriori_bound"])
        if args.out == "csv":
            return EXIT_OK, ("csv", hio.csv_lines(["t", "u"], zip(res.t, res.u)))
        return (EXIT_OK if out["passed"] else EXIT_FAIL), out
    rep = distance_bound_check(build_green(args.bc_a, pair), build_green(args.bc_b, pair), spec, cfg)
    rep["c"] = args.c
    return (EXIT_OK if rep["passed"] else EXIT_FAIL), rep


def reproduce_all(nodes=1001, grid=101):
    """Every check at desk scale; returns (passed, sections)."""
    g = GridSpec(grid)
    n = GridSpec(nodes)
    sections = {}
    pair = fundamental_pair(Potential.constant(-1.0), 0.0, n)
    defs = [check_green_definition(build_green(bc, pair), g).to_dict(1e-6) for bc in BCKind]
    mats = [matrix_green_boundary_check(build_green(bc, pair)) for bc in BCKind]
    basis = basis_green_identity_check(pair, g, 1e-6)
    sections["definition"] = {"passed": all(d["passed"] for d in defs)
                              and all(m["deviation"] <= 1e-6 for m in mats)
                              and all(b["passed"] for b in basis),
                              "kernels": defs, "matrix": mats, "basis": basis}
    for label, pot, tol in (("identities_constant_-1", Potential.constant(-1.0), 1e-6),
                            ("identities_sampled", sampled_demo_potential(), 1e-5)):
        p = fundamental_pair(pot, 0.0, n)
        rows = [residual_or_status(i, p, g).to_dict(tol) for i in ALL_IDENTITIES]
        sections[label] = {"passed": all(r["passed"] for r in rows),
                           "worst": max(r["residual"] or 0.0 for r in rows), "reports": rows}
    signs = sign_comparison_report(pair, g)
    comp = [c.to_dict() for c in example_comparability(g, n)]
    sections["signs"] = {"passed": all(r["holds"] for r in signs) and _comparability_ok(comp),
                         "orderings": signs, "comparability": comp}
    order = {str(m): ordering_check(Potential.constant(-float(m * m)), None, n) for m in (0, 1, 2)}
    order["sampled"] = ordering_check(sampled_demo_potential(), None, n)
    sections["eigenvalues"] = {"passed": all(o["passed"] for o in order.values()), "cases": order}
    ex = reproduce_paper_example()
    sections["nonlinear_example"] = ex
    return all(s["passed"] for s in sections.values()), sections


def cmd_reproduce_all(args):
    ok, sections = reproduce_all(args.nodes, args.grid)
    summary = {name: bool(s["passed"]) for name, s in sections.items()}
    return (EXIT_OK if ok else EXIT_FAIL), {"passed": ok, "summary": summary, "sections": sections}


DISPATCH = {
    "fundamental": cmd_fundamental,
    "green": cmd_green,
    "verify": cmd_verify,
    "eigen": cmd_eigen,
    "zeros": cmd_zeros,
    "nonlinear": cmd_nonlinear,
    "reproduce-all": cmd_reproduce_all,
}


def _emit(payload, args):
    if isinstance(payload, tuple) and payload[0] == "csv":
        text = payload[1]
    else:
        text = hio.dumps(payload) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, payload = DISPATCH[args.command](args)
        _emit(payload, args)
        return code
    except HillGreenError as exc:
        print(f"hillgreen: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hillgreen: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(run())
