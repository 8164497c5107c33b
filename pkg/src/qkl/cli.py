"""Command-line front end: evaluate objects, run identity suites, sweep
parameter grids, and check orthonormality, with machine-readable reports.

Exit codes: 0 success, 1 identity failures, 2 bad input, 3 numerical
divergence.  Reports are byte-deterministic for a fixed configuration:
results are ordered by (identity, seed) and floats are rendered with 17
significant digits; no timestamps are embedded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import (
    ConvergenceError,
    DivergenceError,
    HypothesisError,
    ParamError,
    PoleError,
    QKLError,
)
from .exact import gr, verify_hahn_exact, verify_mult_2f1_exact
from .hyper import bhs_rphis, default_policy, gauss_2f1, hyp_pfq, vwp_8w7
from .identities import IdentityCase, get_entry, identity_ids, run_case, sample_params
from .kernels import (
    KernelPoint,
    ac_kernel_closed,
    ac_kernel_sum,
    mp_kernel_closed,
    mp_kernel_sum,
)
from .polys import (
    ASCParams,
    AWParams,
    CHahnParams,
    HahnParams,
    MPParams,
    asc_poly,
    aw_poly,
    chahn_poly,
    hahn_poly,
    jacobi_poly,
    mp_poly,
)
from .quadrature import ortho_gram

_EXACT_IDS = ("mult_2f1", "hahn_bilinear_discrete")


# ---------------------------------------------------------------------------
# deterministic rendering


def _fmt_float(x: float) -> str:
    if x != x:
        return '"nan"'
    if x in (float("inf"), float("-inf")):
        return f'"{x}"'
    return format(float(x), ".17g")


def render_json(obj, indent: int = 0) -> str:
    """Small deterministic JSON renderer: floats at 17 significant digits,
    complex values as [re, im] pairs, keys in insertion order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(f"{pad}  {json.dumps(k)}: {render_json(v, indent + 1)}"
                           for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ", ".join(render_json(v, indent + 1) for v in obj)
        return "[" + items + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, complex):
        return f"[{_fmt_float(obj.real)}, {_fmt_float(obj.imag)}]"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, dict):
        return json.dumps(v, separators=(",", ":"), default=str)
    return str(v)


# ---------------------------------------------------------------------------
# parameter parsing


def parse_value(text: str):
    """Parse a CLI parameter: int, float, complex (Python literal), a
    comma-separated list of those, or a bare string (enum values)."""
    if "," in text:
        return [parse_value(t) for t in text.split(",")]
    for conv in (int, float, complex):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_kv(tokens) -> dict:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParamError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = parse_value(val)
    return out


def load_params_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    out = {}
    for key, val in raw.items():
        if isinstance(val, list):
            if len(val) != 2:
                raise ParamError(f"complex parameter {key} needs [re, im]")
            out[key] = complex(val[0], val[1])
        else:
            out[key] = val
    return out


def _parse_seeds(text: str) -> list:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    params = parse_kv(args.params)
    target = args.target
    if target == "poly":
        value, meta = _eval_poly(params)
    elif target == "kernel":
        value, meta = _eval_kernel(params)
    elif target == "series":
        value, meta = _eval_series(params)
    else:
        raise ParamError(f"unknown eval target {target!r}")
    print(f"value = {_csv_cell(value)}")
    for key, v in meta.items():
        print(f"{key} = {v}")
    return 0


def _eval_poly(p: dict):
    family = p.pop("family", None)
    n = int(p.pop("n"))
    x = float(p.pop("x"))
    ortho = bool(p.pop("orthonormal", 0))
    if family == "mp":
        return mp_poly(MPParams(p["k"], p["phi"]), n, x, ortho), {}
    if family == "chahn":
        return chahn_poly(CHahnParams(p["a"], p["b"], p["c"], p["d"]), n, x), {}
    if family == "hahn":
        return hahn_poly(HahnParams(p["alpha"], p["beta"], int(p["N"])), n, x), {}
    if family == "jacobi":
        return jacobi_poly(p["alpha"], p["beta"], n, x), {}
    if family == "aw":
        return aw_poly(AWParams(p["q"], p["a"], p["b"], p["c"], p["d"]), n, x), {}
    if family == "asc":
        return asc_poly(ASCParams(p["q"], p["a"], p["b"]), n, x, ortho), {}
    raise ParamError(f"unknown polynomial family {family!r}")


def _eval_kernel(p: dict):
    family = p.pop("family", None)
    closed = bool(p.pop("closed", 0))
    if family == "mp":
        pt = KernelPoint(p["t"], p["x"], p["y"])
        if closed:
            return mp_kernel_closed(p["k"], p["phi"], pt), {}
        ev = mp_kernel_sum(p["k"], p["phi"], pt)
    elif family == "ac":
        pt = KernelPoint(p["t"], p["x"], p["y"], s=p["s"], sigma=p["sigma"])
        if closed:
            return ac_kernel_closed(p["k"], p["q"], pt), {}
        ev = ac_kernel_sum(p["k"], p["q"], pt)
    else:
        raise ParamError(f"unknown kernel family {family!r}")
    return ev.value, {"terms_used": ev.terms_used, "tail_estimate": ev.tail_estimate,
                      "status": ev.status.value}


def _eval_series(p: dict):
    kind = str(p.pop("type", "")).lower()
    policy = default_policy()
    if kind == "2f1":
        ev = gauss_2f1(p["a"], p["b"], p["c"], p["z"], policy)
    elif kind == "pfq":
        up = p["upper"] if isinstance(p["upper"], list) else [p["upper"]]
        lo = p.get("lower", [])
        lo = lo if isinstance(lo, list) else [lo]
        ev = hyp_pfq(up, lo, p["z"], policy)
    elif kind == "rphis":
        up = p["upper"] if isinstance(p["upper"], list) else [p["upper"]]
        lo = p.get("lower", [])
        lo = lo if isinstance(lo, list) else [lo]
        ev = bhs_rphis(up, lo, p["q"], p["z"], policy)
    elif kind == "8w7":
        bs = p["b"]
        ev = vwp_8w7(p["a"], bs, p["q"], p["z"], policy)
    else:
        raise ParamError(f"unknown series type {kind!r}")
    return ev.value, {"terms_used": ev.terms_used, "tail_estimate": ev.tail_estimate,
                      "status": ev.status.value}


# ---------------------------------------------------------------------------
# check


def _exact_rational_sets(identity_id: str, seeds):
    """Deterministic rational parameter sets for the exact route."""
    import random

    sets = []
    for seed in seeds:
        rng = random.Random(f"qkl:exact:{identity_id}:{seed}")

        def frac(lo, hi, den_max=9):
            den = rng.randrange(2, den_max)
            num = rng.randrange(int(lo * den), int(hi * den) + 1)
            return Fraction(num, den)

        if identity_id == "mult_2f1":
            while True:
                vals = dict(a=frac(-2, 2), b=frac(-2, 2), c=frac(1, 3),
                            a2=frac(-2, 2), b2=frac(-2, 2), c2=frac(1, 3))
                if seed % 3 == 2:
                    vals["a"] = gr(vals["a"], frac(-1, 1))
                    vals["b2"] = gr(vals["b2"], frac(-1, 1))
                ok = True
                for u, u2 in (("a", "a2"), ("b", "b2")):
                    s = gr(0) + vals[u] + vals[u2]
                    if s.is_nonpositive_integer():
                        ok = False
                if ok:
                    sets.append((seed, vals))
                    break
        elif identity_id == "hahn_bilinear_discrete":
            M = rng.randrange(2, 7)
            N = rng.randrange(2, 7)
            vals = dict(alpha=frac(0, 3), beta=frac(0, 3), M=M, N=N,
                        z=frac(-2, 2))
            sets.append((seed, vals))
        else:
            raise ParamError(
                f"--exact supports only {', '.join(_EXACT_IDS)}, not {identity_id}")
    return sets


def _run_exact(identity_id: str, seeds, K: int):
    results = []
    n_pass = n_fail = n_err = 0
    for seed, vals in _exact_rational_sets(identity_id, seeds):
        rec = {"identity": identity_id, "seed": seed, "exact": True,
               "params": {k: str(v) for k, v in vals.items()}}
        try:
            if identity_id == "mult_2f1":
                ok, bad_k = verify_mult_2f1_exact(
                    vals["a"], vals["b"], vals["c"],
                    vals["a2"], vals["b2"], vals["c2"], K=K)
                rec["passed"] = ok
                if not ok:
                    rec["first_failing_k"] = bad_k
            else:
                M, N = vals["M"], vals["N"]
                ok = all(verify_hahn_exact(gr(vals["alpha"]), gr(vals["beta"]),
                                           M, N, x, y, gr(vals["z"]))
                         for x in range(M + 1) for y in range(N + 1))
                rec["passed"] = ok
            n_pass += ok
            n_fail += not ok
        except QKLError as exc:
            rec["passed"] = False
            rec["error"] = f"{type(exc).__name__}: {exc}"
            n_err += 1
        results.append(rec)
    return results, n_pass, n_fail, n_err


def cmd_check(args) -> int:
    if args.all:
        idents = identity_ids()
    elif args.identity:
        idents = list(args.identity)
        for ident in idents:
            get_entry(ident)
    else:
        raise ParamError("check requires --identity or --all")
    seeds = _parse_seeds(args.seeds)
    file_params = load_params_file(args.params) if args.params else None

    results = []
    n_pass = n_fail = n_err = 0
    if args.exact:
        for ident in sorted(idents):
            res, p_, f_, e_ = _run_exact(ident, seeds, args.K)
            results.extend(res)
            n_pass += p_
            n_fail += f_
            n_err += e_
    else:
        for ident in sorted(idents):
            for seed in seeds:
                rec = {"identity": ident, "seed": seed}
                try:
                    if file_params is not None:
                        case = IdentityCase(ident, file_params, tol_rel=args.tol,
                                            seed=seed)
                    else:
                        base = sample_params(ident, seed)
                        case = IdentityCase(ident, base.params, tol_rel=args.tol,
                                            seed=seed)
                    rep = run_case(case, precision=args.precision)
                    rec.update(passed=rep.passed, rel_err=rep.rel_err,
                               abs_err=rep.abs_err, lhs=rep.lhs, rhs=rep.rhs,
                               precision=rep.precision_used, terms=rep.terms)
                    if rep.note:
                        rec["note"] = rep.note
                    n_pass += rep.passed
                    n_fail += not rep.passed
                except QKLError as exc:
                    rec["passed"] = False
                    rec["error"] = f"{type(exc).__name__}: {exc}"
                    n_err += 1
                results.append(rec)
    report = {
        "run": {
            "command": "check",
            "config": {
                "identities": sorted(idents),
                "seeds": seeds,
                "tol_rel": args.tol,
                "precision": args.precision,
                "exact": bool(args.exact),
                "K": args.K,
            },
            "version": __version__,
        },
        "results": results,
    }
    _write_report(report, args.out, args.format)
    print(f"{n_pass} passed / {n_fail} failed / {n_err} errored")
    return 0 if n_fail == 0 and n_err == 0 else 1


def _write_report(report: dict, out: str | None, fmt: str):
    path = out or ("qkl_report." + ("json" if fmt == "json" else "csv"))
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_json(report) + "\n")
    else:
        import csv as csvmod

        rows = report["results"]
        cols = sorted({k for row in rows for k in row})
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csvmod.writer(fh)
            writer.writerow(cols)
            for row in rows:
                writer.writerow([_csv_cell(row.get(c, "")) for c in cols])
    print(f"report written to {path}")


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    entry = get_entry(args.identity)
    grids = []
    for grid_arg in args.grid:
        if "=" not in grid_arg:
            raise ParamError(f"--grid expects name=v1,v2,..., got {grid_arg!r}")
        name, vals = grid_arg.split("=", 1)
        if name not in entry.param_names:
            raise ParamError(
                f"{name!r} is not a parameter of {args.identity} "
                f"(has: {', '.join(entry.param_names)})")
        parsed = parse_value(vals)
        grids.append((name, parsed if isinstance(parsed, list) else [parsed]))
    if not grids:
        raise ParamError("sweep requires at least one --grid")
    base = (load_params_file(args.params) if args.params
            else sample_params(args.identity, _parse_seeds(args.seeds)[0]).params)

    import itertools

    names = [g[0] for g in grids]
    rows = []
    for combo in itertools.product(*(g[1] for g in grids)):
        params = dict(base)
        params.update(dict(zip(names, combo)))
        row = {n: v for n, v in zip(names, combo)}
        try:
            rep = run_case(IdentityCase(args.identity, params, tol_rel=args.tol),
                           precision=args.precision)
            row.update(rel_err=rep.rel_err, abs_err=rep.abs_err,
                       lhs=rep.lhs, rhs=rep.rhs, error="")
        except QKLError as exc:
            row.update(rel_err="", abs_err="", lhs="", rhs="",
                       error=f"{type(exc).__name__}")
        rows.append(row)
    cols = names + ["lhs", "rhs", "rel_err", "abs_err", "error"]
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(c, "")) for c in cols))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"sweep written to {args.out} ({len(rows)} rows)")
    else:
        print(text, end="")
    return 0


# ---------------------------------------------------------------------------
# ortho


def cmd_ortho(args) -> int:
    params = parse_kv(args.params)
    family = params.pop("family", None)
    if family not in ("mp", "asc"):
        raise ParamError("ortho requires family=mp or family=asc")
    res = ortho_gram(family, params, nmax=args.nmax, tol=args.tol)
    n = res.value.shape[0]
    off = max(abs(res.value[i][j]) for i in range(n) for j in range(n) if i != j)
    diag = max(abs(res.value[i][i] - 1.0) for i in range(n))
    print(f"gram {n}x{n}: max |off-diagonal| = {off:.3e}, "
          f"max |diagonal - 1| = {diag:.3e}")
    print(f"error_estimate = {res.error_estimate:.3e}, evaluations = {res.evaluations}")
    if args.out:
        report = {
            "run": {"command": "ortho",
                    "config": {"family": family, "params": params,
                               "nmax": args.nmax, "tol": args.tol},
                    "version": __version__},
            "results": [{"gram": [[float(v) for v in row] for row in res.value],
                         "max_offdiag": off, "max_diag_dev": diag,
                         "error_estimate": res.error_estimate,
                         "evaluations": res.evaluations}],
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(render_json(report) + "\n")
        print(f"report written to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qkl",
        description="evaluate and machine-verify bilinear generating-function "
                    "identities for (basic) hypergeometric orthogonal polynomials")
    ap.add_argument("--version", action="version", version=f"qkl {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a polynomial, kernel, or series")
    p_eval.add_argument("target", choices=["poly", "kernel", "series"])
    p_eval.add_argument("params", nargs="*", help="key=value parameters")
    p_eval.set_defaults(func=cmd_eval)

    p_check = sub.add_parser("check", help="run identity verification suites")
    p_check.add_argument("--identity", action="append", help="identity id (repeatable)")
    p_check.add_argument("--all", action="store_true", help="run every identity")
    p_check.add_argument("--seeds", default="0..9", help="seed range A..B (default 0..9)")
    p_check.add_argument("--params", help="JSON file of explicit parameters")
    p_check.add_argument("--tol", type=float, default=1e-8)
    p_check.add_argument("--precision", choices=["standard", "extended", "auto"],
                         default="auto")
    p_check.add_argument("--exact", action="store_true",
                         help="exact rational verification (mult_2f1, "
                              "hahn_bilinear_discrete)")
    p_check.add_argument("--K", type=int, default=8,
                         help="power-series order for exact mult_2f1")
    p_check.add_argument("--out", help="report path")
    p_check.add_argument("--format", choices=["json", "csv"], default="json")
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="evaluate an identity on a parameter grid")
    p_sweep.add_argument("--identity", required=True)
    p_sweep.add_argument("--grid", action="append", default=[],
                         help="name=v1,v2,... (repeatable)")
    p_sweep.add_argument("--params", help="JSON file of base parameters")
    p_sweep.add_argument("--seeds", default="0", help="seed for base parameters")
    p_sweep.add_argument("--tol", type=float, default=1e-8)
    p_sweep.add_argument("--precision", choices=["standard", "extended", "auto"],
                         default="auto")
    p_sweep.add_argument("--out", help="CSV path (stdout when omitted)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ortho = sub.add_parser("ortho", help="orthonormality Gram-matrix check")
    p_ortho.add_argument("params", nargs="*",
                         help="family=mp|asc plus family parameters")
    p_ortho.add_argument("--nmax", type=int, default=8)
    p_ortho.add_argument("--tol", type=float, default=1e-9)
    p_ortho.add_argument("--out", help="JSON report path")
    p_ortho.set_defaults(func=cmd_ortho)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DivergenceError, ConvergenceError) as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 3
    except (ParamError, HypothesisError, PoleError, QKLError, KeyError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
