"""Command line front end.

    fuchsode solve <file> [--out DIR]
    fuchsode bound <file> [--delta-k X|oracle] [--out DIR]
    fuchsode selftest
    fuchsode plot <file> --grid a:b:step --digits n

Exit codes: 0 success, 1 selftest failure, 2 schema error, 3 operator
validation error, 4 solver error, 5 infeasible bound. Errors print the
exception class name on stderr. Artifact files depend only on the problem
file, so repeated runs produce byte-identical output.
"""

import argparse
import json
import os
import sys

from .arith import decimal_render, format_complex, format_rational, parse_rational
from .bounds import bound_coeffs, g_threshold_ok
from .errors import OPERATOR_ERRORS, InfeasibleBound, SchemaError, SolverError
from .evaluate import (
    EvaluatedSolution,
    emit_plot_data,
    eval_at,
    parse_grid,
    ratio_coeffs,
    ratio_points,
)
from .solver import load_problem, solve

__all__ = ["main", "cmd_solve", "cmd_bound", "cmd_selftest", "cmd_plot", "SELFTEST_MUTATION_ENV"]

SELFTEST_MUTATION_ENV = "FUCHSODE_SELFTEST_MUTATE"

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_OPERATOR, EXIT_SOLVER, EXIT_INFEASIBLE = 0, 1, 2, 3, 4, 5


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _fail(exc, code):
    print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
    return code


def _guarded(fn):
    """Map exceptions to the exit-code contract."""
    try:
        return fn()
    except SchemaError as exc:
        return _fail(exc, EXIT_SCHEMA)
    except OSError as exc:
        return _fail(SchemaError(str(exc)), EXIT_SCHEMA)
    except OPERATOR_ERRORS as exc:
        return _fail(exc, EXIT_OPERATOR)
    except (SolverError, ValueError, ZeroDivisionError) as exc:
        return _fail(exc, EXIT_SOLVER)


def _view(result, index, normalization, convention="psi"):
    sol = result.evaluated(index, normalization)
    if convention == "conjugate":
        sol = EvaluatedSolution(tuple(c.conj() for c in sol.coeffs), sol.k0, sol.normalization)
    return sol


def _coeff_file(result, opts):
    norm = opts.get("normalization", "raw")
    conv = opts.get("convention", "psi")
    sol = result.solution
    vectors = []
    for i in range(len(sol.G)):
        view = _view(result, i, norm, conv)
        vectors.append([format_complex(c) for c in view.coeffs])
    return {
        "name": result.problem.name,
        "N": result.spec.N,
        "K": result.spec.K,
        "J": result.spec.J,
        "k0": result.problem.operator.k0,
        "D": sol.D,
        "D_l2": len(sol.G),
        "normalization": norm,
        "convention": conv,
        "sigma": [format_rational(s) for s in sol.sigma],
        "vectors": vectors,
    }


def _ratio_file(result, opts):
    conv = opts.get("convention", "psi")
    digits = opts.get("digits", 20)
    sol = result.evaluated(0)
    out = {"convention": conv, "coeffs": [], "points": []}
    for n, m in opts.get("coeffs", []):
        r = ratio_coeffs(sol, n, m, conjugate=conv == "conjugate")
        out["coeffs"].append({"n": n, "m": m, "exact": format_complex(r),
                              "re": decimal_render(r.re, 1, digits), "im": decimal_render(r.im, 1, digits)})
    for x0, x1 in opts.get("points", []):
        a, b = parse_rational(x0), parse_rational(x1)
        r = ratio_points(sol, a, b)
        if conv == "conjugate":
            r = r.conj()
        out["points"].append({"x0": format_rational(a), "x1": format_rational(b), "exact": format_complex(r),
                              "re": decimal_render(r.re, 1, digits), "im": decimal_render(r.im, 1, digits)})
    return out


def _points_file(result, opts):
    norm = opts.get("normalization", "raw")
    digits = opts.get("digits", 20)
    sol = result.evaluated(0, norm)
    rows = []
    for x in opts["x"]:
        x = parse_rational(x)
        v = eval_at(sol, x)
        row = {"x": format_rational(x), "exact": format_complex(v)}
        if norm == "raw":
            row["note"] = "exact value omits the factor pi^(-1/2)"
        rows.append(row)
    lines = emit_plot_data(sol, [parse_rational(x) for x in opts["x"]], digits)
    return {"normalization": norm, "values": rows, "decimal": lines[1:]}


def _summary(result):
    sol = result.solution
    d = result.diagnostics
    lines = [
        "problem   %s" % result.problem.name,
        "N=%d K=%d J=%d" % (d["N"], d["K"], d["J"]),
        "D=%d ell0=%d j0=%d p0=%d" % (d["D"], d["ell0"], d["j0"], d["p0"]),
        "D_l2 (selected)=%d" % len(sol.G),
    ]
    if "suggested_dim" in d:
        lines.append("D_l2 (suggested)=%s" % d["suggested_dim"])
        lines.append("sigma (all)=%s" % " ".join(decimal_render(s, 1, 6) for s in d["sigma_all"]))
    lines.append("sigma=%s" % " ".join(decimal_render(s, 1, 10) for s in sol.sigma))
    for phase, c in sorted(sol.iteration_log.get("phases", {}).items()):
        lines.append("%-3s passes=%d reductions=%d doublings=%d"
                     % (phase, c["passes"], c["reductions"], c["doublings"]))
    return "\n".join(lines)


def cmd_solve(path, out_dir="."):
    def run():
        problem = load_problem(path)
        outputs = problem.outputs
        if "bound" in outputs:
            problem = problem.with_solver(compute_bound_data=True)
        result = solve(problem)
        name = problem.name
        _write(out_dir, name + ".coeffs.json", _dump(_coeff_file(result, outputs.get("coeffs", {}))))
        if "ratios" in outputs:
            _write(out_dir, name + ".ratios.json", _dump(_ratio_file(result, outputs["ratios"])))
        if "points" in outputs:
            _write(out_dir, name + ".points.json", _dump(_points_file(result, outputs["points"])))
        if "plot" in outputs:
            opts = outputs["plot"]
            sol = result.evaluated(0, opts.get("normalization", "raw"))
            grid = parse_grid(opts.get("grid", "-4:4:1/4"))
            _write(out_dir, name + ".plot.csv", "\n".join(emit_plot_data(sol, grid, opts.get("digits", 8))) + "\n")
        print(_summary(result))
        if "bound" in outputs:
            return _bound_from_result(problem, result, outputs["bound"].get("delta_K"), outputs["bound"], out_dir)
        return EXIT_OK
    return _guarded(run)


def _bound_from_result(problem, result, delta_arg, opts, out_dir):
    sol = result.solution
    Dl2 = len(sol.G)
    if not g_threshold_ok(result.params.g, Dl2):
        print("warning: g=%d is below the threshold for D_l2=%d; bound still attempted"
              % (result.params.g, Dl2), file=sys.stderr)
    delta = None
    if delta_arg == "oracle":
        from .oracles import delta_from_sq, oracle_delta_K

        N_ref = opts.get("N_ref") or 2 * result.spec.N
        delta = delta_from_sq(oracle_delta_K(problem, result.spec.K, N_ref))
    elif delta_arg is not None:
        delta = parse_rational(delta_arg)
        if delta < 0:
            raise SchemaError("delta_K must be nonnegative")
    report = bound_coeffs(sol, result.params, result.spec, Dl2, opts.get("digits", 20),
                          problem.flags["bound_form"])
    out = report.to_json(delta)
    if delta is not None:
        out["delta_K_exact"] = format_rational(delta)
    _write(out_dir, problem.name + ".bound.json", _dump(out))
    print("bound: feasible=%s A=%s B=%s%s" % (report.feasible, report.A, report.B,
                                              " value=%s" % out["bound"] if "bound" in out else ""))
    if not report.feasible:
        return _fail(InfeasibleBound("Gamma does not exceed xi*C"), EXIT_INFEASIBLE)
    return EXIT_OK


def cmd_bound(path, delta_k=None, out_dir="."):
    def run():
        problem = load_problem(path)
        problem = problem.with_solver(compute_bound_data=True)
        opts = problem.outputs.get("bound", {})
        result = solve(problem)
        print(_summary(result))
        return _bound_from_result(problem, result, delta_k if delta_k is not None else opts.get("delta_K"),
                                  opts, out_dir)
    return _guarded(run)


def cmd_plot(path, grid, digits, out=None):
    def run():
        problem = load_problem(path)
        try:
            points = parse_grid(grid)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(str(exc)) from None
        if digits < 0:
            raise SchemaError("digits must be nonnegative")
        result = solve(problem)
        norm = problem.outputs.get("plot", {}).get("normalization", "raw")
        text = "\n".join(emit_plot_data(result.evaluated(0, norm), points, digits)) + "\n"
        if out:
            _write(os.path.dirname(out) or ".", os.path.basename(out), text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    return _guarded(run)


def cmd_selftest(report_path=None):
    from .selftest import run_selftest

    report = run_selftest(mutation=os.environ.get(SELFTEST_MUTATION_ENV, ""))
    text = _dump(report)
    if report_path:
        _write(os.path.dirname(report_path) or ".", os.path.basename(report_path), text)
    sys.stdout.write(text)
    failed = [s["name"] for s in report["suites"] if not s["passed"]]
    if failed:
        print("selftest failed: %s" % ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None):
    ap = argparse.ArgumentParser(prog="fuchsode", description="Exact solver for Fuchsian-type linear ODEs.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("solve", help="solve a problem file and write its artifacts")
    p.add_argument("file")
    p.add_argument("--out", default=".")
    p = sub.add_parser("bound", help="solve and write the error-bound report")
    p.add_argument("file")
    p.add_argument("--delta-k", dest="delta_k", default=None, help="rational value or 'oracle'")
    p.add_argument("--out", default=".")
    p = sub.add_parser("selftest", help="run the embedded invariant corpus")
    p.add_argument("--report", default=None)
    p = sub.add_parser("plot", help="print CSV values of the first solution on a grid")
    p.add_argument("file")
    p.add_argument("--grid", required=True)
    p.add_argument("--digits", type=int, default=8)
    p.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    if args.cmd == "solve":
        return cmd_solve(args.file, args.out)
    if args.cmd == "bound":
        return cmd_bound(args.file, args.delta_k, args.out)
    if args.cmd == "selftest":
        return cmd_selftest(args.report)
    return cmd_plot(args.file, args.grid, args.digits, args.out)


if __name__ == "__main__":
    sys.exit(main())
