"""Command-line front end.

Subcommands: solve, converge, validate (stochastic adaptive run), fpa
(floating-point adaptive run) and stability.  Data goes to stdout or the
``--csv`` path, diagnostics to stderr.

Exit codes: 0 success, 1 usage, 2 config or parse error, 3 numerical failure
(singular system, degenerate kernel, non-convergence).
"""
import argparse
import sys

from .collocation import solve, sup_error
from .config import BUILTIN_CONFIGS, load_config
from .driver import (DEFAULT_T_EVAL, StopRule, adaptive_solve, convergence_study,
                     stability_study, write_adaptive_csv, write_convergence_csv,
                     write_stability_csv)
from .errors import (ConfigError, DegenerateDiagonalError, DomainError, EvaluationError,
                     ModelError, ParameterError, SingularSystemError, UnreliableDivisionError,
                     VolterraError)
from .problem import reduce
from .problems import BUILTIN

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(v):
    """Six significant digits in scientific notation; blank for missing."""
    return "" if v is None else f"{v:.5e}"


def _int_list(text):
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out or any(n < 1 for n in out):
        raise argparse.ArgumentTypeError("N values must be positive")
    return out


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--problem", choices=sorted(BUILTIN), help="built-in problem")
    src.add_argument("--config", help="problem description file (volterra-config v1)")
    common.add_argument("--r", type=int, help="nodes per segment (default 5)")
    common.add_argument("--quad-points", type=int, help="Gauss points per piece (default max(2, r-2))")
    common.add_argument("--no-continuity", action="store_true",
                        help="collocate all r nodes per segment (allows jumps at knots)")
    common.add_argument("--csv", metavar="PATH", help="write the data table to PATH")

    p = _Parser(prog="volterra-colloc",
                description="Spline collocation for first-kind Volterra equations "
                            "with jump-discontinuous kernels.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="solve once for given N and r")
    s.add_argument("--N", type=int, help="number of segments (default 5)")
    s.add_argument("--dump-spline", nargs="?", const="-", metavar="PATH",
                   help="print spline coefficients (to PATH if given)")

    c = sub.add_parser("converge", parents=[common], help="sup error over a list of N")
    c.add_argument("--Ns", type=_int_list, default=[1, 5, 10, 20])

    for name, text in (("validate", "adaptive N with stochastic arithmetic"),
                       ("fpa", "adaptive N with a floating-point tolerance")):
        a = sub.add_parser(name, parents=[common], help=text)
        a.add_argument("--t-eval", type=float, help=f"probe point (default {DEFAULT_T_EVAL})")
        a.add_argument("--max-N", type=int, help="largest N tried (default 10)")
        if name == "validate":
            a.add_argument("--sa-seed", type=int, default=0)
            a.add_argument("--precision", choices=("single", "double"), default="single",
                           help="working precision emulated by random rounding")
        else:
            a.add_argument("--epsilon", type=float, help="stop when |x_N - x_{N-1}| <= epsilon")

    st = sub.add_parser("stability", parents=[common], help="error growth under noisy f")
    st.add_argument("--N", type=int, help="number of segments (default 5)")
    st.add_argument("--deltas", type=_float_list, default=[0.0, 1e-5, 1e-4, 1e-3, 1e-2])
    st.add_argument("--sa-seed", type=int, default=0, help="seed of the noise generator")
    st.add_argument("--stability-trials", type=int, default=1,
                    help="report the median over this many trials")
    return p


def _load(args):
    if args.config:
        cfg = load_config(args.config)
        return cfg.to_problem(), cfg.defaults
    name = args.problem or "example1"
    cfg = BUILTIN_CONFIGS.get(name)
    return BUILTIN[name](), (cfg.defaults if cfg else {})


def _pick(value, defaults, key, fallback):
    if value is not None:
        return value
    return defaults.get(key, fallback)


def _emit_csv(args, writer, report, out):
    if args.csv is None:
        return
    if args.csv == "-":
        writer(report, out)
        return
    with open(args.csv, "w", encoding="utf-8", newline="") as fh:
        writer(report, fh)


def _cmd_solve(args, problem, defaults, out):
    r = _pick(args.r, defaults, "r", 5)
    N = _pick(args.N, defaults, "N", 5)
    red = reduce(problem)
    sol = solve(red, N, r, args.quad_points, continuity=not args.no_continuity)
    print(f"# {problem.name}  N={N}  r={r}", file=out)
    print(f"residual_norm {fmt(sol.residual_norm)}", file=out)
    if problem.exact is not None:
        print(f"sup_error {fmt(sup_error(sol, problem.exact))}", file=out)
    if args.dump_spline == "-":
        out.write(sol.spline.dump())
    elif args.dump_spline:
        with open(args.dump_spline, "w", encoding="utf-8") as fh:
            fh.write(sol.spline.dump())
    return EXIT_OK


def _cmd_converge(args, problem, defaults, out):
    r = _pick(args.r, defaults, "r", 5)
    table = convergence_study(problem, r, args.Ns, m_quad=args.quad_points,
                              continuity=not args.no_continuity)
    print(f"# {problem.name}  r={r}", file=out)
    print(f"{'N':>5}  {'error':>12}  {'order':>12}", file=out)
    for n, e, o in zip(table.Ns, table.errors, table.local_orders):
        print(f"{n:>5}  {fmt(e):>12}  {fmt(o):>12}", file=out)
    print(f"fitted_order {fmt(table.order)}", file=out)
    _emit_csv(args, write_convergence_csv, table, out)
    return EXIT_OK


def _cmd_adaptive(args, problem, defaults, out):
    r = _pick(args.r, defaults, "r", 5)
    common = dict(t_eval=_pick(args.t_eval, defaults, "t_eval", DEFAULT_T_EVAL),
                  max_N=_pick(args.max_N, defaults, "max_N", 10))
    if args.command == "validate":
        rule = StopRule("sa", seed=args.sa_seed, precision=args.precision, **common)
    else:
        rule = StopRule("fpa", epsilon=_pick(args.epsilon, defaults, "epsilon", 1e-14), **common)
    report = adaptive_solve(problem, r, rule, args.quad_points,
                            continuity=not args.no_continuity)
    print(f"# {problem.name}  r={r}  t={rule.t_eval}  mode={rule.mode}", file=out)
    print(f"{'N':>3}  {'x_N(t)':>13}  {'|x_N - x_N-1|':>13}  {'ncsd':>12}", file=out)
    for row in report.rows:
        diff = "@.0" if (row.informatical_zero and rule.mode == "sa") else fmt(row.diff)
        print(f"{row.N:>3}  {fmt(row.value):>13}  {diff:>13}  {fmt(row.ncsd):>12}", file=out)
    _emit_csv(args, write_adaptive_csv, report, out)
    if not report.converged:
        print(f"no stop within N <= {rule.max_N}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"N_opt {report.N_opt}", file=out)
    print(f"error_opt {fmt(report.error_opt)}", file=out)
    return EXIT_OK


def _cmd_stability(args, problem, defaults, out):
    r = _pick(args.r, defaults, "r", 5)
    N = _pick(args.N, defaults, "N", 5)
    if args.stability_trials < 1:
        raise ParameterError("--stability-trials must be at least 1")
    report = stability_study(problem, N, r, args.deltas, args.sa_seed, args.stability_trials,
                             m_quad=args.quad_points)
    print(f"# {problem.name}  N={N}  r={r}  seed={report.seed}  trials={report.trials}",
          file=out)
    print(f"{'delta':>12}  {'error':>12}", file=out)
    for d, e in zip(report.deltas, report.errors):
        print(f"{fmt(d):>12}  {fmt(e):>12}", file=out)
    _emit_csv(args, write_stability_csv, report, out)
    return EXIT_OK


_COMMANDS = {"solve": _cmd_solve, "converge": _cmd_converge, "validate": _cmd_adaptive,
             "fpa": _cmd_adaptive, "stability": _cmd_stability}


def run(argv=None, out=None):
    """Run the CLI and return the exit code."""
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        problem, defaults = _load(args)
        return _COMMANDS[args.command](args, problem, defaults, out)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ModelError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSystemError, DegenerateDiagonalError, EvaluationError, DomainError,
            UnreliableDivisionError, VolterraError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main():
    sys.exit(run())
